#include "omega/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "omega/errors.hpp"

namespace omega {

namespace {

struct Representation {
    double v;
    std::int64_t key;
    unsigned degree;
};

double binomial(std::size_t n, std::size_t k) {
    return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1));
}

std::complex<double> unit(double turns) {
    const double frac = turns - std::floor(turns);
    return std::polar(1.0, 2 * std::numbers::pi * frac);
}

void accumulate(ExpansionEntry& e, unsigned degree, double r, unsigned degree_bound) {
    const double w = std::pow(r, static_cast<double>(degree));
    e.coefficient += w;
    if (degree + 1 <= degree_bound) e.inner += w;
    e.squared_weight += w * w;
    if (e.representations == 0) {
        e.min_degree = degree;
        e.max_degree = degree;
    } else {
        e.min_degree = std::min(e.min_degree, degree);
        e.max_degree = std::max(e.max_degree, degree);
    }
    ++e.representations;
}

}  // namespace

FrequencySet FrequencySet::real(std::vector<double> lambdas, double r) {
    FrequencySet fs;
    fs.lambdas = std::move(lambdas);
    fs.r = r;
    fs.validate();
    return fs;
}

FrequencySet FrequencySet::rational(std::vector<std::int64_t> numerators, std::int64_t denominator, double r) {
    if (denominator <= 0) throw DomainError("denominator must be positive");
    FrequencySet fs;
    fs.numerators = std::move(numerators);
    fs.denominator = denominator;
    fs.r = r;
    for (const std::int64_t p : fs.numerators) {
        fs.lambdas.push_back(static_cast<double>(p) / static_cast<double>(denominator));
    }
    fs.validate();
    return fs;
}

void FrequencySet::validate() const {
    if (lambdas.empty()) throw DomainError("frequency set must be nonempty");
    if (!(r > 0 && r < 1)) throw DomainError("r must lie in (0, 1)");
    for (const double l : lambdas) {
        if (!(l > 0) || !std::isfinite(l)) throw DomainError("frequencies must be positive");
    }
    if (exact()) {
        if (numerators.size() != lambdas.size()) throw DomainError("numerator count mismatch");
        for (const std::int64_t p : numerators) {
            if (p <= 0) throw DomainError("rational frequencies must be positive");
        }
    }
}

const ExpansionEntry* ResonatorExpansion::find(double v) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), v,
                               [](const ExpansionEntry& e, double value) { return e.v < value; });
    const double tol = merge_tol * std::max(1.0, std::fabs(v));
    const ExpansionEntry* best = nullptr;
    double best_gap = tol;
    for (auto cand : {it, it == entries.begin() ? entries.end() : std::prev(it)}) {
        if (cand == entries.end()) continue;
        const double gap = std::fabs(cand->v - v);
        if (gap <= best_gap) {
            best = &*cand;
            best_gap = gap;
        }
    }
    return best;
}

const ExpansionEntry* ResonatorExpansion::find_key(std::int64_t key) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const ExpansionEntry& e, std::int64_t k) { return e.key < k; });
    return (it != entries.end() && it->key == key) ? &*it : nullptr;
}

double ResonatorExpansion::total() const {
    double sum = 0;
    for (const ExpansionEntry& e : entries) sum += e.coefficient;
    return sum;
}

double ResonatorExpansion::squared_total() const {
    double sum = 0;
    for (const ExpansionEntry& e : entries) sum += e.squared_weight;
    return sum;
}

std::complex<double> ResonatorExpansion::evaluate(double t) const {
    std::complex<double> sum = 0;
    for (const ExpansionEntry& e : entries) sum += e.coefficient * unit(e.v * t);
    return sum;
}

ResonatorExpansion expand(const FrequencySet& fs, unsigned degree_bound, std::optional<double> merge_tol,
                          std::size_t enumeration_budget) {
    fs.validate();
    if (degree_bound == 0) throw DomainError("degree bound must be at least 1");
    const std::size_t m = fs.size();
    const double count = binomial(m + degree_bound, degree_bound);
    if (count > static_cast<double>(enumeration_budget)) {
        throw SizeError("C(M+B, B) = " + std::to_string(count) + " exceeds enumeration budget " +
                        std::to_string(enumeration_budget));
    }

    ResonatorExpansion out;
    out.size = m;
    out.r = fs.r;
    out.degree_bound = degree_bound;
    out.merge_tol = merge_tol.value_or(kDefaultMergeTolerance);
    if (out.merge_tol < 0) throw DomainError("merge tolerance must be nonnegative");
    out.exact_keys = fs.exact();
    out.denominator = fs.denominator;
    out.dropped_mass = multinomial_tail(m, fs.r, degree_bound);

    // Lexicographic walk over b with sum(b) <= B.
    std::vector<Representation> reps;
    reps.reserve(static_cast<std::size_t>(count));
    auto walk = [&](auto&& self, std::size_t index, unsigned used, double v, std::int64_t key) -> void {
        if (index == m) {
            reps.push_back({v, key, used});
            return;
        }
        for (unsigned k = 0; used + k <= degree_bound; ++k) {
            std::int64_t next_key = key;
            if (out.exact_keys) {
                if (__builtin_mul_overflow(static_cast<std::int64_t>(k), fs.numerators[index], &next_key) ||
                    __builtin_add_overflow(next_key, key, &next_key)) {
                    throw OverflowError("exact frequency key");
                }
            }
            self(self, index + 1, used + k, v + k * fs.lambdas[index], next_key);
        }
    };
    walk(walk, 0, 0, 0.0, 0);

    if (out.exact_keys) {
        std::map<std::int64_t, ExpansionEntry> merged;
        for (const Representation& rep : reps) {
            ExpansionEntry& e = merged[rep.key];
            e.key = rep.key;
            e.v = static_cast<double>(rep.key) / static_cast<double>(fs.denominator);
            accumulate(e, rep.degree, fs.r, degree_bound);
        }
        out.entries.reserve(merged.size());
        for (auto& [key, e] : merged) out.entries.push_back(e);
        return out;
    }

    // stable_sort keeps the enumeration order among equal values.
    std::stable_sort(reps.begin(), reps.end(),
                     [](const Representation& a, const Representation& c) { return a.v < c.v; });
    for (const Representation& rep : reps) {
        if (!out.entries.empty()) {
            ExpansionEntry& last = out.entries.back();
            if (rep.v - last.v <= out.merge_tol * std::max(1.0, std::fabs(last.v))) {
                accumulate(last, rep.degree, fs.r, degree_bound);
                continue;
            }
        }
        ExpansionEntry e;
        e.v = rep.v;
        accumulate(e, rep.degree, fs.r, degree_bound);
        out.entries.push_back(e);
    }
    return out;
}

std::complex<double> eval_product(const FrequencySet& fs, double t) {
    std::complex<double> product = 1.0;
    for (const double lambda : fs.lambdas) product /= 1.0 - fs.r * unit(lambda * t);
    return product;
}

double multinomial_tail(std::size_t m, double q, unsigned degree_bound) {
    if (!(q > 0 && q < 1)) throw DomainError("tail ratio must lie in (0, 1)");
    if (m == 0) return 0.0;
    const double md = static_cast<double>(m);
    unsigned k = degree_bound + 1;
    // t_k = C(M+k-1, k) q^k
    double term = std::exp(std::lgamma(md + k) - std::lgamma(k + 1.0) - std::lgamma(md) + k * std::log(q));
    double sum = 0;
    for (;; ++k) {
        sum += term;
        const double ratio = q * (md + k) / (k + 1.0);
        const double next = term * ratio;
        if (ratio < 1 && next <= 1e-17 * sum) {
            // Ratios decrease towards q, so the remainder is geometric-bounded.
            sum += next / (1 - ratio);
            break;
        }
        term = next;
        if (term == 0) break;
    }
    return sum;
}

bool shift_inequality_check(const ResonatorExpansion& expansion, const FrequencySet& fs) {
    if (expansion.degree_bound < 2) throw DomainError("shift check needs an expansion with B >= 2");
    for (const ExpansionEntry& e : expansion.entries) {
        if (e.inner <= 0) continue;
        for (std::size_t n = 0; n < fs.size(); ++n) {
            const ExpansionEntry* shifted = expansion.exact_keys
                                                ? expansion.find_key(e.key + fs.numerators[n])
                                                : expansion.find(e.v + fs.lambdas[n]);
            if (shifted == nullptr) return false;
            if (shifted->coefficient < fs.r * e.inner - 1e-14) return false;
        }
    }
    return true;
}

SquareBoundReport square_bound_check(const FrequencySet& fs, unsigned degree_bound) {
    const ResonatorExpansion exp = expand(fs, degree_bound);
    SquareBoundReport report;
    report.pointwise = true;
    for (const ExpansionEntry& e : exp.entries) {
        if (e.coefficient * e.coefficient < e.squared_weight * (1 - 1e-12)) report.pointwise = false;
    }
    const double r2 = fs.r * fs.r;
    report.partial_sum = exp.squared_total();
    report.closed_form = std::pow(1 - r2, -static_cast<double>(fs.size()));
    report.gap = report.closed_form - report.partial_sum;
    report.tail_bound = multinomial_tail(fs.size(), r2, degree_bound);
    const double slack = 1e-12 * report.closed_form;
    report.pass = report.pointwise && report.gap >= -slack && report.gap <= report.tail_bound + slack;
    return report;
}

}  // namespace omega
