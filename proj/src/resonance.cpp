#include "omega/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "omega/errors.hpp"
#include "omega/trig_sum.hpp"

namespace omega {

namespace {

// Two integrands at once (I1 and I2 share every resonator evaluation).
using Pair = std::array<double, 2>;

struct PanelResult {
    Pair value{};
    Pair error{};
    Pair l1{};
};

// Gauss-Kronrod 7/15 nodes from Boost; Gauss nodes sit at even Kronrod indices.
struct Gk15 {
    std::array<double, 8> x{};
    std::array<double, 8> wk{};
    std::array<double, 8> wg{};  // zero at non-Gauss nodes

    Gk15() {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& ka = gauss_kronrod<double, 15>::abscissa();
        const auto& kw = gauss_kronrod<double, 15>::weights();
        const auto& ga = gauss<double, 7>::abscissa();
        const auto& gw = gauss<double, 7>::weights();
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = ka[i];
            wk[i] = kw[i];
            for (std::size_t j = 0; j < ga.size(); ++j) {
                if (std::fabs(ga[j] - ka[i]) < 1e-14) wg[i] = gw[j];
            }
        }
    }
};

const Gk15& gk15() {
    static const Gk15 rule;
    return rule;
}

template <class F>
PanelResult gk_panel(F&& f, double a, double b) {
    const Gk15& rule = gk15();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Pair k{}, g{}, l1{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double dx = h * rule.x[i];
        const Pair f1 = f(c + dx);
        const Pair f2 = i == 0 ? Pair{0, 0} : f(c - dx);
        for (std::size_t m = 0; m < 2; ++m) {
            const double s = f1[m] + f2[m];
            k[m] += rule.wk[i] * s;
            g[m] += rule.wg[i] * s;
            l1[m] += rule.wk[i] * (std::fabs(f1[m]) + std::fabs(f2[m]));
        }
    }
    PanelResult out;
    for (std::size_t m = 0; m < 2; ++m) {
        out.value[m] = h * k[m];
        out.error[m] = std::fabs(h * (k[m] - g[m]));
        out.l1[m] = std::fabs(h) * l1[m];
    }
    return out;
}

template <class F>
PanelResult gk_adaptive(F&& f, double a, double b, unsigned depth, double tol) {
    PanelResult whole = gk_panel(f, a, b);
    const bool converged = whole.error[0] <= tol * whole.l1[0] + 1e-300 && whole.error[1] <= tol * whole.l1[1] + 1e-300;
    if (converged || depth == 0) return whole;
    const double mid = 0.5 * (a + b);
    const PanelResult left = gk_adaptive(f, a, mid, depth - 1, tol);
    const PanelResult right = gk_adaptive(f, mid, b, depth - 1, tol);
    PanelResult out;
    for (std::size_t m = 0; m < 2; ++m) {
        out.value[m] = left.value[m] + right.value[m];
        out.error[m] = left.error[m] + right.error[m];
        out.l1[m] = left.l1[m] + right.l1[m];
    }
    return out;
}

struct QuadratureResult {
    Estimate i1;
    Estimate i2;
};

// Fastest oscillation (cycles per unit x) in Re(e^(i beta) F) |R|^2.
double fastest_frequency(const ResonanceInstance& inst) {
    double target_max = 0;
    for (const TargetTerm& t : inst.target.support) target_max = std::max(target_max, t.lambda);
    double resonant_sum = 0;
    for (const std::size_t i : inst.resonant) resonant_sum += inst.target.support[i].lambda;
    return target_max + 2 * resonant_sum * std::max(1.0, inst.r / (1 - inst.r));
}

QuadratureResult integrate_both(const ResonanceInstance& inst) {
    inst.validate();
    const QuadratureConfig& q = inst.quadrature;
    const double alpha = inst.kernel.alpha;
    const double T = inst.T;
    const FrequencySet fs = inst.resonator();
    const double m = static_cast<double>(fs.size());

    std::vector<double> weights, freqs;
    for (const TargetTerm& t : inst.target.support) {
        weights.push_back(t.f);
        freqs.push_back(t.lambda);
    }
    const double beta = inst.kernel.beta;
    auto resonance = [&](double x) -> Pair {
        const double r2 = std::norm(eval_product(fs, x));
        return {r2, r2 * twisted_sum(weights, freqs, beta, x)};
    };

    // Cutoff c with (1-r)^(-2M) Q(alpha, c) below tail_epsilon.
    const double peak = std::pow(1 - inst.r, -2 * m);
    const double f0 = inst.target.total();
    const double target_q = std::max(q.tail_epsilon / peak, 1e-300);
    double cutoff = target_q >= 1 ? 1.0 : boost::math::gamma_q_inv(alpha, target_q);
    cutoff = std::clamp(cutoff, 1.0, 800.0);
    const double tail_mass = T * boost::math::gamma_q(alpha, cutoff) * peak;

    const double fmax = fastest_frequency(inst);
    const double per_panel = 15.0 / q.nodes_per_oscillation;  // oscillations per panel

    // Head: x = T u^(1/alpha), u in (0, 1]; dx/du <= T / alpha.
    const double head_rate = fmax * T / alpha;
    const auto head_panels = static_cast<std::size_t>(std::ceil(head_rate / per_panel)) + 1;
    const double tail_len = (cutoff - 1) * T;
    const auto tail_panels = static_cast<std::size_t>(std::ceil(tail_len * fmax / per_panel)) + 1;
    if (head_panels + tail_panels > q.max_panels) {
        throw AccuracyError("oscillation needs " + std::to_string(head_panels + tail_panels) +
                            " panels, budget is " + std::to_string(q.max_panels));
    }

    const double head_scale = T / (alpha * std::tgamma(alpha));
    auto head = [&](double u) -> Pair {
        const double s = std::pow(u, 1 / alpha);
        const Pair v = resonance(T * s);
        const double w = head_scale * std::exp(-s);
        return {w * v[0], w * v[1]};
    };
    auto tail = [&](double x) -> Pair {
        const double k = gamma_density(alpha, x / T);
        const Pair v = resonance(x);
        return {k * v[0], k * v[1]};
    };

    Pair value{}, error{}, l1{};
    auto add = [&](const PanelResult& p) {
        for (std::size_t i = 0; i < 2; ++i) {
            value[i] += p.value[i];
            error[i] += p.error[i];
            l1[i] += p.l1[i];
        }
    };
    for (std::size_t i = 0; i < head_panels; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(head_panels);
        const double b = static_cast<double>(i + 1) / static_cast<double>(head_panels);
        add(gk_adaptive(head, a, b, q.max_depth, q.panel_tolerance));
    }
    for (std::size_t i = 0; i < tail_panels; ++i) {
        const double a = T + tail_len * static_cast<double>(i) / static_cast<double>(tail_panels);
        const double b = T + tail_len * static_cast<double>(i + 1) / static_cast<double>(tail_panels);
        add(gk_adaptive(tail, a, b, q.max_depth, q.panel_tolerance));
    }

    QuadratureResult out;
    out.i1 = {value[0], error[0] + tail_mass};
    out.i2 = {value[1], error[1] + tail_mass * f0};
    for (std::size_t i = 0; i < 2; ++i) {
        if (error[i] > q.max_relative_error * l1[i] && error[i] > 1e-300) {
            throw AccuracyError("quadrature error estimate " + std::to_string(error[i]) + " exceeds " +
                                std::to_string(q.max_relative_error) + " of the L1 norm " + std::to_string(l1[i]));
        }
    }
    return out;
}

// Truncation slack of a pair sum over a truncated expansion with total S
// and omitted mass D, given |kernel factor| <= 1: (S+D)^2 - S^2.
double pair_truncation(double total, double dropped) { return 2 * total * dropped + dropped * dropped; }

}  // namespace

TargetSum TargetSum::from_sequence(SequenceKind kind, std::uint64_t terms, const ArithmeticTable& table) {
    if (terms == 0 || terms > table.limit) throw RangeError("target terms exceed the sieve");
    TargetSum t;
    t.tag = std::string(name(kind));
    for (std::uint64_t n = 1; n <= terms; ++n) {
        const double h = table.value(kind, n);
        if (h == 0) continue;
        const double root = std::sqrt(static_cast<double>(n));
        t.support.push_back({n, h * std::pow(static_cast<double>(n), -0.75),
                             kind == SequenceKind::divisor ? 2 * root : root, 0});
    }
    return t;
}

double TargetSum::total() const {
    double s = 0;
    for (const TargetTerm& t : support) s += t.f;
    return s;
}

std::complex<double> TargetSum::evaluate(double x) const {
    std::complex<double> s = 0;
    for (const TargetTerm& t : support) {
        const long double turns = static_cast<long double>(t.lambda) * x;
        s += t.f * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(turns - std::floor(turns)));
    }
    return s;
}

void TargetSum::validate() const {
    if (support.empty()) throw DomainError("target support is empty");
    for (const TargetTerm& t : support) {
        if (!(t.f >= 0) || !std::isfinite(t.f)) throw DomainError("target coefficients must be non-negative");
        if (!(t.lambda > 0)) throw DomainError("target frequencies must be positive");
        if (exact() && t.numerator <= 0) throw DomainError("rational target needs positive numerators");
    }
}

FrequencySet ResonanceInstance::resonator() const {
    if (target.exact()) {
        std::vector<std::int64_t> nums;
        for (const std::size_t i : resonant) nums.push_back(target.support[i].numerator);
        return FrequencySet::rational(std::move(nums), target.denominator, r);
    }
    std::vector<double> lambdas;
    for (const std::size_t i : resonant) lambdas.push_back(target.support[i].lambda);
    return FrequencySet::real(std::move(lambdas), r);
}

double ResonanceInstance::resonant_mass() const {
    double s = 0;
    for (const std::size_t i : resonant) s += target.support[i].f;
    return s;
}

void ResonanceInstance::validate() const {
    target.validate();
    if (resonant.empty()) throw DomainError("resonant set must be nonempty");
    std::set<std::size_t> seen;
    for (const std::size_t i : resonant) {
        if (i >= target.support.size()) throw DomainError("resonant index outside the target support");
        if (!seen.insert(i).second) throw DomainError("resonant indices must be distinct");
    }
    if (!(r > 0 && r < 1)) throw DomainError("r must lie in (0, 1)");
    if (!(T >= 1)) throw DomainError("T must be at least 1");
    if (!(kernel.alpha > 0 && kernel.alpha < 1)) throw DomainError("kernel alpha must lie in (0, 1)");
    if (!(std::fabs(kernel.beta) < std::numbers::pi / 2)) throw DomainError("beta must lie in (-pi/2, pi/2)");
    if (!(kernel.delta > 0)) throw DomainError("delta must be positive");
}

Estimate compute_I1(const ResonanceInstance& inst) { return integrate_both(inst).i1; }

Estimate compute_I2(const ResonanceInstance& inst) { return integrate_both(inst).i2; }

SpectralEstimate spectral_I1(const ResonanceInstance& inst, unsigned degree_bound) {
    inst.validate();
    const ResonatorExpansion exp = expand(inst.resonator(), degree_bound);
    const auto& e = exp.entries;
    const double alpha = inst.kernel.alpha;
    double sum = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        sum += e[i].coefficient * e[i].coefficient;
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            sum += 2 * e[i].coefficient * e[j].coefficient * gamma_fourier(alpha, (e[j].v - e[i].v) * inst.T).real();
        }
    }
    SpectralEstimate out;
    out.value = inst.T * sum;
    out.truncation_error = inst.T * pair_truncation(exp.total(), exp.dropped_mass);
    out.degree_bound = degree_bound;
    return out;
}

SpectralEstimate spectral_I2(const ResonanceInstance& inst, unsigned degree_bound) {
    inst.validate();
    const ResonatorExpansion exp = expand(inst.resonator(), degree_bound);
    const auto& e = exp.entries;
    const double alpha = inst.kernel.alpha;
    const std::complex<double> twist = std::polar(1.0, inst.kernel.beta);
    double sum = 0;
    if (exp.exact_keys) {
        // Correlate coefficients by key difference, then one kernel value per difference.
        std::map<std::int64_t, double> correlation;
        for (const ExpansionEntry& u : e) {
            for (const ExpansionEntry& v : e) correlation[v.key - u.key] += u.coefficient * v.coefficient;
        }
        const double den = static_cast<double>(exp.denominator);
        for (const TargetTerm& t : inst.target.support) {
            double inner = 0;
            for (const auto& [diff, c] : correlation) {
                const double xi = static_cast<double>(diff - t.numerator) / den * inst.T;
                inner += c * (twist * gamma_fourier(alpha, xi)).real();
            }
            sum += t.f * inner;
        }
    } else {
        for (const TargetTerm& t : inst.target.support) {
            double inner = 0;
            for (const ExpansionEntry& u : e) {
                for (const ExpansionEntry& v : e) {
                    inner += u.coefficient * v.coefficient *
                             (twist * gamma_fourier(alpha, (v.v - u.v - t.lambda) * inst.T)).real();
                }
            }
            sum += t.f * inner;
        }
    }
    SpectralEstimate out;
    out.value = inst.T * sum;
    out.truncation_error = inst.T * inst.target.total() * pair_truncation(exp.total(), exp.dropped_mass);
    out.degree_bound = degree_bound;
    return out;
}

unsigned spectral_degree(const ResonanceInstance& inst, double tolerance, std::size_t budget) {
    const double m = static_cast<double>(inst.resonant.size());
    const double full = std::pow(1 - inst.r, -m);
    const double scale = inst.T * std::max(1.0, inst.target.total());
    unsigned b = 1;
    for (;; ++b) {
        const double dropped = multinomial_tail(inst.resonant.size(), inst.r, b);
        if (scale * pair_truncation(full, dropped) <= tolerance) return b;
        const double next_count = std::exp(std::lgamma(m + b + 2) - std::lgamma(b + 2.0) - std::lgamma(m + 1));
        if (next_count > static_cast<double>(budget)) return b;
    }
}

std::vector<double> default_sector_grid() {
    constexpr std::size_t points = 10'000;
    std::vector<double> grid;
    grid.reserve(points + 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(-1000.0 + 2000.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    grid.push_back(0.0);
    return grid;
}

ResonanceReport verify_proposition(const ResonanceInstance& inst) {
    inst.validate();
    const std::vector<double> grid = default_sector_grid();
    const SectorReport sector = sector_check(inst.kernel, grid);
    if (!sector.pass) {
        throw HypothesisError("kernel fails the sector condition (min margin " + std::to_string(sector.min_margin) +
                              " at xi = " + std::to_string(sector.worst_xi) + ")");
    }
    const QuadratureResult q = integrate_both(inst);
    ResonanceReport rep;
    rep.I1 = q.i1.value;
    rep.I2 = q.i2.value;
    rep.I1_error = q.i1.error;
    rep.I2_error = q.i2.error;
    const double factor = inst.kernel.delta * inst.r * inst.resonant_mass();
    rep.rhs = factor * rep.I1;
    rep.margin = rep.I2 - rep.rhs;
    rep.quadrature_error_estimate = rep.I2_error + factor * rep.I1_error;
    rep.J1_bound = inst.T * std::pow(1 - inst.r * inst.r, -static_cast<double>(inst.resonant.size()));
    rep.sector_margin = sector.min_margin;
    rep.certified = rep.margin >= -rep.quadrature_error_estimate;
    return rep;
}

TheoremCheck theorem_lower_bound(const ResonanceInstance& inst, double Y, double X) {
    inst.validate();
    if (!(Y > 3) || !(Y < X)) throw DomainError("theorem check needs 3 < Y < X");
    const double m = static_cast<double>(inst.resonant.size());
    const double r = inst.r;
    const double alpha = inst.kernel.alpha;
    const double f0 = inst.target.total();

    TheoremCheck out;
    out.T = X / (2 * std::log(X));
    out.bound = inst.kernel.delta * r * inst.resonant_mass();
    out.error_term = f0 * std::pow((1 + r) / (1 - r), m) * std::pow(Y * std::log(X) / X, alpha);
    // Left and right tails, each entering twice, against J1 >= T (1-r^2)^(-M).
    const double tails = f0 * std::pow(1 - r, -2 * m) * out.T *
                         (boost::math::gamma_p(alpha, Y / out.T) + boost::math::gamma_q(alpha, X / out.T));
    out.measured_error = 2 * tails / (out.T * std::pow(1 - r * r, -m));

    std::vector<double> weights, freqs;
    double lambda_max = 0;
    for (const TargetTerm& t : inst.target.support) {
        weights.push_back(t.f);
        freqs.push_back(t.lambda);
        lambda_max = std::max(lambda_max, t.lambda);
    }
    const double beta = inst.kernel.beta;
    double h = 1.0 / (16.0 * lambda_max);
    auto points = static_cast<std::size_t>(std::ceil((X - Y) / h)) + 1;
    if (points > kTheoremGridCap) {
        points = kTheoremGridCap;
        h = (X - Y) / static_cast<double>(points - 1);
    }
    out.grid_points = points;

    // Keep the best few grid points for local refinement.
    constexpr std::size_t keep = 8;
    std::vector<std::pair<double, double>> best;  // (value, x)
    std::vector<double> chunk(1 << 16);
    for (std::size_t start = 0; start < points; start += chunk.size()) {
        const std::size_t len = std::min(chunk.size(), points - start);
        const double x0 = Y + static_cast<double>(start) * h;
        twisted_sum_grid(weights, freqs, beta, x0, h, std::span(chunk.data(), len));
        for (std::size_t j = 0; j < len; ++j) {
            const double x = std::min(X, x0 + static_cast<double>(j) * h);
            if (best.size() < keep || chunk[j] > best.back().first) {
                best.emplace_back(chunk[j], x);
                std::sort(best.begin(), best.end(), [](auto& a, auto& b) { return a.first > b.first; });
                if (best.size() > keep) best.pop_back();
            }
        }
    }
    out.grid_max = best.front().first;
    out.argmax = best.front().second;
    for (const auto& [value, x] : best) {
        auto objective = [&](double t) { return twisted_sum(weights, freqs, beta, t); };
        const auto [xr, vr] = golden_maximize(objective, std::max(Y, x - h), std::min(X, x + h), 40);
        if (vr > out.grid_max) {
            out.grid_max = vr;
            out.argmax = xr;
        }
    }
    out.pass = out.grid_max >= out.bound - out.error_term;
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ResonanceInstance random_instance(std::mt19937_64& rng, bool rational) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
    };
    ResonanceInstance inst;
    const std::size_t support = pick(1, 6);
    if (rational) inst.target.denominator = static_cast<std::int64_t>(pick(1, 4));
    inst.target.tag = "random";
    for (std::size_t n = 1; n <= support; ++n) {
        TargetTerm t;
        t.n = n;
        t.f = 0.05 + 1.95 * uniform01(rng);
        if (rational) {
            t.numerator = static_cast<std::int64_t>(pick(1, 6 * static_cast<std::size_t>(inst.target.denominator)));
            t.lambda = static_cast<double>(t.numerator) / static_cast<double>(inst.target.denominator);
        } else {
            t.lambda = 0.2 + 5.8 * uniform01(rng);
        }
        inst.target.support.push_back(t);
    }
    std::vector<std::size_t> order(support);
    for (std::size_t i = 0; i < support; ++i) order[i] = i;
    for (std::size_t i = support; i > 1; --i) std::swap(order[i - 1], order[pick(0, i - 1)]);
    order.resize(pick(1, std::min<std::size_t>(3, support)));
    std::sort(order.begin(), order.end());
    inst.resonant = order;

    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    const double beta = sign * (0.1 + 1.3 * uniform01(rng));
    const double delta = (0.05 + 0.85 * uniform01(rng)) * std::cos(beta);
    inst.kernel = SectorialKernel::from_angle(beta, delta);
    inst.r = 0.1 + 0.5 * uniform01(rng);
    inst.T = 1 + 5 * uniform01(rng);
    return inst;
}

}  // namespace omega
