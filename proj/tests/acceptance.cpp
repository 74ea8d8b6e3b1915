// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "omega/arithmetic.hpp"
#include "omega/error_terms.hpp"
#include "omega/extremal.hpp"
#include "omega/hunter.hpp"
#include "omega/io.hpp"
#include "omega/kernel.hpp"
#include "omega/resonance.hpp"
#include "omega/resonator.hpp"
#include "oracles.hpp"

using namespace omega;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const ArithmeticTable& table(std::uint64_t limit) {
    static ArithmeticTable t;
    if (t.limit < limit) t = build_table(limit);
    return t;
}

Outcome criterion1() {
    Outcome o;
    const auto& t = table(1'000'000);
    std::uint64_t bad = 0;
    for (std::uint64_t x = 1; x <= 100'000; ++x) {
        if (divisor_summatory(x) != static_cast<Int128>(t.d_prefix[x])) ++bad;
        if (circle_summatory(x) != static_cast<Int128>(t.r_prefix[x])) ++bad;
    }
    o.require(bad == 0, std::to_string(bad) + " mismatches");
    o.note("x = 1..100000, both kinds");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const double d6 = static_cast<double>(delta_exact(6.0));
    const double p5 = static_cast<double>(p_exact(5.0));
    const double p3 = static_cast<double>(p_exact(3.0));
    o.require(std::fabs(d6 - 2.322855) <= 1e-6, "Delta(6) = " + fmt(d6, 10));
    o.require(std::fabs(p5 - 4.292037) <= 1e-6, "P(5) = " + fmt(p5, 10));
    o.require(std::fabs(p3 + 1.424778) <= 1e-6, "P(3) = " + fmt(p3, 10));
    o.note("Delta(6) = " + fmt(d6, 10) + ", P(5) = " + fmt(p5, 10) + ", P(3) = " + fmt(p3, 10));
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto& t = table(1'000'000);
    // y halfway between consecutive integers, x spread evenly over [100, 1000].
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) {
        const double x = 100 + 900.0 * i / 19;
        xs.push_back(std::sqrt(std::round(x * x) + 0.5));
    }
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const auto coarse = residual_scan(kind, xs, 10'000, t);
        const auto fine = residual_scan(kind, xs, 1'000'000, t);
        o.require(fine.max_abs_residual <= 0.5, std::string(name(kind)) + " max |residual| at N=1e6 is " +
                                                    fmt(fine.max_abs_residual) + " > 0.5");
        o.require(fine.max_abs_residual < coarse.max_abs_residual,
                  std::string(name(kind)) + " residual did not shrink from N=1e4 to N=1e6");
        o.note(std::string(name(kind)) + " max |residual| N=1e4: " + fmt(coarse.max_abs_residual) +
               ", N=1e6: " + fmt(fine.max_abs_residual));
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst = 0;
    for (double alpha : {0.25, 0.45139, 0.75}) {
        for (double xi : {0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0}) {
            worst = std::max(worst, std::abs(oracle::gamma_fourier_quadrature(alpha, xi) - gamma_fourier(alpha, xi)));
        }
    }
    o.require(worst <= 1e-6, "max deviation " + fmt(worst));
    double worst_mass = 0;
    for (double alpha : {0.25, 0.45139, 0.75}) {
        // xi = 0 of the quadrature oracle is the total mass.
        worst_mass = std::max(worst_mass, std::fabs(oracle::gamma_fourier_quadrature(alpha, 0).real() - 1));
    }
    o.require(worst_mass <= 1e-8, "mass deviation " + fmt(worst_mass));
    o.note("21 pairs, max |quadrature - closed form| = " + fmt(worst) + ", max |mass - 1| = " + fmt(worst_mass));
    return o;
}

Outcome criterion5() {
    Outcome o;
    const double alpha = choose_alpha(-pi / 4, 0.1);
    o.require(alpha > 0.45 && alpha < 0.4514, "alpha = " + fmt(alpha, 10) + " outside (0.45, 0.4514)");
    std::vector<double> grid(10'000);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -1000 + 2000.0 * i / (grid.size() - 1);
    const auto report = sector_check(SectorialKernel::from_angle(-pi / 4, 0.1), grid);
    o.require(report.pass && report.min_margin >= -1e-12, "sector check min margin " + fmt(report.min_margin));
    o.note("alpha = " + fmt(alpha, 10) + ", sector min margin = " + fmt(report.min_margin));
    return o;
}

Outcome criterion6() {
    Outcome o;
    {
        const auto e = expand(FrequencySet::real({0.7}, 0.5), 3);
        bool ok = e.entries.size() == 4;
        for (int k = 0; ok && k < 4; ++k) ok = std::fabs(e.entries[k].coefficient - std::pow(0.5, k)) <= 1e-12;
        o.require(ok, "single-frequency expansion");
    }
    {
        const double s = std::sqrt(2.0);
        const auto e = expand(FrequencySet::real({1, s}, 0.5), 2);
        bool ok = e.entries.size() == 6;
        const std::pair<double, double> expected[] = {{0, 1}, {1, 0.5}, {s, 0.5}, {2, 0.25}, {1 + s, 0.25}, {2 * s, 0.25}};
        for (const auto& [v, a] : expected) {
            const auto* entry = e.find(v);
            ok = ok && entry != nullptr && std::fabs(entry->coefficient - a) <= 1e-12;
        }
        o.require(ok, "{1, sqrt 2} expansion");
    }
    {
        const auto e = expand(FrequencySet::rational({1, 2}, 1, 0.5), 2);
        const auto* a2 = e.find_key(2);
        o.require(a2 != nullptr && std::fabs(a2->coefficient - 0.75) <= 1e-12 && a2->representations == 2,
                  "collision {1, 2} expansion");
    }
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> size(1, 4);
    std::uniform_int_distribution<unsigned> degree(2, 5);
    std::uniform_real_distribution<double> ur(0.05, 0.9), ul(0.1, 5);
    std::uniform_int_distribution<std::int64_t> un(1, 8);
    int shift_fail = 0, square_fail = 0;
    for (int i = 0; i < 100; ++i) {
        const int m = size(rng);
        const double r = ur(rng);
        FrequencySet fs;
        if (i % 2 == 0) {
            std::vector<std::int64_t> p(m);
            for (auto& v : p) v = un(rng);
            fs = FrequencySet::rational(p, 3, r);
        } else {
            std::vector<double> l(m);
            for (auto& v : l) v = ul(rng);
            fs = FrequencySet::real(l, r);
        }
        const unsigned b = degree(rng);
        if (!shift_inequality_check(expand(fs, b), fs)) ++shift_fail;
        const auto sq = square_bound_check(fs, b);
        if (!(sq.pass && sq.partial_sum <= sq.closed_form)) ++square_fail;
    }
    o.require(shift_fail == 0, std::to_string(shift_fail) + " shift failures");
    o.require(square_fail == 0, std::to_string(square_fail) + " square-bound failures");
    o.note("3 hand expansions, 100 random sets (M <= 4, B <= 5)");
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto& t = table(1'000'000);
    int failed = 0, disagree = 0, rational = 0;
    double worst_margin = INFINITY;
    auto certify = [&](const ResonanceInstance& inst) {
        const auto rep = verify_proposition(inst);
        if (!rep.certified) ++failed;
        worst_margin = std::min(worst_margin, rep.margin / std::max(rep.I1, 1e-300));
        if (inst.target.exact()) {
            ++rational;
            const unsigned b = spectral_degree(inst, 1e-9);
            const auto s1 = spectral_I1(inst, b);
            const auto s2 = spectral_I2(inst, b);
            const double slack = 1e-9 * rep.I1;
            if (std::fabs(s1.value - rep.I1) > rep.I1_error + s1.truncation_error + slack ||
                std::fabs(s2.value - rep.I2) > rep.I2_error + s2.truncation_error + slack) {
                ++disagree;
            }
        }
    };
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        ResonanceInstance inst;
        inst.target = TargetSum::from_sequence(kind, 50, t);
        std::vector<std::size_t> idx(inst.target.support.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
            return inst.target.support[a].f > inst.target.support[b].f;
        });
        inst.resonant.assign(idx.begin(), idx.begin() + 5);
        inst.kernel = SectorialKernel::from_angle(kind == SequenceKind::divisor ? -pi / 4 : pi / 4, 0.1);
        inst.r = 1.0 / 3;
        inst.T = 10;
        certify(inst);
    }
    std::mt19937_64 rng(2025);
    for (int i = 0; i < 100; ++i) certify(random_instance(rng, i % 2 == 0));
    o.require(failed == 0, std::to_string(failed) + " of 102 instances not certified");
    o.require(disagree == 0, std::to_string(disagree) + " spectral/quadrature disagreements");
    o.note("102 instances, " + std::to_string(rational) + " rational; min margin/I1 = " + fmt(worst_margin));
    return o;
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(88);
    int failed = 0;
    double worst = INFINITY;
    for (int i = 0; i < 10; ++i) {
        const auto inst = random_instance(rng, false);
        const auto c = theorem_lower_bound(inst, 10, 1e6);
        if (!c.pass) ++failed;
        worst = std::min(worst, c.grid_max - (c.bound - c.error_term));
    }
    o.require(failed == 0, std::to_string(failed) + " of 10 targets below bound - error");
    o.note("Y = 10, X = 1e6; min (grid max - (bound - error)) = " + fmt(worst));
    return o;
}

Outcome criterion9() {
    Outcome o;
    constexpr std::uint64_t limit = 10'000'000;
    const auto& t = table(limit);
    std::vector<std::uint64_t> ms;
    for (int k = 4; k <= 16; ++k) ms.push_back(std::uint64_t{1} << k);
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const std::string label(name(kind));
        const auto tab = extremal_table(kind, ms, t);
        const auto h = kind == SequenceKind::divisor ? oracle::divisor_marking(limit) : oracle::pair_enumeration(limit);
        const auto sorted = oracle::sort_all(h, limit);
        int mismatches = 0;
        std::vector<double> ratios;
        for (const auto& e : tab.entries) {
            double sum = 0;
            for (std::uint64_t j = 0; j < e.M; ++j) sum += sorted[j].h * std::pow(static_cast<double>(sorted[j].n), -0.75);
            if (e.n_M != sorted[e.M - 1].n || std::fabs(e.sum - sum) > 1e-12 * sum) ++mismatches;
            ratios.push_back(e.sum / predicted_order(kind, static_cast<double>(e.M)));
        }
        o.require(mismatches == 0, label + ": " + std::to_string(mismatches) + " oracle mismatches");
        const double lo = *std::min_element(ratios.begin(), ratios.end());
        const double hi = *std::max_element(ratios.begin(), ratios.end());
        o.require(lo >= 0.5 && hi <= 5, label + " ratio range [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "] outside [0.5, 5]");
        double spread = 1;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            for (std::size_t j = i; j < ms.size() && ms[j] <= 10 * ms[i]; ++j) {
                spread = std::max(spread, std::max(ratios[i], ratios[j]) / std::min(ratios[i], ratios[j]));
            }
        }
        o.require(spread <= 1.6, label + " per-decade max/min " + fmt(spread, 4));
        const auto fit = exponent_fit(kind, log_grid(100, 1e5, 16));
        const double target = counting_exponent(kind);
        o.require(std::fabs(fit.slope - target) <= 0.3,
                  label + " fit slope " + fmt(fit.slope, 4) + " not within 0.3 of " + fmt(target, 6));
        o.note(label + ": ratios [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "], decade spread " + fmt(spread, 4) +
               ", slope " + fmt(fit.slope, 4) + " (target " + fmt(target, 6) + "), scan_limit " +
               std::to_string(tab.scan_limit));
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    Outcome o;
    const auto& t = table(1'000'000);
    const auto dir = fs::temp_directory_path() / "omega_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const std::string label(name(kind));
        HuntConfig c;
        c.kind = kind;
        c.x_min = 100;
        c.x_max = 1000;
        c.budget = 100'000;
        c.terms = 10'000;
        c.seed = 1;
        std::string bytes[2];
        double best = 0;
        for (int run = 0; run < 2; ++run) {
            const auto path = dir / (label + std::to_string(run) + ".jsonl");
            RecordStore store(path);
            const auto result = hunt(c, t);
            o.require(!result.records.empty(), label + ": no sign-correct record (" + result.diagnostic + ")");
            for (const auto& r : result.records) store.append(r);
            const auto contents = store.read();
            o.require(contents.warnings.empty(), label + ": store warnings");
            for (const auto& r : contents.records) {
                o.require(!check_record(r).has_value(), label + ": record fails revalidation");
                o.require(kind == SequenceKind::divisor ? r.exact_value > 0 : r.exact_value < 0, label + ": wrong sign");
            }
            if (!result.records.empty()) best = result.records.front().exact_value;
            bytes[run] = slurp(path);
        }
        o.require(!bytes[0].empty() && bytes[0] == bytes[1], label + ": store not byte-identical across runs");
        o.note(label + " best exact value " + fmt(best) + " (N = 1e4)");
    }
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"1 exact-oracle equivalence", criterion1},  {"2 unit values", criterion2},
        {"3 series residuals", criterion3},          {"4 kernel closed form", criterion4},
        {"5 alpha and sector check", criterion5},    {"6 resonator combinatorics", criterion6},
        {"7 resonance certification", criterion7},   {"8 theorem desk check", criterion8},
        {"9 extremal orders", criterion9},           {"10 hunter discipline", criterion10},
    };
    int failures = 0;
    for (const auto& [label, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s criterion %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", label, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
