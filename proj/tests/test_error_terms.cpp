#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "omega/error_terms.hpp"
#include "omega/errors.hpp"
#include "oracles.hpp"

using namespace omega;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double gamma_e = 0.57721566490153286061;

const ArithmeticTable& table() {
    static const ArithmeticTable t = build_table(1'000'000);
    return t;
}

// x = sqrt(k + 1/2): y sits halfway between jumps.
std::vector<double> samples() {
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) {
        const double x = 100 + 900.0 * i / 19;
        xs.push_back(std::sqrt(std::round(x * x) + 0.5));
    }
    return xs;
}

}  // namespace

TEST_CASE("delta_exact and p_exact examples") {
    CHECK(static_cast<double>(delta_exact(1.0)) == doctest::Approx(1 - (2 * gamma_e - 1)).epsilon(1e-12));
    CHECK(static_cast<double>(delta_exact(6.0)) == doctest::Approx(2.322855).epsilon(1e-6));
    CHECK(static_cast<double>(p_exact(1.0)) == doctest::Approx(4 - pi).epsilon(1e-12));
    CHECK(static_cast<double>(p_exact(5.0)) == doctest::Approx(20 - 5 * pi).epsilon(1e-12));
    CHECK(static_cast<double>(p_exact(3.0)) == doctest::Approx(8 - 3 * pi).epsilon(1e-12));
    CHECK_THROWS_AS(delta_exact(0.5), DomainError);
    CHECK_THROWS_AS(p_exact(0.5), DomainError);
}

TEST_CASE("delta_exact against a marking oracle") {
    const auto d = oracle::divisor_marking(5000);
    std::uint64_t sum = 0;
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        sum += d[n];
        const double y = n + 0.5;
        const double expected = sum - y * (std::log(y) + 2 * gamma_e - 1);
        REQUIRE(static_cast<double>(delta_exact(y)) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("jumps equal d(n) and r(n)") {
    const auto& t = table();
    for (std::uint64_t n : {2u, 6u, 12u, 25u, 720u, 5040u}) {
        const double y = static_cast<double>(n);
        const double below = std::nextafter(y, 0.0);
        CHECK(static_cast<double>(delta_exact(y) - delta_exact(below)) == doctest::Approx(t.d(n)).epsilon(1e-9));
        CHECK(static_cast<double>(p_exact(y) - p_exact(below)) == doctest::Approx(t.r(n)).epsilon(1e-9));
    }
}

TEST_CASE("between integers delta_exact decreases with slope -(log y + 2 gamma)") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> pick(1, 1'000'000);
    for (int i = 0; i < 100; ++i) {
        const auto n = pick(rng);
        for (double frac : {0.25, 0.5, 0.75}) {
            const long double y = n + frac;
            const long double h = 1e-4L;
            RealArg lo{n, y - h}, hi{n, y + h}, mid{n, y};
            const long double slope = (delta_exact(hi) - delta_exact(lo)) / (2 * h);
            CHECK(static_cast<double>(slope) ==
                  doctest::Approx(-(std::log(static_cast<double>(y)) + 2 * gamma_e)).epsilon(1e-6));
            CHECK(delta_exact(hi) < delta_exact(mid));
            const long double p_slope = (p_exact(hi) - p_exact(lo)) / (2 * h);
            CHECK(static_cast<double>(p_slope) == doctest::Approx(-pi).epsilon(1e-8));
        }
    }
}

TEST_CASE("single-term series") {
    const auto& t = table();
    for (double x : {1.5, 7.25, 30.5, 123.456}) {
        const double d1 = std::sqrt(x) / (pi * std::sqrt(2.0)) * std::cos(4 * pi * x - pi / 4);
        const double p1 = -std::sqrt(x) * 4 / pi * std::cos(2 * pi * x + pi / 4);
        CHECK(voronoi_delta(x, 1, t) == doctest::Approx(d1).epsilon(1e-12));
        CHECK(voronoi_p(x, 1, t) == doctest::Approx(p1).epsilon(1e-12));
    }
}

TEST_CASE("series agrees with a direct double-precision sum") {
    const auto d = oracle::divisor_marking(20'000);
    const auto r = oracle::pair_enumeration(20'000);
    const auto& t = table();
    for (double x : {10.3, 77.77, 400.1}) {
        double sd = 0, sp = 0;
        for (std::uint64_t n = 1; n <= 20'000; ++n) {
            const double w = std::pow(static_cast<double>(n), -0.75);
            sd += d[n] * w * std::cos(4 * pi * std::sqrt(static_cast<double>(n)) * x - pi / 4);
            sp += r[n] * w * std::cos(2 * pi * std::sqrt(static_cast<double>(n)) * x + pi / 4);
        }
        sd *= std::sqrt(x) / (pi * std::sqrt(2.0));
        sp *= -std::sqrt(x) / pi;
        CHECK(voronoi_delta(x, 20'000, t) == doctest::Approx(sd).epsilon(1e-7).scale(1));
        CHECK(voronoi_p(x, 20'000, t) == doctest::Approx(sp).epsilon(1e-7).scale(1));
    }
}

TEST_CASE("envelope bounds the series") {
    const auto& t = table();
    const VoronoiSeries div(SequenceKind::divisor, 5000, t);
    const VoronoiSeries circ(SequenceKind::circle, 5000, t);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.5, 1000);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(std::fabs(div.value(x)) <= div.envelope(x));
        CHECK(std::fabs(circ.value(x)) <= circ.envelope(x));
    }
}

TEST_CASE("doubling N keeps the summed prefix") {
    const auto& t = table();
    const VoronoiSeries small(SequenceKind::divisor, 1000, t);
    const VoronoiSeries large(SequenceKind::divisor, 2000, t);
    for (std::size_t i = 0; i < small.terms(); ++i) {
        REQUIRE(small.weights()[i] == large.weights()[i]);
        REQUIRE(small.frequencies()[i] == large.frequencies()[i]);
    }
}

TEST_CASE("voronoi at x = 30.5 with N = 1e6 tracks the exact values") {
    const auto& t = table();
    const double y = 30.5 * 30.5;
    CHECK(std::fabs(voronoi_delta(30.5, 1'000'000, t) - static_cast<double>(delta_exact(y))) <= 0.5);
    // The series counts the origin; p_exact does not.
    CHECK(std::fabs(voronoi_p(30.5, 1'000'000, t) - 1 - static_cast<double>(p_exact(y))) <= 0.5);
}

TEST_CASE("voronoi rejects bad arguments") {
    const auto& t = table();
    CHECK_THROWS_AS(voronoi_delta(1.0, 10, t), DomainError);
    CHECK_THROWS_AS(voronoi_p(5.0, t.limit + 1, t), RangeError);
}

TEST_CASE("residual scan") {
    const auto& t = table();
    CHECK(residual_scan(SequenceKind::divisor, {}, 100, t).samples.empty());
    const std::vector<double> jump{10.0};
    CHECK_THROWS_AS(residual_scan(SequenceKind::divisor, jump, 10'000, t), DomainError);

    const auto xs = samples();
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        double previous = 1e300;
        for (std::uint64_t n : {10'000u, 100'000u, 1'000'000u}) {
            const auto scan = residual_scan(kind, xs, n, t);
            REQUIRE(scan.samples.size() == xs.size());
            for (const auto& s : scan.samples) {
                CHECK(s.residual == s.exact_value - s.series_value);
                CHECK(s.terms_used == n);
            }
            CHECK(scan.max_abs_residual < previous);
            previous = scan.max_abs_residual;
        }
    }
}

TEST_CASE("residual scan is identical across thread counts") {
    const auto& t = table();
    const auto xs = samples();
    const auto one = residual_scan(SequenceKind::circle, xs, 50'000, t, 1);
    const auto four = residual_scan(SequenceKind::circle, xs, 50'000, t, 4);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(one.samples[i].residual == doctest::Approx(four.samples[i].residual).epsilon(1e-10));
    }
}
