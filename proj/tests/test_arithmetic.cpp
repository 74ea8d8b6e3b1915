#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "omega/arithmetic.hpp"
#include "omega/errors.hpp"
#include "oracles.hpp"

using namespace omega;

namespace {

const ArithmeticTable& table() {
    static const ArithmeticTable t = build_table(100'000);
    return t;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// True when some p = 3 mod 4 divides n to an odd power (trial division).
bool has_odd_inert_power(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned m = 0;
        while (n % p == 0) {
            n /= p;
            ++m;
        }
        if (p % 4 == 3 && m % 2 == 1) return true;
    }
    return n > 1 && n % 4 == 3;
}

}  // namespace

TEST_CASE("build_table small values") {
    const auto t1 = build_table(1);
    CHECK(t1.d(1) == 1);
    CHECK(t1.r(1) == 4);
    const auto& t = table();
    CHECK(t.d(12) == 6);
    CHECK(t.d(6) == 4);
    CHECK(t.r(5) == 8);
    CHECK(t.r(3) == 0);
    CHECK(t.r(25) == 12);
    CHECK(t.d_prefix[6] == 14);
    CHECK(t.r_prefix[5] == 20);
}

TEST_CASE("build_table rejects zero and oversized limits") {
    CHECK_THROWS_AS(build_table(0), SizeError);
    CHECK_THROWS_AS(build_table(1'000'000, 1'000), SizeError);
}

TEST_CASE("d matches divisor marking up to 1e5") {
    const auto oracle = oracle::divisor_marking(100'000);
    const auto& t = table();
    for (std::uint64_t n = 1; n <= 100'000; ++n) REQUIRE(t.d(n) == oracle[n]);
}

TEST_CASE("r matches pair enumeration up to 1e4") {
    const auto oracle = oracle::pair_enumeration(10'000);
    const auto& t = table();
    for (std::uint64_t n = 1; n <= 10'000; ++n) REQUIRE(t.r(n) == oracle[n]);
}

TEST_CASE("table invariants") {
    const auto& t = table();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> pick(1, 316);
    for (int i = 0; i < 2000; ++i) {
        const auto a = pick(rng), b = pick(rng);
        if (gcd(a, b) != 1) continue;
        CHECK(t.d(a * b) == t.d(a) * t.d(b));
        CHECK(t.r(a * b) / 4 == (t.r(a) / 4) * (t.r(b) / 4));
    }
    for (std::uint64_t n = 1; n <= 20'000; ++n) {
        REQUIRE((t.r(n) == 0) == has_odd_inert_power(n));
        REQUIRE(t.d_prefix[n] >= t.d_prefix[n - 1]);
        REQUIRE(t.r_prefix[n] >= t.r_prefix[n - 1]);
    }
}

TEST_CASE("summatory examples") {
    CHECK(divisor_summatory(1) == 1);
    CHECK(divisor_summatory(6) == 14);
    CHECK(circle_summatory(1) == 4);
    CHECK(circle_summatory(5) == 20);
    CHECK(to_string(divisor_summatory(6)) == "14");
    CHECK_THROWS_AS(divisor_summatory(0), DomainError);
    CHECK_THROWS_AS(circle_summatory(0), DomainError);
}

TEST_CASE("summatory equals sieve prefix sums") {
    const auto& t = table();
    for (std::uint64_t x = 1; x <= 20'000; ++x) {
        REQUIRE(divisor_summatory(x) == static_cast<Int128>(t.d_prefix[x]));
        REQUIRE(circle_summatory(x) == static_cast<Int128>(t.r_prefix[x]));
    }
    for (std::uint64_t a = 1; a * a <= 100'000; ++a) {
        REQUIRE(divisor_summatory(a * a) == static_cast<Int128>(t.d_prefix[a * a]));
        REQUIRE(circle_summatory(a * a) == static_cast<Int128>(t.r_prefix[a * a]));
    }
}

TEST_CASE("summatory at large x matches tabulated values") {
    // d(n) summed over n <= 10^12 is a published value.
    CHECK(to_string(divisor_summatory(1'000'000'000'000ULL)) == "27785452449086");
    // Lattice points in the closed disc of radius 10^3 (origin included).
    CHECK(to_string(circle_summatory(1'000'000) + 1) == "3141549");
}

TEST_CASE("decimal parsing keeps the exact floor") {
    CHECK(parse_decimal("6").floor == 6);
    CHECK(parse_decimal("30.25").floor == 30);
    CHECK(parse_decimal("1e3").floor == 1000);
    CHECK(parse_decimal("0.9999999999999999999").floor == 0);
    CHECK_THROWS_AS(parse_decimal("-1"), DomainError);
    CHECK_THROWS_AS(parse_decimal("abc"), DomainError);
    CHECK(from_double(5.0).floor == 5);
}

TEST_CASE("count_weighted examples") {
    const auto& t = table();
    const auto div = MultiplicativeWeightSpec::divisor();
    const auto circ = MultiplicativeWeightSpec::circle();
    CHECK(count_weighted(div, 1.0, t) >= 2);
    const auto g = multiplicative_sieve(circ, 10);
    CHECK(g[1] * 1 == doctest::Approx(std::pow(4.0, -4.0 / 3)));
    CHECK(2 * g[2] == doctest::Approx(2 * std::pow(4.0, -4.0 / 3)));
    CHECK(count_weighted(circ, 0.2, t) == 1);
    CHECK(count_weighted(circ, 0.32, t) >= 2);
    CHECK(count_weighted(div, 0.5, t) == 0);
    CHECK_THROWS_AS(count_weighted(div, 1e9, t), RangeError);
}

TEST_CASE("count_weighted is nondecreasing and matches a brute-force filter") {
    const auto& t = table();
    for (const auto& spec : {MultiplicativeWeightSpec::divisor(), MultiplicativeWeightSpec::circle()}) {
        const bool circle = spec.kind == MultiplicativeWeightSpec::Kind::circle;
        std::uint64_t previous = 0;
        for (double x = 0.25; x <= 100; x *= 1.37) {
            std::uint64_t brute = 0;
            for (std::uint64_t n = 1; n <= t.limit; ++n) {
                const double h = circle ? t.r(n) : t.d(n);
                if (h > 0 && static_cast<double>(n) * std::pow(h, -4.0 / 3) <= x) ++brute;
            }
            const auto count = count_weighted(spec, x, t);
            CHECK(count == brute);
            CHECK(count >= previous);
            previous = count;
        }
    }
}

TEST_CASE("tail ratio bound dominates observed ratios") {
    const auto& t = table();
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const double bound = tail_ratio_bound(kind, 1000);
        for (std::uint64_t n = 1001; n <= t.limit; ++n) {
            REQUIRE(t.value(kind, n) * std::pow(static_cast<double>(n), -0.75) <= bound);
        }
    }
}
