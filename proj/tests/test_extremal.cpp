#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "omega/errors.hpp"
#include "omega/extremal.hpp"
#include "oracles.hpp"

using namespace omega;

namespace {

constexpr std::uint64_t kLimit = 2'000'000;

const ArithmeticTable& table() {
    static const ArithmeticTable t = build_table(kLimit);
    return t;
}

const std::vector<std::uint32_t>& values(SequenceKind kind) {
    static const auto d = oracle::divisor_marking(kLimit);
    static const auto r = oracle::pair_enumeration(kLimit);
    return kind == SequenceKind::divisor ? d : r;
}

}  // namespace

TEST_CASE("exponents") {
    CHECK(order_exponent(SequenceKind::divisor) == doctest::Approx(1.13988).epsilon(1e-5));
    CHECK(order_exponent(SequenceKind::circle) == doctest::Approx(0.19494).epsilon(1e-4));
    CHECK(counting_exponent(SequenceKind::divisor) == doctest::Approx(std::pow(2.0, 4.0 / 3) - 1).epsilon(1e-15));
    CHECK(counting_exponent(SequenceKind::circle) == doctest::Approx(std::pow(2.0, 1.0 / 3) - 1).epsilon(1e-15));
}

TEST_CASE("largest terms examples") {
    const auto& t = table();
    const auto div = largest_terms(SequenceKind::divisor, 4, t);
    REQUIRE(div.size() == 4);
    const std::uint64_t dn[] = {2, 4, 6, 1};
    const double dv[] = {1.18921, 1.06066, 1.04337, 1.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(div[i].n == dn[i]);
        CHECK(div[i].value == doctest::Approx(dv[i]).epsilon(1e-5));
    }
    const auto circ = largest_terms(SequenceKind::circle, 3, t);
    const std::uint64_t cn[] = {1, 5, 2};
    const double cv[] = {4, 8 * std::pow(5.0, -0.75), 4 * std::pow(2.0, -0.75)};
    for (int i = 0; i < 3; ++i) {
        CHECK(circ[i].n == cn[i]);
        CHECK(circ[i].value == doctest::Approx(cv[i]).epsilon(1e-14));
    }
    const auto top = largest_terms(SequenceKind::divisor, 1, t);
    CHECK(top[0].n == 2);
    CHECK(top[0].value == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("extremal sums examples") {
    const auto& t = table();
    CHECK(extremal_sum(SequenceKind::divisor, 2, t) == doctest::Approx(2.24987).epsilon(1e-5));
    CHECK(extremal_sum(SequenceKind::divisor, 4, t) == doctest::Approx(4.29324).epsilon(1e-5));
    CHECK(extremal_sum(SequenceKind::circle, 1, t) == 4);
    CHECK_THROWS_AS(extremal_sum(SequenceKind::divisor, 0, t), DomainError);
}

TEST_CASE("table agrees with the sort-all oracle") {
    const auto& t = table();
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const auto sorted = oracle::sort_all(values(kind), kLimit);
        std::vector<std::uint64_t> ms;
        for (int k = 0; k <= 10; ++k) ms.push_back(std::uint64_t{1} << k);
        const auto tab = extremal_table(kind, ms, t);
        CHECK(tab.scan_limit <= kLimit);
        double prev_sum = 0;
        for (const auto& e : tab.entries) {
            double sum = 0;
            for (std::uint64_t j = 0; j < e.M; ++j) sum += sorted[j].h * std::pow(static_cast<double>(sorted[j].n), -0.75);
            INFO(name(kind) << " M=" << e.M);
            CHECK(e.n_M == sorted[e.M - 1].n);
            CHECK(e.sum == doctest::Approx(sum).epsilon(1e-13));
            CHECK(e.sum > prev_sum);
            prev_sum = e.sum;
        }
        const auto terms = largest_terms(kind, 1024, t);
        for (std::size_t j = 0; j < terms.size(); ++j) {
            REQUIRE(terms[j].n == sorted[j].n);
            if (j > 0) REQUIRE(terms[j].value <= terms[j - 1].value);
        }
    }
}

TEST_CASE("ordering ties break exactly") {
    // 1^3 8^4 = 16^3 1^4: equal keys, smaller n first.
    CHECK(precedes(1, 1, 16, 8));
    CHECK_FALSE(precedes(16, 8, 1, 1));
    CHECK(precedes(1, 1, 81, 27));
    CHECK(precedes(81, 28, 1, 1));
    CHECK(precedes(2, 2, 3, 2));
    CHECK_FALSE(precedes(5, 2, 5, 2));
}

TEST_CASE("count below examples and duality") {
    const auto& t = table();
    CHECK(count_below(SequenceKind::divisor, 1.0, t) >= 4);
    CHECK(count_below(SequenceKind::divisor, std::nextafter(1.0, 0.0), t) == 3);
    // n = 1 has n^(3/4)/r(n) = 1/4.
    CHECK(count_below(SequenceKind::circle, 0.2, t) == 0);
    CHECK(count_below(SequenceKind::circle, 0.25, t) == 1);
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        for (std::uint64_t M : {1u, 2u, 5u, 17u, 100u, 640u}) {
            const auto terms = largest_terms(kind, M, t);
            const double y = terms.back().y;
            INFO(name(kind) << " M=" << M);
            CHECK(count_below(kind, y, t) >= M);
            CHECK(count_below(kind, y * (1 - 1e-9), t) < M);
        }
    }
}

TEST_CASE("factor counter agrees with the table") {
    const auto& t = table();
    for (auto kind : {SequenceKind::divisor, SequenceKind::circle}) {
        const FactorCounter counter(kind, 300);
        for (double y : {1.0, 2.5, 10.0, 37.0, 120.0, 160.0}) {
            INFO(name(kind) << " y=" << y);
            CHECK(counter.count(y) == count_below(kind, y, t));
        }
    }
}

TEST_CASE("count below refuses uncertified ranges") {
    const auto small = build_table(1000);
    CHECK_THROWS_AS(count_below(SequenceKind::divisor, 500, small), RangeError);
    CHECK_THROWS_AS(largest_terms(SequenceKind::divisor, 500, small), RangeError);
}

TEST_CASE("fit recovers a synthetic exponent") {
    const auto ys = log_grid(100, 1e5, 12);
    REQUIRE(ys.size() == 12);
    CHECK(ys.front() == doctest::Approx(100));
    CHECK(ys.back() == doctest::Approx(1e5));
    std::vector<double> counts;
    for (double y : ys) counts.push_back(0.37 * std::pow(y, 4.0 / 3) * std::pow(std::log(y), 1.51984));
    const auto fit = fit_log_power(ys, counts);
    CHECK(fit.slope == doctest::Approx(1.51984).epsilon(1e-3));
    CHECK(fit.r_squared == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("exponent fit preconditions") {
    const std::vector<double> few{10, 100, 1000};
    CHECK_THROWS_AS(exponent_fit(SequenceKind::divisor, few), DomainError);
    const std::vector<double> narrow = log_grid(10, 50, 8);
    CHECK_THROWS_AS(exponent_fit(SequenceKind::divisor, narrow), DomainError);
    std::vector<double> unsorted = log_grid(10, 1e4, 8);
    std::swap(unsorted[2], unsorted[3]);
    CHECK_THROWS_AS(exponent_fit(SequenceKind::divisor, unsorted), DomainError);
}

TEST_CASE("exponent fit on real counts") {
    const auto fit = exponent_fit(SequenceKind::circle, log_grid(100, 1e4, 8));
    CHECK(fit.counts.size() == 8);
    for (std::size_t i = 1; i < fit.counts.size(); ++i) CHECK(fit.counts[i] >= fit.counts[i - 1]);
    CHECK(fit.r_squared > 0.5);
}

TEST_CASE("predicted order") {
    CHECK(predicted_order(SequenceKind::divisor, 16) ==
          doctest::Approx(2 * std::pow(std::log(16.0), 0.75 * (std::pow(2.0, 4.0 / 3) - 1))).epsilon(1e-14));
    CHECK(predicted_order(SequenceKind::divisor, 16) == doctest::Approx(6.3954).epsilon(1e-4));
    CHECK(predicted_order(SequenceKind::circle, 16) ==
          doctest::Approx(2 * std::pow(std::log(16.0), 0.75 * (std::cbrt(2.0) - 1))).epsilon(1e-14));
    CHECK_THROWS_AS(predicted_order(SequenceKind::divisor, 2), DomainError);
}
