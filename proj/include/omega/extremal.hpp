// extremal.hpp
//
// Order statistics of h(n) n^(-3/4) with h = d (divisor) or h = r (circle):
// the largest-M sums S(M), L(M), the counting function
//   N(y) = #{n : n^(3/4) / h(n) <= y},
// and log-power fits of N(y) / y^(4/3) against log log y.
//
// Terms are ordered by the key n^(3/4)/h(n) ascending (equivalently value
// descending), ties broken exactly and then by smaller n. Completeness of a
// top-M scan is certified with tail_ratio_bound.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "omega/arithmetic.hpp"

namespace omega {

struct ExtremalTerm {
    std::uint64_t n = 0;
    double value = 0;  // h(n) n^(-3/4)
    double y = 0;      // n^(3/4) / h(n)
};

struct ExtremalEntry {
    std::uint64_t M = 0;
    double sum = 0;
    std::uint64_t n_M = 0;
    double y_M = 0;
};

struct ExtremalSumTable {
    SequenceKind kind = SequenceKind::divisor;
    std::vector<ExtremalEntry> entries;
    // Smallest doubling of 1024 at which the completeness certificate holds.
    std::uint64_t scan_limit = 0;
};

// Exponent of log log in the conjectured maximal order: 3/4 (2^(4/3) - 1)
// for the divisor, 3/4 (2^(1/3) - 1) for the circle.
double order_exponent(SequenceKind kind);
// Exponent of log y in N(y) / y^(4/3): 2^(4/3) - 1 or 2^(1/3) - 1.
double counting_exponent(SequenceKind kind);

// Strict ordering of n^(3/4)/h(n) with exact resolution of near ties.
bool precedes(std::uint64_t n1, std::uint32_t h1, std::uint64_t n2, std::uint32_t h2);

std::vector<ExtremalTerm> largest_terms(SequenceKind kind, std::uint64_t M, const ArithmeticTable& table);

// Descending compensated sum of largest_terms.
double extremal_sum(SequenceKind kind, std::uint64_t M, const ArithmeticTable& table);

// One scan for every M in ms (any order).
ExtremalSumTable extremal_table(SequenceKind kind, std::span<const std::uint64_t> ms, const ArithmeticTable& table);

// N(y) from the table; RangeError unless n^(3/4)/h(n) > y is certified past the table.
std::uint64_t count_below(SequenceKind kind, double y, const ArithmeticTable& table);

// N(y) without a table: depth-first search over factorizations with prime
// counting at the leaves. Sieves primes up to about (8 y)^(4/3).
class FactorCounter {
public:
    FactorCounter(SequenceKind kind, double y_max);
    std::uint64_t count(double y) const;
    std::uint64_t prime_limit() const { return limit_; }

private:
    std::uint64_t primes_upto(std::uint64_t x) const;        // pi(x)
    std::uint64_t split_primes_upto(std::uint64_t x) const;  // primes = 1 mod 4 up to x
    std::uint64_t leaf_primes(std::uint64_t lo, std::uint64_t hi) const;
    std::uint64_t search(std::size_t start, double s, double inv_y) const;

    SequenceKind kind_;
    double y_max_;
    std::uint64_t limit_;
    std::vector<std::uint32_t> small_primes_;
    // Bits over n = 1 mod 4 and n = 3 mod 4 (index n / 4), with word prefix counts.
    std::vector<std::uint64_t> bits1_, bits3_;
    std::vector<std::uint32_t> prefix1_, prefix3_;
};

struct ExponentFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    std::vector<double> ys;
    std::vector<double> counts;
};

// Least squares of log(count / y^(4/3)) on log log y.
ExponentFit fit_log_power(std::span<const double> ys, std::span<const double> counts);

// Exact counts on y_grid (increasing, >= 8 points, >= 2 decades, y > e) then fit.
ExponentFit exponent_fit(SequenceKind kind, std::span<const double> y_grid);

// Log-spaced grid of points values on [ymin, ymax].
std::vector<double> log_grid(double ymin, double ymax, std::size_t points);

// M^(1/4) (log M)^order_exponent(kind); M >= 3.
double predicted_order(SequenceKind kind, double M);

}  // namespace omega
