// resonator.hpp
//
// Product resonator R(t) = prod_{m in M} (1 - r e(lambda_m t))^(-1) and its
// expansion R(t) = sum_{v in A} a_r(v) e(v t) over the additive semigroup A
// generated by the lambda_m. A value v with representations
// v = sum_m b_j(m) lambda_m (j = 1..l) has a_r(v) = sum_j r^(sum_m b_j(m)).
//
// Expansions are truncated by total degree sum_m b(m) <= B; the omitted
// coefficients sum to the multinomial tail sum_{k>B} C(M+k-1, k) r^k.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace omega {

struct FrequencySet {
    std::vector<double> lambdas;
    double r = 0.5;
    // Exact path: lambdas[i] == numerators[i] / denominator.
    std::vector<std::int64_t> numerators;
    std::int64_t denominator = 0;

    static FrequencySet real(std::vector<double> lambdas, double r);
    static FrequencySet rational(std::vector<std::int64_t> numerators, std::int64_t denominator, double r);

    bool exact() const { return denominator > 0; }
    std::size_t size() const { return lambdas.size(); }
    void validate() const;
};

struct ExpansionEntry {
    double v = 0;
    std::int64_t key = 0;  // v * denominator on the exact path
    double coefficient = 0;     // a_r(v), representations of degree <= B
    double inner = 0;           // a_r(v), representations of degree <= B - 1
    double squared_weight = 0;  // a_{r^2}(v), representations of degree <= B
    unsigned representations = 0;
    unsigned min_degree = 0;
    unsigned max_degree = 0;
};

inline constexpr double kDefaultMergeTolerance = 1e-9;
inline constexpr std::size_t kDefaultEnumerationBudget = 20'000'000;

struct ResonatorExpansion {
    std::vector<ExpansionEntry> entries;  // sorted by v
    std::size_t size = 0;                 // M
    double r = 0;
    unsigned degree_bound = 0;
    double dropped_mass = 0;
    // Relative merge tolerance: v, v' merge iff |v - v'| <= tol * max(1, |v|).
    double merge_tol = kDefaultMergeTolerance;
    bool exact_keys = false;
    std::int64_t denominator = 0;

    const ExpansionEntry* find(double v) const;
    const ExpansionEntry* find_key(std::int64_t key) const;
    double total() const;
    double squared_total() const;
    // sum_v a_r(v) e(v t)
    std::complex<double> evaluate(double t) const;
};

// Enumerates all C(M+B, B) vectors b with sum b <= B in lexicographic order.
ResonatorExpansion expand(const FrequencySet& fs, unsigned degree_bound,
                          std::optional<double> merge_tol = std::nullopt,
                          std::size_t enumeration_budget = kDefaultEnumerationBudget);

std::complex<double> eval_product(const FrequencySet& fs, double t);

// sum_{k > B} C(M+k-1, k) q^k for 0 < q < 1.
double multinomial_tail(std::size_t m, double q, unsigned degree_bound);

// a_r(v + lambda_n) >= r a_r(v) for every entry v carrying representations
// of degree <= B - 1 (those shift to representations of degree <= B).
bool shift_inequality_check(const ResonatorExpansion& expansion, const FrequencySet& fs);

struct SquareBoundReport {
    bool pass = false;
    bool pointwise = false;  // a_r(v)^2 >= a_{r^2}(v) for every entry
    double partial_sum = 0;  // sum_v a_{r^2}(v) over the truncation
    double closed_form = 0;  // (1 - r^2)^(-M)
    double gap = 0;          // closed_form - partial_sum
    double tail_bound = 0;   // multinomial tail at r^2
};

SquareBoundReport square_bound_check(const FrequencySet& fs, unsigned degree_bound);

}  // namespace omega
