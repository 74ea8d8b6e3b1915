// arithmetic.hpp
//
// Exact arithmetic core: sieved d(n) and r(n) with prefix sums, O(sqrt x)
// summatory functions, and counting of {n : n g(n) <= x} for multiplicative
// weights g.
//
// r(n) counts (a, b) in Z^2 with a^2 + b^2 = n, so r(n) = 4 rho(n) with rho
// multiplicative:
//   rho(2^m) = 1,  rho(p^m) = (1 + (-1)^m)/2 for p = 3 mod 4,
//   rho(p^m) = m + 1 for p = 1 mod 4.
//
// Circle sums start at n = 1 (the origin is not counted). Add 1 to every
// circle_summatory value to get the lattice-point count of the closed disc.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace omega {

using Int128 = __int128;

std::string to_string(Int128 value);
long double to_long_double(Int128 value);

// Floor of x must come from an exact representation. RealArg carries the
// exact floor alongside the (possibly rounded) value used in smooth terms.
struct RealArg {
    std::uint64_t floor = 0;
    long double value = 0;
};

RealArg from_double(double x);
// Accepts non-negative decimals: digits, optional fraction, optional e+NN.
RealArg parse_decimal(std::string_view text);

std::uint64_t isqrt(std::uint64_t n);

std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

enum class SequenceKind { divisor, circle };

std::string_view name(SequenceKind kind);
SequenceKind parse_kind(std::string_view text);

// Memory: d and r are 4 bytes each, the two prefix arrays 8 bytes each, so
// 24 bytes per entry, plus a transient 4-byte smallest-prime-factor array
// during construction.
inline constexpr std::size_t kTableBytesPerEntry = 24;
inline constexpr std::size_t kTableBuildBytesPerEntry = 28;
inline constexpr std::size_t kDefaultTableBudget = std::size_t{3} << 30;

struct ArithmeticTable {
    std::uint64_t limit = 0;
    // Index 0 is unused and holds zero.
    std::vector<std::uint32_t> d_values;
    std::vector<std::uint32_t> r_values;
    std::vector<std::uint64_t> d_prefix;
    std::vector<std::uint64_t> r_prefix;

    std::uint32_t d(std::uint64_t n) const { return d_values[n]; }
    std::uint32_t r(std::uint64_t n) const { return r_values[n]; }
    std::uint32_t value(SequenceKind kind, std::uint64_t n) const {
        return kind == SequenceKind::divisor ? d_values[n] : r_values[n];
    }
};

ArithmeticTable build_table(std::uint64_t limit, std::size_t max_bytes = kDefaultTableBudget);

// Sum of d(n) for 1 <= n <= floor_x by the hyperbola identity.
Int128 divisor_summatory(std::uint64_t floor_x);
// Sum of r(n) for 1 <= n <= floor_x via 4 * sum_k chi_4(k) floor(x/k),
// grouped into blocks of constant floor(x/k).
Int128 circle_summatory(std::uint64_t floor_x);

Int128 summatory(SequenceKind kind, std::uint64_t floor_x);

// Weight g(n) = scale * prod g0(p^m); prime_power returns g0(p^m) and 0
// outside the support. kappa is the value of g0 at primes (for the circle
// weight: at primes p = 1 mod 4, where the analytic exponent comes from).
struct MultiplicativeWeightSpec {
    enum class Kind { divisor, circle, custom };

    Kind kind = Kind::custom;
    double kappa = 1.0;
    double scale = 1.0;
    std::function<double(std::uint64_t p, unsigned m)> prime_power;
    // Custom weights only: rigorous lower bound of n g(n) over n > limit.
    std::function<double(std::uint64_t limit)> tail_lower_bound;

    // g(n) = d(n)^(-4/3)
    static MultiplicativeWeightSpec divisor();
    // g(n) = r(n)^(-4/3) on r(n) > 0
    static MultiplicativeWeightSpec circle();
};

// g(n) for 1 <= n <= limit from the prime-power rule (index 0 unused).
std::vector<double> multiplicative_sieve(const MultiplicativeWeightSpec& spec, std::uint64_t limit);

// Exact size of {n >= 1 : g(n) > 0 and n g(n) <= x}. Throws RangeError
// unless n g(n) > x is certified for every n beyond the table.
std::uint64_t count_weighted(const MultiplicativeWeightSpec& spec, double x, const ArithmeticTable& table);

// Rigorous upper bound of sup_{n > limit} h(n) n^(-3/4) with h = d or r.
// Minimum of two bounds:
//   d(n) <= n^(1.066 / log log n)        (n >= 3, decreasing past n = 63)
//   h(n) <= C_eps n^eps with C_eps = prod_{p < 2^(1/eps)} max_k (k+1) p^(-k eps)
// where for r the product runs over p = 1 mod 4 and carries the factor 4.
double tail_ratio_bound(SequenceKind kind, std::uint64_t limit);

// C_eps above; split_only restricts to primes p = 1 mod 4.
double divisor_power_constant(double eps, bool split_only);

}  // namespace omega
