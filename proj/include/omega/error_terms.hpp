// error_terms.hpp
//
// Exact error terms
//   Delta(y) = sum_{n<=y} d(n) - y (log y + 2 gamma - 1)
//   P(y)     = sum_{n<=y} r(n) - pi y
// and the truncated Voronoi series for Delta(x^2) and P(x^2):
//   Delta(x^2) ~  x^(1/2) / (pi sqrt 2) * sum_{n<=N} d(n) n^(-3/4) cos(4 pi sqrt(n) x - pi/4)
//   P(x^2)     ~ -x^(1/2) / pi          * sum_{n<=N} r(n) n^(-3/4) cos(2 pi sqrt(n) x + pi/4)
//
// Phases are formed in long double and reduced mod 1 before the cosine, so
// the only double-precision loss is in the reduced phase (< 1e-15 turns).

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "omega/arithmetic.hpp"

namespace omega {

inline constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double delta_exact(const RealArg& y);
long double p_exact(const RealArg& y);
inline long double delta_exact(double y) { return delta_exact(from_double(y)); }
inline long double p_exact(double y) { return p_exact(from_double(y)); }
long double error_term_exact(SequenceKind kind, const RealArg& y);

// Cosine sum over n <= terms with coefficients h(n) n^(-3/4), frequencies
// lambda_n (2 sqrt n for the divisor, sqrt n for the circle) and phase
// -pi/4 (divisor) or +pi/4 (circle).
class VoronoiSeries {
public:
    VoronoiSeries(SequenceKind kind, std::uint64_t terms, const ArithmeticTable& table);

    SequenceKind kind() const { return kind_; }
    std::uint64_t terms() const { return weights_.size(); }

    // sum_n f(n) cos(2 pi lambda_n x + phase)
    double cosine_sum(double x) const;
    // Prefactor times cosine_sum: the approximation to Delta(x^2) or P(x^2).
    double value(double x) const;
    // x^(1/2)/(pi sqrt 2) or -x^(1/2)/pi
    double prefactor(double x) const;
    // |prefactor(x)| * sum_n f(n); bounds |value(x)|.
    double envelope(double x) const;

    double phase() const { return phase_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const long double> frequencies() const { return frequencies_; }

private:
    SequenceKind kind_;
    double phase_;
    std::vector<double> weights_;
    std::vector<long double> frequencies_;
    double weight_total_ = 0;
};

double voronoi_delta(double x, std::uint64_t terms, const ArithmeticTable& table);
double voronoi_p(double x, std::uint64_t terms, const ArithmeticTable& table);

struct ErrorTermSample {
    SequenceKind kind = SequenceKind::divisor;
    double x = 0;  // the error term is evaluated at x^2
    double exact_value = 0;
    double series_value = 0;
    double residual = 0;  // exact_value - series_value
    std::uint64_t terms_used = 0;
};

struct ResidualScan {
    std::vector<ErrorTermSample> samples;
    double max_abs_residual = 0;
    // max |residual| / x^(1/2 - 1/1000)
    double max_scaled_residual = 0;
};

inline constexpr double kResidualEpsilon = 1.0 / 1000.0;

// Samples with integral x^2 sit on a jump of the error term and are
// rejected, as are x outside (1, X^3] where N = X^3.1.
ResidualScan residual_scan(SequenceKind kind, std::span<const double> xs, std::uint64_t terms,
                           const ArithmeticTable& table, unsigned threads = 1);

}  // namespace omega
