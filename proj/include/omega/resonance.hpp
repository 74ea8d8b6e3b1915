// resonance.hpp
//
// Desk-scale certification of the twisted resonance inequality. For a
// target F(x) = sum_n f(n) e(lambda_n x) with f >= 0, resonator R over the
// resonant subset M and a sectorial kernel K,
//
//   I1 = int_0^inf |R(x)|^2 K(x/T) dx
//   I2 = int_0^inf Re(e^(i beta) F(x)) |R(x)|^2 K(x/T) dx
//   I2 >= delta r (sum_{m in M} f(m)) I1.
//
// Both integrals are computed twice: by panelized Gauss-Kronrod quadrature
// in x (after x = T u^(1/alpha) on (0, T] to remove the endpoint
// singularity), and spectrally from the truncated resonator expansion,
//   I1 = T sum_{u,w} a_r(u) a_r(w) Re hat K((w-u) T)
//   I2 = T sum_n f(n) sum_{u,v} a_r(u) a_r(v) Re(e^(i beta) hat K((v-u-lambda_n) T)).

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "omega/arithmetic.hpp"
#include "omega/kernel.hpp"
#include "omega/resonator.hpp"

namespace omega {

struct TargetTerm {
    std::uint64_t n = 0;
    double f = 0;
    double lambda = 0;
    std::int64_t numerator = 0;  // exact path: lambda == numerator / denominator
};

struct TargetSum {
    std::vector<TargetTerm> support;
    std::string tag = "custom";
    std::int64_t denominator = 0;  // > 0 when every lambda is rational

    // f(n) = h(n) n^(-3/4), lambda_n = 2 sqrt(n) (divisor) or sqrt(n) (circle).
    static TargetSum from_sequence(SequenceKind kind, std::uint64_t terms, const ArithmeticTable& table);

    bool exact() const { return denominator > 0; }
    double total() const;  // F(0)
    std::complex<double> evaluate(double x) const;
    void validate() const;
};

struct QuadratureConfig {
    double nodes_per_oscillation = 20;
    unsigned max_depth = 6;
    double panel_tolerance = 1e-12;
    // AccuracyError when the error estimate exceeds this fraction of the L1 norm.
    double max_relative_error = 1e-6;
    std::size_t max_panels = 4'000'000;
    // Tail cutoff: the neglected tail is below this fraction of T.
    double tail_epsilon = 1e-16;
};

struct ResonanceInstance {
    TargetSum target;
    std::vector<std::size_t> resonant;  // positions into target.support
    SectorialKernel kernel;
    double r = 1.0 / 3.0;
    double T = 10;
    QuadratureConfig quadrature;

    FrequencySet resonator() const;
    double resonant_mass() const;  // sum_{m in M} f(m)
    void validate() const;
};

struct Estimate {
    double value = 0;
    double error = 0;
};

Estimate compute_I1(const ResonanceInstance& inst);
Estimate compute_I2(const ResonanceInstance& inst);

struct SpectralEstimate {
    double value = 0;
    double truncation_error = 0;
    unsigned degree_bound = 0;
};

SpectralEstimate spectral_I1(const ResonanceInstance& inst, unsigned degree_bound);
SpectralEstimate spectral_I2(const ResonanceInstance& inst, unsigned degree_bound);

// Smallest degree bound whose spectral truncation error is below tolerance
// (capped by the enumeration budget).
unsigned spectral_degree(const ResonanceInstance& inst, double tolerance, std::size_t budget = 200'000);

struct ResonanceReport {
    double I1 = 0;
    double I2 = 0;
    double rhs = 0;     // delta r sum_{m in M} f(m) I1
    double margin = 0;  // I2 - rhs
    double J1_bound = 0;  // T (1 - r^2)^(-M)
    double quadrature_error_estimate = 0;
    double I1_error = 0;
    double I2_error = 0;
    double sector_margin = 0;
    bool certified = false;  // margin >= -quadrature_error_estimate
};

// Default sector grid: 10^4 points on [-10^3, 10^3] plus xi = 0.
std::vector<double> default_sector_grid();

// Throws HypothesisError when the kernel fails the sector check.
ResonanceReport verify_proposition(const ResonanceInstance& inst);

struct TheoremCheck {
    double T = 0;          // X / (2 log X)
    double bound = 0;      // delta r sum_{m in M} f(m)
    double error_term = 0; // F(0) ((1+r)/(1-r))^M (Y log X / X)^alpha, constant 1
    double measured_error = 0;  // tail integrals over (0, Y) and (X, inf) divided by T (1-r^2)^(-M)
    double grid_max = 0;   // max of Re(e^(i beta) F) found on [Y, X]
    double argmax = 0;
    std::size_t grid_points = 0;
    bool pass = false;     // grid_max >= bound - error_term
};

inline constexpr std::size_t kTheoremGridCap = 200'000'000;

TheoremCheck theorem_lower_bound(const ResonanceInstance& inst, double Y, double X);

// Random desk-scale instance; rational frequencies p/q when rational is set.
ResonanceInstance random_instance(std::mt19937_64& rng, bool rational);

double uniform01(std::mt19937_64& rng);

}  // namespace omega
