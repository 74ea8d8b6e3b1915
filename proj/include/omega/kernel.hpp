// kernel.hpp
//
// One-sided Gamma kernel K_alpha(x) = x^(alpha-1) e^(-x) / Gamma(alpha) on
// x > 0, with Fourier transform (convention hat K(xi) = int K(x) e(-xi x) dx)
//   hat K_alpha(xi) = (1 + 2 pi i xi)^(-alpha),
// whose argument -alpha arctan(2 pi xi) stays inside |arg| < alpha pi / 2.
// Choosing tan(alpha pi / 2) = (cos beta - delta) / |sin beta| gives
//   Re(e^(i beta) hat K) >= delta Re(hat K) >= 0   for every xi.

#pragma once

#include <complex>
#include <span>

namespace omega {

struct SectorialKernel {
    double alpha = 0.5;
    double beta = 0;
    double delta = 0;

    // alpha chosen from (beta, delta); beta != 0, 0 < delta < cos beta.
    static SectorialKernel from_angle(double beta, double delta);

    // |alpha - choose_alpha(beta, delta)| <= 1e-12 (false for beta == 0).
    bool consistent() const;
};

double gamma_density(double alpha, double x);
std::complex<double> gamma_fourier(double alpha, double xi);
double choose_alpha(double beta, double delta);

struct SectorReport {
    // min over the grid of Re(e^(i beta) K^) - delta Re(K^)
    double min_margin = 0;
    // min over the grid of Re(K^)
    double min_real = 0;
    double worst_xi = 0;
    bool pass = false;
};

inline constexpr double kSectorTolerance = 1e-12;

SectorReport sector_check(const SectorialKernel& kernel, std::span<const double> grid);

}  // namespace omega
