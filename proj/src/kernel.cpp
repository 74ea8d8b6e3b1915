#include "omega/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "omega/errors.hpp"

namespace omega {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

SectorialKernel SectorialKernel::from_angle(double beta, double delta) {
    return {choose_alpha(beta, delta), beta, delta};
}

bool SectorialKernel::consistent() const {
    if (beta == 0) return false;
    try {
        return std::fabs(alpha - choose_alpha(beta, delta)) <= 1e-12;
    } catch (const DomainError&) {
        return false;
    }
}

double gamma_density(double alpha, double x) {
    require_alpha(alpha);
    if (x <= 0) return 0.0;
    return std::exp((alpha - 1) * std::log(x) - x - std::lgamma(alpha));
}

std::complex<double> gamma_fourier(double alpha, double xi) {
    require_alpha(alpha);
    // Principal branch; the base has real part 1 so no cut is crossed.
    const double two_pi_xi = 2 * std::numbers::pi * xi;
    const double log_modulus = 0.5 * std::log1p(two_pi_xi * two_pi_xi);
    const double argument = std::atan(two_pi_xi);
    return std::polar(std::exp(-alpha * log_modulus), -alpha * argument);
}

double choose_alpha(double beta, double delta) {
    const double half_pi = std::numbers::pi / 2;
    if (!(beta > -half_pi && beta < half_pi)) throw DomainError("beta must lie in (-pi/2, pi/2)");
    if (beta == 0) throw DomainError("beta = 0 needs no phase correction (any alpha in (0,1) works)");
    if (!(delta > 0 && delta < std::cos(beta))) throw DomainError("delta must lie in (0, cos beta)");
    return std::atan((std::cos(beta) - delta) / std::fabs(std::sin(beta))) / half_pi;
}

SectorReport sector_check(const SectorialKernel& kernel, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("sector_check needs a nonempty grid");
    SectorReport report;
    report.min_margin = std::numeric_limits<double>::infinity();
    report.min_real = std::numeric_limits<double>::infinity();
    const std::complex<double> twist = std::polar(1.0, kernel.beta);
    for (const double xi : grid) {
        const std::complex<double> k = gamma_fourier(kernel.alpha, xi);
        const double margin = (twist * k).real() - kernel.delta * k.real();
        if (margin < report.min_margin) {
            report.min_margin = margin;
            report.worst_xi = xi;
        }
        report.min_real = std::min(report.min_real, k.real());
    }
    report.pass = report.min_margin >= -kSectorTolerance && report.min_real >= -kSectorTolerance;
    return report;
}

}  // namespace omega
