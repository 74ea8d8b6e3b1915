#include "omega/trig_sum.hpp"

#include <cmath>
#include <numbers>

#include "omega/errors.hpp"

namespace omega {

namespace {

// Fractional part of lambda * x, formed in extended precision.
double turns(double lambda, double x) {
    const long double t = static_cast<long double>(lambda) * x;
    return static_cast<double>(t - std::floor(t));
}

}  // namespace

double twisted_sum(std::span<const double> weights, std::span<const double> freqs, double phase, double x) {
    if (weights.size() != freqs.size()) throw DomainError("weights and frequencies differ in length");
    constexpr double two_pi = 2 * std::numbers::pi;
    double sum = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) sum += weights[k] * std::cos(two_pi * turns(freqs[k], x) + phase);
    return sum;
}

void twisted_sum_grid(std::span<const double> weights, std::span<const double> freqs, double phase, double x0,
                      double h, std::span<double> out) {
    if (weights.size() != freqs.size()) throw DomainError("weights and frequencies differ in length");
    constexpr double two_pi = 2 * std::numbers::pi;
    const std::size_t terms = weights.size();
    std::vector<double> re(terms), im(terms), step_re(terms), step_im(terms);
    for (std::size_t k = 0; k < terms; ++k) {
        const double a = two_pi * turns(freqs[k], h);
        step_re[k] = std::cos(a);
        step_im[k] = std::sin(a);
    }
    const double cp = std::cos(phase);
    const double sp = std::sin(phase);

    for (std::size_t j0 = 0; j0 < out.size(); j0 += kAnchorInterval) {
        const double x = x0 + static_cast<double>(j0) * h;
        for (std::size_t k = 0; k < terms; ++k) {
            const double a = two_pi * turns(freqs[k], x);
            re[k] = weights[k] * std::cos(a);
            im[k] = weights[k] * std::sin(a);
        }
        const std::size_t j_end = std::min(out.size(), j0 + kAnchorInterval);
        for (std::size_t j = j0; j < j_end; ++j) {
            double sr = 0;
            double si = 0;
            for (std::size_t k = 0; k < terms; ++k) {
                sr += re[k];
                si += im[k];
                const double nr = re[k] * step_re[k] - im[k] * step_im[k];
                const double ni = re[k] * step_im[k] + im[k] * step_re[k];
                re[k] = nr;
                im[k] = ni;
            }
            out[j] = cp * sr - sp * si;
        }
    }
}

}  // namespace omega
