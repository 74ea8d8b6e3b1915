// trig_sum.hpp
//
// Re(e^(i phase) sum_k w_k e(lambda_k x)) at single points and along uniform
// grids. Grid evaluation advances each phase by a fixed rotation and
// re-anchors from the exact phase every kAnchorInterval steps.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace omega {

inline constexpr std::size_t kAnchorInterval = 1024;

double twisted_sum(std::span<const double> weights, std::span<const double> freqs, double phase, double x);

// out[j] = twisted_sum(..., x0 + j h) for j < out.size()
void twisted_sum_grid(std::span<const double> weights, std::span<const double> freqs, double phase, double x0,
                      double h, std::span<double> out);

// Golden-section search for a local maximum of f on [a, b]; evaluations
// counts calls of f and is capped at max_evals.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, std::size_t max_evals) {
    constexpr double inv_phi = 0.6180339887498948482;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    if (max_evals < 2) {
        const double mid = 0.5 * (a + b);
        return {mid, max_evals == 0 ? -1e300 : f(mid)};
    }
    double fc = f(c);
    double fd = f(d);
    std::size_t used = 2;
    while (used < max_evals) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++used;
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace omega
