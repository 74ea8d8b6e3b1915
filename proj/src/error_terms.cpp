#include "omega/error_terms.hpp"

#include <cmath>
#include <algorithm>
#include <string>
#include <thread>

#include "omega/errors.hpp"

namespace omega {

long double delta_exact(const RealArg& y) {
    if (y.floor < 1) throw DomainError("delta_exact needs y >= 1");
    const long double main = y.value * (std::log(y.value) + 2 * kEulerGamma - 1);
    return to_long_double(divisor_summatory(y.floor)) - main;
}

long double p_exact(const RealArg& y) {
    if (y.floor < 1) throw DomainError("p_exact needs y >= 1");
    return to_long_double(circle_summatory(y.floor)) - kPi * y.value;
}

long double error_term_exact(SequenceKind kind, const RealArg& y) {
    return kind == SequenceKind::divisor ? delta_exact(y) : p_exact(y);
}

VoronoiSeries::VoronoiSeries(SequenceKind kind, std::uint64_t terms, const ArithmeticTable& table)
    : kind_(kind), phase_(kind == SequenceKind::divisor ? -static_cast<double>(kPi) / 4 : static_cast<double>(kPi) / 4) {
    if (terms == 0) throw DomainError("series needs at least one term");
    if (terms > table.limit) {
        throw RangeError("series terms " + std::to_string(terms) + " exceed sieve limit " +
                         std::to_string(table.limit));
    }
    weights_.resize(terms);
    frequencies_.resize(terms);
    const long double scale = kind == SequenceKind::divisor ? 2.0L : 1.0L;
    long double total = 0;
    for (std::uint64_t n = 1; n <= terms; ++n) {
        const double h = table.value(kind, n);
        weights_[n - 1] = h * std::pow(static_cast<double>(n), -0.75);
        frequencies_[n - 1] = scale * std::sqrt(static_cast<long double>(n));
        total += weights_[n - 1];
    }
    weight_total_ = static_cast<double>(total);
}

double VoronoiSeries::cosine_sum(double x) const {
    constexpr double two_pi = 2 * static_cast<double>(kPi);
    const long double lx = x;
    long double sum = 0;
    long double carry = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] == 0) continue;
        const long double t = frequencies_[i] * lx;
        const auto frac = static_cast<double>(t - std::floor(t));
        const long double term = weights_[i] * std::cos(two_pi * frac + phase_);
        // Neumaier compensation
        const long double next = sum + term;
        carry += std::fabs(sum) >= std::fabs(term) ? (sum - next) + term : (term - next) + sum;
        sum = next;
    }
    return static_cast<double>(sum + carry);
}

double VoronoiSeries::prefactor(double x) const {
    const double root = std::sqrt(x);
    const double pi = static_cast<double>(kPi);
    return kind_ == SequenceKind::divisor ? root / (pi * std::sqrt(2.0)) : -root / pi;
}

double VoronoiSeries::value(double x) const { return prefactor(x) * cosine_sum(x); }

double VoronoiSeries::envelope(double x) const { return std::fabs(prefactor(x)) * weight_total_; }

double voronoi_delta(double x, std::uint64_t terms, const ArithmeticTable& table) {
    if (!(x > 1)) throw DomainError("voronoi_delta needs x > 1");
    return VoronoiSeries(SequenceKind::divisor, terms, table).value(x);
}

double voronoi_p(double x, std::uint64_t terms, const ArithmeticTable& table) {
    if (!(x > 1)) throw DomainError("voronoi_p needs x > 1");
    return VoronoiSeries(SequenceKind::circle, terms, table).value(x);
}

ResidualScan residual_scan(SequenceKind kind, std::span<const double> xs, std::uint64_t terms,
                           const ArithmeticTable& table, unsigned threads) {
    ResidualScan scan;
    if (xs.empty()) return scan;
    if (threads == 0) throw DomainError("threads must be positive");

    const double big_x = std::pow(static_cast<double>(terms), 1.0 / 3.1);
    for (const double x : xs) {
        if (!(x > 1) || x > big_x * big_x * big_x) {
            throw DomainError("sample x = " + std::to_string(x) + " outside (1, X^3] for N = " + std::to_string(terms));
        }
        const long double y = static_cast<long double>(x) * x;
        if (y == std::floor(y)) {
            throw DomainError("sample x = " + std::to_string(x) + " has integral x^2 (jump point)");
        }
    }

    const VoronoiSeries series(kind, terms, table);
    scan.samples.resize(xs.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < xs.size(); i += stride) {
            const double x = xs[i];
            const long double y = static_cast<long double>(x) * x;
            RealArg arg{static_cast<std::uint64_t>(std::floor(y)), y};
            ErrorTermSample& s = scan.samples[i];
            s.kind = kind;
            s.x = x;
            s.exact_value = static_cast<double>(error_term_exact(kind, arg));
            s.series_value = series.value(x);
            s.residual = s.exact_value - s.series_value;
            s.terms_used = terms;
        }
    };
    // Each sample is independent, so the result does not depend on threads.
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }

    for (const ErrorTermSample& s : scan.samples) {
        const double r = std::fabs(s.residual);
        scan.max_abs_residual = std::max(scan.max_abs_residual, r);
        scan.max_scaled_residual = std::max(scan.max_scaled_residual, r / std::pow(s.x, 0.5 - kResidualEpsilon));
    }
    return scan;
}

}  // namespace omega
