#pragma once

// Trapezoidal rule on uniform grids and bracketing root finding.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bayescreen/errors.hpp"

namespace bayescreen::quad {

/// Trapezoidal integral of samples spaced `step` apart.
inline double trapezoid(std::span<const double> values, double step) {
    if (values.size() < 2) return 0.0;
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) interior += values[i];
    return step * (interior + 0.5 * (values.front() + values.back()));
}

/// Trapezoidal integral of f(x_i) * values_i.
template <typename Weight>
double trapezoid_weighted(std::span<const double> support, std::span<const double> values,
                          double step, Weight&& weight) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        total += w * weight(support[i]) * values[i];
    }
    return step * total;
}

/// Running trapezoidal integral; result[0] = 0, result.back() = trapezoid(values).
inline std::vector<double> cumulative_trapezoid(std::span<const double> values, double step) {
    std::vector<double> cumulative(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * step * (values[i - 1] + values[i]);
    }
    return cumulative;
}

/// Trapezoid node weights for an n-point uniform grid with the given step.
inline std::vector<double> trapezoid_weights(std::size_t n, double step) {
    std::vector<double> weights(n, step);
    if (n > 0) {
        weights.front() *= 0.5;
        weights.back() *= 0.5;
    }
    return weights;
}

/// Bisection for a sign change of f on [lo, hi]. Stops when the bracket is
/// narrower than `tolerance` or f hits zero exactly.
template <typename Function>
double bisect(Function&& f, double lo, double hi, double tolerance = 1e-12,
              int max_iterations = 400) {
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw InvalidArgument("bracket", "function has no sign change on the bracket");
    }
    for (int i = 0; i < max_iterations && (hi - lo) > tolerance; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

}  // namespace bayescreen::quad
