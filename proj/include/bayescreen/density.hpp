#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bayescreen/curve.hpp"
#include "bayescreen/errors.hpp"
#include "bayescreen/probability.hpp"
#include "bayescreen/quadrature.hpp"

namespace bayescreen {

/// A density sampled on a uniform grid over [0, 1].
struct DensityGrid {
    std::vector<double> support;
    std::vector<double> values;
    bool normalized = false;
    // Trapezoidal mass of the analytically normalised values, before the grid
    // was rescaled to unit mass. NaN when no analytic constant was available.
    double analytic_mass = std::numeric_limits<double>::quiet_NaN();

    std::size_t size() const noexcept { return values.size(); }

    double step() const noexcept {
        return support.size() < 2 ? 0.0 : support[1] - support[0];
    }

    double integral() const { return quad::trapezoid(values, step()); }
};

inline DensityGrid make_density_grid(std::size_t grid_size, std::size_t minimum,
                                     const std::string& field = "grid_size") {
    if (grid_size < minimum) {
        throw InvalidArgument(field, "must be at least " + std::to_string(minimum));
    }
    DensityGrid grid;
    grid.support = uniform_grid(0.0, 1.0, grid_size, field);
    grid.values.assign(grid_size, 0.0);
    return grid;
}

/// Rescales to unit trapezoidal mass.
inline void normalize(DensityGrid& grid) {
    const double mass = grid.integral();
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw UnnormalizedDensity("density has zero or non-finite mass");
    }
    for (double& v : grid.values) v /= mass;
    grid.normalized = true;
}

/// Total-variation distance between two densities on the same grid.
inline double total_variation(const DensityGrid& lhs, const DensityGrid& rhs) {
    if (lhs.size() != rhs.size()) {
        throw InvalidArgument("grid_size", "densities must share a grid");
    }
    std::vector<double> diff(lhs.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::fabs(lhs.values[i] - rhs.values[i]);
    return 0.5 * quad::trapezoid(diff, lhs.step());
}

struct PosteriorSummary {
    double mean = 0.0;
    double mode = 0.0;
    double variance = 0.0;
    double sd = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    double mass = 1.0;
};

namespace detail {

// Inverse of the piecewise-quadratic CDF implied by trapezoids on a linear
// interpolant of the density.
inline double inverse_cdf(const DensityGrid& d, const std::vector<double>& cdf, double target) {
    const double h = d.step();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.begin()) return d.support.front();
    if (it == cdf.end()) return d.support.back();
    const auto j = static_cast<std::size_t>(it - cdf.begin());
    const std::size_t i = j - 1;
    const double f0 = d.values[i];
    const double f1 = d.values[j];
    auto cell_cdf = [&](double u) {
        return cdf[i] + f0 * u + 0.5 * (f1 - f0) * u * u / h - target;
    };
    const double u = quad::bisect(cell_cdf, 0.0, h, 1e-15 * std::max(1.0, h));
    return d.support[i] + u;
}

}  // namespace detail

/// Mean and variance by trapezoidal quadrature, mode from the grid argmax
/// refined by a local parabola, and the equal-tailed credible interval.
inline PosteriorSummary posterior_summary(const DensityGrid& d, double level = 0.95) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level", "must lie in (0, 1)");
    if (d.size() < 3) throw InvalidArgument("grid_size", "density grid needs at least 3 points");
    const double mass = d.integral();
    if (!d.normalized || !(std::fabs(mass - 1.0) <= 1e-4)) {
        throw UnnormalizedDensity("density integrates to " + std::to_string(mass));
    }
    const double h = d.step();

    PosteriorSummary s;
    s.level = level;
    s.mass = mass;
    s.mean = quad::trapezoid_weighted(d.support, d.values, h, [](double x) { return x; }) / mass;
    const double mean = s.mean;
    s.variance = quad::trapezoid_weighted(d.support, d.values, h,
                                          [mean](double x) { return (x - mean) * (x - mean); }) /
                 mass;
    s.sd = std::sqrt(s.variance);

    const auto peak = static_cast<std::size_t>(
        std::max_element(d.values.begin(), d.values.end()) - d.values.begin());
    s.mode = d.support[peak];
    if (peak > 0 && peak + 1 < d.size()) {
        const double fl = d.values[peak - 1];
        const double fc = d.values[peak];
        const double fr = d.values[peak + 1];
        const double curvature = fl - 2.0 * fc + fr;
        if (curvature < 0.0) {
            const double offset = std::clamp(0.5 * (fl - fr) / curvature, -1.0, 1.0);
            s.mode += offset * h;
        }
    }

    const auto cdf = quad::cumulative_trapezoid(d.values, h);
    const double tail = 0.5 * (1.0 - level) * cdf.back();
    s.lower = detail::inverse_cdf(d, cdf, tail);
    s.upper = detail::inverse_cdf(d, cdf, cdf.back() - tail);
    return s;
}

/// Max-preserving decimation to at most `max_points` samples: each bucket of
/// consecutive nodes keeps its largest value, so the grid mode survives.
inline DensityGrid decimate_max(const DensityGrid& d, std::size_t max_points) {
    if (max_points < 2) throw InvalidArgument("max_points", "must be at least 2");
    if (d.size() <= max_points) return d;
    const std::size_t bucket = (d.size() + max_points - 1) / max_points;
    DensityGrid out;
    out.normalized = d.normalized;
    out.analytic_mass = d.analytic_mass;
    for (std::size_t start = 0; start < d.size(); start += bucket) {
        const std::size_t stop = std::min(start + bucket, d.size());
        std::size_t best = start;
        for (std::size_t i = start + 1; i < stop; ++i) {
            if (d.values[i] > d.values[best]) best = i;
        }
        out.support.push_back(d.support[best]);
        out.values.push_back(d.values[best]);
    }
    return out;
}

}  // namespace bayescreen
