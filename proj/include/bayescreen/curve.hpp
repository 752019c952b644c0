#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bayescreen/errors.hpp"

namespace bayescreen {

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Ordered (x, y) samples with strictly increasing x.
struct CurveSeries {
    std::vector<CurvePoint> points;
    std::string x_label;
    std::string y_label;
};

/// n points spanning [lo, hi] inclusive. The last point is pinned to hi.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n,
                                        const std::string& field = "grid_size") {
    if (n < 2) throw InvalidArgument(field, "must be at least 2");
    if (!(hi > lo)) throw InvalidArgument(field, "grid bounds must satisfy lo < hi");
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

}  // namespace bayescreen
