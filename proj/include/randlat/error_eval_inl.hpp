#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace randlat {

template <typename Fn>
double minimize_over_lambda(Fn&& f, const BoundParams& bounds) {
    std::vector<double> grid = bounds.lambda_grid;
    std::sort(grid.begin(), grid.end());
    std::size_t best_index = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double value = f(grid[i]);
        if (value < best) {
            best = value;
            best_index = i;
        }
    }
    if (bounds.refine_iterations <= 0 || grid.size() < 2) return best;

    double lo = grid[best_index > 0 ? best_index - 1 : 0];
    double hi = grid[std::min(best_index + 1, grid.size() - 1)];
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    best = std::min({best, f1, f2});
    for (int it = 0; it < bounds.refine_iterations; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
            best = std::min(best, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
            best = std::min(best, f2);
        }
    }
    return best;
}

}  // namespace randlat
