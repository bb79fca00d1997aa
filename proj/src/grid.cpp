// SPDX-License-Identifier: Apache-2.0
#include "usct/grid.hpp"

#include <cmath>

namespace usct {

Grid2D make_grid(int nx, int ny, double h, Point origin) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("make_grid: nx and ny must be >= 1");
    if (!(h > 0.0))
        throw std::invalid_argument("make_grid: spacing must be positive");
    return Grid2D{nx, ny, h, origin};
}

Grid2D make_centered_grid(int nx, int ny, double h) {
    return make_grid(nx, ny, h,
                     {-0.5 * (nx - 1) * h, -0.5 * (ny - 1) * h});
}

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace usct
