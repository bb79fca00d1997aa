// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_GRID_HPP
#define USCT_GRID_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace usct {

using Complex = std::complex<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Regular 2D grid. `origin` is the physical coordinate of the center of
/// cell (0,0); cell (i,j) sits at origin + (i*h, j*h).
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    Point origin;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double x(int i) const { return origin.x + i * h; }
    double y(int j) const { return origin.y + j * h; }
    double extent_x() const { return nx * h; }
    double extent_y() const { return ny * h; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && h == o.h &&
               origin.x == o.origin.x && origin.y == o.origin.y;
    }
};

Grid2D make_grid(int nx, int ny, double h, Point origin);

/// Grid whose cell centers are symmetric about (0,0).
Grid2D make_centered_grid(int nx, int ny, double h);

/// Scalar field on a Grid2D. Row-major, x fastest.
template <class T>
struct Field2D {
    Grid2D grid;
    std::vector<T> values;

    Field2D() = default;
    explicit Field2D(const Grid2D& g, T fill = T{})
        : grid(g), values(g.size(), fill) {}

    T& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    const T& at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * grid.nx + i];
    }
    std::size_t size() const { return values.size(); }
};

using ComplexField2D = Field2D<Complex>;
using RealField2D = Field2D<double>;

template <class T>
Field2D<T> pad_field(const Field2D<T>& f, int width, T fill) {
    if (width < 0) throw std::invalid_argument("pad_field: negative width");
    const Grid2D& g = f.grid;
    Grid2D pg = make_grid(g.nx + 2 * width, g.ny + 2 * width, g.h,
                          {g.origin.x - width * g.h, g.origin.y - width * g.h});
    Field2D<T> out(pg, fill);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i + width, j + width) = f.at(i, j);
    return out;
}

template <class T>
Field2D<T> crop_field(const Field2D<T>& f, int width) {
    if (width < 0) throw std::invalid_argument("crop_field: negative width");
    const Grid2D& g = f.grid;
    if (g.nx <= 2 * width || g.ny <= 2 * width)
        throw std::invalid_argument("crop_field: width too large for grid");
    Grid2D cg = make_grid(g.nx - 2 * width, g.ny - 2 * width, g.h,
                          {g.origin.x + width * g.h, g.origin.y + width * g.h});
    Field2D<T> out(cg);
    for (int j = 0; j < cg.ny; ++j)
        for (int i = 0; i < cg.nx; ++i)
            out.at(i, j) = f.at(i + width, j + width);
    return out;
}

double norm2(const std::vector<Complex>& v);
double norm2(const std::vector<double>& v);

}  // namespace usct

#endif
