// SPDX-License-Identifier: Apache-2.0
#include "usct/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "usct/parallel.hpp"

namespace usct {

std::vector<Point> ring_positions(const RingArray& a) {
    if (a.m < 2)
        throw std::invalid_argument("ring_positions: need at least 2 transducers");
    const double r = 0.5 * a.diameter;
    std::vector<Point> pts(a.m);
    for (int k = 0; k < a.m; ++k) {
        const double theta = a.theta0 + 2.0 * std::numbers::pi * k / a.m;
        pts[k] = {a.center.x + r * std::cos(theta),
                  a.center.y + r * std::sin(theta)};
    }
    return pts;
}

std::vector<double> default_angular_frequencies() {
    std::vector<double> w;
    for (int f = 300000; f <= 650000; f += 50000)
        w.push_back(2.0 * std::numbers::pi * f);
    return w;
}

namespace {

void check_inside(const Grid2D& g, Point p, const char* what) {
    const double x0 = g.origin.x, y0 = g.origin.y;
    const double x1 = g.x(g.nx - 1), y1 = g.y(g.ny - 1);
    if (p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1) {
        std::ostringstream msg;
        msg << what << ": position (" << p.x << ", " << p.y
            << ") outside grid extent [" << x0 << ", " << x1 << "] x [" << y0
            << ", " << y1 << "]";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

ComplexField2D make_point_source(const Grid2D& grid, Point position,
                                 Complex amplitude) {
    check_inside(grid, position, "make_point_source");
    const int i = static_cast<int>(std::lround((position.x - grid.origin.x) / grid.h));
    const int j = static_cast<int>(std::lround((position.y - grid.origin.y) / grid.h));
    ComplexField2D f(grid);
    f.at(std::clamp(i, 0, grid.nx - 1), std::clamp(j, 0, grid.ny - 1)) =
        amplitude / (grid.h * grid.h);
    return f;
}

ComplexField2D make_point_source_bilinear(const Grid2D& grid, Point position,
                                          Complex amplitude) {
    check_inside(grid, position, "make_point_source");
    const double fx = (position.x - grid.origin.x) / grid.h;
    const double fy = (position.y - grid.origin.y) / grid.h;
    const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.nx - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.ny - 2);
    const double tx = std::clamp(fx - i0, 0.0, 1.0);
    const double ty = std::clamp(fy - j0, 0.0, 1.0);
    ComplexField2D f(grid);
    const Complex a = amplitude / (grid.h * grid.h);
    f.at(i0, j0) = a * (1.0 - tx) * (1.0 - ty);
    f.at(i0 + 1, j0) = a * tx * (1.0 - ty);
    f.at(i0, j0 + 1) = a * (1.0 - tx) * ty;
    f.at(i0 + 1, j0 + 1) = a * tx * ty;
    return f;
}

ComplexField2D make_point_source(const Grid2D& grid, Point position,
                                 Complex amplitude, SourceInjection mode) {
    return mode == SourceInjection::NearestCell
               ? make_point_source(grid, position, amplitude)
               : make_point_source_bilinear(grid, position, amplitude);
}

Complex sample_bilinear(const ComplexField2D& u, Point position) {
    const Grid2D& g = u.grid;
    check_inside(g, position, "sample_bilinear");
    const double fx = (position.x - g.origin.x) / g.h;
    const double fy = (position.y - g.origin.y) / g.h;
    const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny - 2);
    const double tx = std::clamp(fx - i0, 0.0, 1.0);
    const double ty = std::clamp(fy - j0, 0.0, 1.0);
    return u.at(i0, j0) * (1.0 - tx) * (1.0 - ty) +
           u.at(i0 + 1, j0) * tx * (1.0 - ty) +
           u.at(i0, j0 + 1) * (1.0 - tx) * ty +
           u.at(i0 + 1, j0 + 1) * tx * ty;
}

std::vector<Complex> record_receivers(const ComplexField2D& u, const RingArray& a) {
    std::vector<Point> pts = ring_positions(a);
    std::vector<Complex> out(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k)
        out[k] = sample_bilinear(u, pts[k]);
    return out;
}

SimulationResult simulate_measurements(const SoundSpeedMap& c,
                                       const std::vector<double>& angular_frequencies,
                                       const RingArray& a, const CBSConfig& cfg,
                                       const SimulateOptions& opt) {
    const Grid2D& grid = c.c.grid;
    std::vector<Point> pts = ring_positions(a);
    for (const Point& p : pts) check_inside(grid, p, "simulate_measurements");

    const int m = a.m;
    const int n = static_cast<int>(angular_frequencies.size());
    SimulationResult result;
    result.tensor.m = m;
    result.tensor.frequencies = angular_frequencies;
    result.tensor.array = a;
    result.tensor.y.assign(static_cast<std::size_t>(m) * m * n, Complex(0.0));
    if (opt.keep_fields)
        result.fields.resize(static_cast<std::size_t>(m) * n);

    std::mutex failure_mutex;
    parallel_for(static_cast<std::size_t>(m) * n, opt.threads, [&](std::size_t task) {
        const int k = static_cast<int>(task % m);   // source
        const int j = static_cast<int>(task / m);   // frequency
        HelmholtzProblem prob{
            c, angular_frequencies[j],
            make_point_source(grid, pts[k], opt.source_value, opt.injection)};
        SolveResult sol = solve_helmholtz(prob, cfg);
        if (!sol.report.converged) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            result.failures.push_back({k, j, sol.report});
        }
        std::vector<Complex> recv = record_receivers(sol.u, a);
        for (int l = 0; l < m; ++l) result.tensor.at(l, k, j) = recv[l];
        if (opt.keep_fields)
            result.fields[static_cast<std::size_t>(j) * m + k] = std::move(sol.u);
    });

    if (opt.throw_on_failure && !result.failures.empty()) {
        std::ostringstream msg;
        msg << "simulate_measurements: solver did not converge for (source, "
               "frequency) pairs:";
        for (const SolveFailure& f : result.failures)
            msg << " (" << f.source << ", " << f.freq_index << ")";
        throw std::runtime_error(msg.str());
    }
    return result;
}

}  // namespace usct
