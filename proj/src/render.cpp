// SPDX-License-Identifier: Apache-2.0
#include "usct/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace usct {

namespace {

void write_pgm_impl(const std::vector<double>& values, int nx, int ny,
                    const std::filesystem::path& path, double lo, double hi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out << "P5\n" << nx << " " << ny << "\n255\n";
    const double span = hi > lo ? hi - lo : 1.0;
    // Image rows top to bottom: flip y so +y points up in the image.
    for (int j = ny - 1; j >= 0; --j) {
        for (int i = 0; i < nx; ++i) {
            const double v = values[static_cast<std::size_t>(j) * nx + i];
            const double t = std::clamp((v - lo) / span, 0.0, 1.0);
            const unsigned char byte = static_cast<unsigned char>(
                std::lround(t * 255.0));
            out.write(reinterpret_cast<const char*>(&byte), 1);
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("write failure on " + path.string());

    std::ofstream side(path.string() + ".txt");
    side << "min = " << lo << "\nmax = " << hi << "\n";
}

}  // namespace

void write_pgm(const RealField2D& f, const std::filesystem::path& path,
               double lo, double hi) {
    write_pgm_impl(f.values, f.grid.nx, f.grid.ny, path, lo, hi);
}

void write_pgm(const RealField2D& f, const std::filesystem::path& path) {
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    write_pgm_impl(f.values, f.grid.nx, f.grid.ny, path, lo, hi);
}

void write_complex_pgm(const ComplexField2D& f, const std::filesystem::path& stem) {
    RealField2D mag(f.grid), re(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        mag.values[i] = std::abs(f.values[i]);
        re.values[i] = f.values[i].real();
    }
    write_pgm(mag, stem.string() + "_mag.pgm");
    write_pgm(re, stem.string() + "_real.pgm");
}

}  // namespace usct
