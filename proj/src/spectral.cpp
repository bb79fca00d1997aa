// SPDX-License-Identifier: Apache-2.0
#include "usct/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace usct {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Fft2D::Impl {
    int nx, ny;
    fftw_complex* buf_in;
    fftw_complex* buf_out;
    fftw_plan fwd;
    fftw_plan bwd;
};

Fft2D::Fft2D(int nx, int ny) : impl_(new Impl) {
    impl_->nx = nx;
    impl_->ny = ny;
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->buf_in = fftw_alloc_complex(n);
    impl_->buf_out = fftw_alloc_complex(n);
    // FFTW is row-major with the last dimension fastest; our layout has x
    // fastest, so pass (ny, nx).
    impl_->fwd = fftw_plan_dft_2d(ny, nx, impl_->buf_in, impl_->buf_out,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(ny, nx, impl_->buf_in, impl_->buf_out,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf_in);
    fftw_free(impl_->buf_out);
}

int Fft2D::nx() const { return impl_->nx; }
int Fft2D::ny() const { return impl_->ny; }

void Fft2D::forward(const Complex* in, Complex* out) {
    const std::size_t n = static_cast<std::size_t>(impl_->nx) * impl_->ny;
    for (std::size_t i = 0; i < n; ++i) {
        impl_->buf_in[i][0] = in[i].real();
        impl_->buf_in[i][1] = in[i].imag();
    }
    fftw_execute(impl_->fwd);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = Complex(impl_->buf_out[i][0], impl_->buf_out[i][1]);
}

void Fft2D::inverse(const Complex* in, Complex* out) {
    const std::size_t n = static_cast<std::size_t>(impl_->nx) * impl_->ny;
    for (std::size_t i = 0; i < n; ++i) {
        impl_->buf_in[i][0] = in[i].real();
        impl_->buf_in[i][1] = in[i].imag();
    }
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = scale * Complex(impl_->buf_out[i][0], impl_->buf_out[i][1]);
}

double spectral_freq(int i, int n, double h) {
    const int wrapped = (i <= n / 2) ? i : i - n;
    return 2.0 * std::numbers::pi * wrapped / (n * h);
}

SpectralMultiplier laplacian_symbol(const Grid2D& g) {
    SpectralMultiplier m{g, std::vector<Complex>(g.size())};
    for (int j = 0; j < g.ny; ++j) {
        const double py = spectral_freq(j, g.ny, g.h);
        for (int i = 0; i < g.nx; ++i) {
            const double px = spectral_freq(i, g.nx, g.h);
            m.symbol[static_cast<std::size_t>(j) * g.nx + i] =
                Complex(-(px * px + py * py), 0.0);
        }
    }
    return m;
}

ComplexField2D apply_spectral_multiplier(const ComplexField2D& f,
                                         const SpectralMultiplier& m) {
    if (!(f.grid == m.grid))
        throw std::invalid_argument(
            "apply_spectral_multiplier: field and multiplier grids differ");
    Fft2D fft(f.grid.nx, f.grid.ny);
    ComplexField2D out = f;
    std::vector<Complex> scratch(f.size());
    apply_spectral_multiplier(fft, m.symbol, out.values, scratch);
    return out;
}

void apply_spectral_multiplier(Fft2D& fft, const std::vector<Complex>& symbol,
                               std::vector<Complex>& values,
                               std::vector<Complex>& scratch) {
    fft.forward(values.data(), scratch.data());
    for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] *= symbol[i];
    fft.inverse(scratch.data(), values.data());
}

}  // namespace usct
