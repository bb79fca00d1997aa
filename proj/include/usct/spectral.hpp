// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_SPECTRAL_HPP
#define USCT_SPECTRAL_HPP

#include <memory>

#include "usct/grid.hpp"

namespace usct {

/// Complex-to-complex 2D FFT for one grid size. Owns its FFTW plans and
/// buffers; one instance per thread. inverse() includes the 1/(nx*ny)
/// normalization, so inverse(forward(f)) == f.
class Fft2D {
public:
    Fft2D(int nx, int ny);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void forward(const Complex* in, Complex* out);
    void inverse(const Complex* in, Complex* out);

    int nx() const;
    int ny() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fourier-multiplier operator: one complex symbol value per cell in the
/// standard unshifted DFT layout (frequency 0 at index 0).
struct SpectralMultiplier {
    Grid2D grid;
    std::vector<Complex> symbol;
};

/// Angular spatial frequency along x at DFT index i, wrapped to the
/// symmetric range: 2*pi*wrap(i)/(nx*h).
double spectral_freq(int i, int n, double h);

/// Symbol of the 2D Laplacian: -|p|^2.
SpectralMultiplier laplacian_symbol(const Grid2D& g);

ComplexField2D apply_spectral_multiplier(const ComplexField2D& f,
                                         const SpectralMultiplier& m);

/// In-place variant using a caller-owned transform (hot path for solvers).
void apply_spectral_multiplier(Fft2D& fft, const std::vector<Complex>& symbol,
                               std::vector<Complex>& values,
                               std::vector<Complex>& scratch);

}  // namespace usct

#endif
