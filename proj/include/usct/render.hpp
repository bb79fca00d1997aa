// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_RENDER_HPP
#define USCT_RENDER_HPP

#include <filesystem>

#include "usct/grid.hpp"

namespace usct {

/// Writes an 8-bit binary PGM with a linear grayscale map from [lo, hi];
/// values outside the range are clamped. A sidecar `<path>.txt` records the
/// mapped range.
void write_pgm(const RealField2D& f, const std::filesystem::path& path);
void write_pgm(const RealField2D& f, const std::filesystem::path& path,
               double lo, double hi);

/// Complex fields render as two images: `<stem>_mag.pgm` and `<stem>_real.pgm`.
void write_complex_pgm(const ComplexField2D& f, const std::filesystem::path& stem);

}  // namespace usct

#endif
