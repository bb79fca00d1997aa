// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_PHANTOM_HPP
#define USCT_PHANTOM_HPP

#include <cstdint>
#include <string>

#include "usct/grid.hpp"

namespace usct {

enum class BreastType { HET, FIB, FAT, EXD };

std::string to_string(BreastType t);
BreastType breast_type_from_string(const std::string& s);

enum class Tissue : std::uint8_t { WATER = 0, SKIN, FAT, GLAND, MUSCLE };

struct PhantomParams {
    // Quarter-ellipse scales, cm.
    double a1b = 0.0;  // bottom
    double a1t = 0.0;  // top
    double a2l = 0.0;  // left
    double a2r = 0.0;  // right
    double a3 = 0.0;   // outward
    double target_fat_frac = 0.0;
    double back_fat_buffer_frac = 0.0;
    double skin_scale = 0.0;
    double skin_scale_nipple_dir = 0.0;
    double skin_strength = 0.0;
    double global_scale = 1.0;
    std::uint64_t seed = 0;
};

struct TissueMap {
    Grid2D grid;
    std::vector<Tissue> labels;

    Tissue& at(int i, int j) { return labels[static_cast<std::size_t>(j) * grid.nx + i]; }
    Tissue at(int i, int j) const {
        return labels[static_cast<std::size_t>(j) * grid.nx + i];
    }
};

/// Sound speed in m/s on the imaging grid. c == c0 outside the circular
/// region of interest centered at roi_center with radius roi_radius.
struct SoundSpeedMap {
    RealField2D c;
    double c0 = 1500.0;
    double roi_radius = 0.110;
    Point roi_center;
};

// Base tissue speeds, m/s.
inline constexpr double kSpeedWater = 1500.0;
inline constexpr double kSpeedFat = 1440.0;
inline constexpr double kSpeedGland = 1560.0;
inline constexpr double kSpeedSkin = 1640.0;
inline constexpr double kSpeedMuscle = 1580.0;

PhantomParams sample_phantom_params(BreastType type, std::uint64_t seed);

TissueMap generate_tissue_map(const PhantomParams& params, const Grid2D& grid,
                              double roi_radius = 0.110);

SoundSpeedMap assign_sound_speed(const TissueMap& t, std::uint64_t seed,
                                 double c0 = 1500.0, double roi_radius = 0.110);

/// Convenience: params + tissue map + speeds in one call.
SoundSpeedMap generate_breast_phantom(BreastType type, const Grid2D& grid,
                                      std::uint64_t seed,
                                      double roi_radius = 0.110);

SoundSpeedMap generate_grf_phantom(const Grid2D& grid, double correlation_length,
                                   double contrast, double c0, std::uint64_t seed,
                                   double roi_radius = 0.0);

/// Fat area fraction of the interior (FAT vs FAT+GLAND cells).
double interior_fat_fraction(const TissueMap& t);

}  // namespace usct

#endif
