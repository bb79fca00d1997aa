// SPDX-License-Identifier: Apache-2.0
#include "usct/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "usct/spectral.hpp"

namespace usct {

std::string to_string(BreastType t) {
    switch (t) {
        case BreastType::HET: return "HET";
        case BreastType::FIB: return "FIB";
        case BreastType::FAT: return "FAT";
        case BreastType::EXD: return "EXD";
    }
    return "?";
}

BreastType breast_type_from_string(const std::string& s) {
    if (s == "HET") return BreastType::HET;
    if (s == "FIB") return BreastType::FIB;
    if (s == "FAT") return BreastType::FAT;
    if (s == "EXD") return BreastType::EXD;
    throw std::invalid_argument("unknown breast type '" + s +
                                "' (valid: HET, FIB, FAT, EXD)");
}

namespace {

double truncated_normal(std::mt19937_64& rng, double mu, double sigma,
                        double lo, double hi) {
    std::normal_distribution<double> dist(mu, sigma);
    for (;;) {
        const double x = dist(rng);
        if (x >= lo && x <= hi) return x;
    }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Zero-mean smooth field: white noise low-passed by a Gaussian spectral
/// filter of spatial width sigma (meters).
RealField2D smooth_noise(const Grid2D& g, double sigma, std::mt19937_64& rng) {
    std::vector<Complex> w(g.size());
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& z : w) z = Complex(n01(rng), 0.0);
    Fft2D fft(g.nx, g.ny);
    std::vector<Complex> spec(g.size());
    fft.forward(w.data(), spec.data());
    for (int j = 0; j < g.ny; ++j) {
        const double py = spectral_freq(j, g.ny, g.h);
        for (int i = 0; i < g.nx; ++i) {
            const double px = spectral_freq(i, g.nx, g.h);
            const double p2 = px * px + py * py;
            spec[static_cast<std::size_t>(j) * g.nx + i] *=
                std::exp(-0.5 * p2 * sigma * sigma);
        }
    }
    fft.inverse(spec.data(), w.data());
    RealField2D out(g);
    for (std::size_t i = 0; i < w.size(); ++i) out.values[i] = w[i].real();
    return out;
}

struct Outline {
    double rx_pos, rx_neg, ry_pos, ry_neg;  // quadrant radii, meters
    double wobble_cos[4], wobble_sin[4];    // harmonics 2..5
    double roughness;

    double radius(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        const double rx = c >= 0.0 ? rx_pos : rx_neg;
        const double ry = s >= 0.0 ? ry_pos : ry_neg;
        const double base = 1.0 / std::sqrt((c / rx) * (c / rx) + (s / ry) * (s / ry));
        double w = 0.0;
        for (int n = 0; n < 4; ++n)
            w += wobble_cos[n] * std::cos((n + 2) * theta) +
                 wobble_sin[n] * std::sin((n + 2) * theta);
        return base * (1.0 + roughness * w);
    }
};

}  // namespace

PhantomParams sample_phantom_params(BreastType type, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PhantomParams p;
    p.seed = seed;
    p.a1b = truncated_normal(rng, 5.0, 2.0, 3.5, 7.5);
    p.a1t = truncated_normal(rng, 5.0, 2.0, 3.5, 7.5);
    p.a2l = truncated_normal(rng, 5.0, 2.0, 3.5, 7.5);
    p.a2r = truncated_normal(rng, 5.0, 2.0, 3.5, 7.5);
    p.a3 = p.a1b * truncated_normal(rng, 1.4, 0.1, 1.0, 1.5);
    switch (type) {
        case BreastType::EXD: p.target_fat_frac = uniform(rng, 0.0, 0.25); break;
        case BreastType::HET: p.target_fat_frac = uniform(rng, 0.25, 0.5); break;
        case BreastType::FIB: p.target_fat_frac = uniform(rng, 0.5, 0.75); break;
        case BreastType::FAT: p.target_fat_frac = uniform(rng, 0.75, 1.0); break;
    }
    p.back_fat_buffer_frac = uniform(rng, 0.0, 0.01);
    p.skin_scale = uniform(rng, 200.0, 400.0);
    p.skin_scale_nipple_dir = uniform(rng, 5.0, 20.0);
    p.skin_strength = uniform(rng, 0.5, 2.0);
    p.global_scale = truncated_normal(rng, 0.85, 0.1, 0.65, 1.0);
    return p;
}

TissueMap generate_tissue_map(const PhantomParams& params, const Grid2D& grid,
                              double roi_radius) {
    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);

    const double cm = 0.01 * params.global_scale;
    Outline outline;
    // Nipple direction is +x; a3 stretches the outline outward along it.
    outline.rx_pos = params.a2r * std::sqrt(params.a3 / params.a1b) * cm;
    outline.rx_neg = params.a2l * cm;
    outline.ry_pos = params.a1t * cm;
    outline.ry_neg = params.a1b * cm;
    outline.roughness = 0.004 * params.skin_strength;
    {
        std::normal_distribution<double> n01(0.0, 1.0);
        for (int n = 0; n < 4; ++n) {
            outline.wobble_cos[n] = n01(rng);
            outline.wobble_sin[n] = n01(rng);
        }
    }

    double max_r = std::max({outline.rx_pos, outline.rx_neg, outline.ry_pos,
                             outline.ry_neg});
    max_r *= 1.0 + 8.0 * outline.roughness;
    if (roi_radius > 0.0 && max_r > 0.95 * roi_radius) {
        const double shrink = 0.95 * roi_radius / max_r;
        outline.rx_pos *= shrink;
        outline.rx_neg *= shrink;
        outline.ry_pos *= shrink;
        outline.ry_neg *= shrink;
        max_r *= shrink;
    }
    const double half_x = 0.5 * grid.extent_x() - 2.0 * grid.h;
    const double half_y = 0.5 * grid.extent_y() - 2.0 * grid.h;
    if (max_r > half_x || max_r > half_y) {
        std::ostringstream msg;
        msg << "generate_tissue_map: outline radius " << max_r
            << " m exceeds grid half-extent (" << half_x << ", " << half_y
            << ") m";
        throw std::invalid_argument(msg.str());
    }

    TissueMap t{grid, std::vector<Tissue>(grid.size(), Tissue::WATER)};

    const double skin_base = 1.5e-3 + (params.skin_scale - 300.0) / 200.0 * 1.0e-3;
    const double skin_nipple = (params.skin_scale_nipple_dir - 12.5) / 15.0 * 0.3e-3;

    std::vector<std::size_t> interior;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const double d = std::hypot(x, y);
            if (d == 0.0) {
                t.at(i, j) = Tissue::GLAND;
                interior.push_back(static_cast<std::size_t>(j) * grid.nx + i);
                continue;
            }
            const double theta = std::atan2(y, x);
            const double r = outline.radius(theta);
            if (d > r) continue;
            const double thickness =
                skin_base + std::max(0.0, std::cos(theta)) * skin_nipple;
            if (d > r - thickness) {
                t.at(i, j) = Tissue::SKIN;
            } else if (x < -0.85 * outline.rx_neg) {
                t.at(i, j) = Tissue::MUSCLE;
            } else {
                t.at(i, j) = Tissue::GLAND;
                interior.push_back(static_cast<std::size_t>(j) * grid.nx + i);
            }
        }
    }

    if (!interior.empty()) {
        // FAT/GLAND split: threshold a smoothed noise field at the quantile
        // matching target_fat_frac (exact to one cell).
        RealField2D noise = smooth_noise(grid, 3.0e-3, rng);
        std::vector<double> vals(interior.size());
        for (std::size_t k = 0; k < interior.size(); ++k)
            vals[k] = noise.values[interior[k]];
        const std::size_t nfat = static_cast<std::size_t>(
            std::llround(params.target_fat_frac * static_cast<double>(vals.size())));
        if (nfat > 0) {
            std::vector<double> sorted = vals;
            const std::size_t kth = std::min(nfat, sorted.size()) - 1;
            std::nth_element(sorted.begin(), sorted.begin() + kth, sorted.end());
            const double tau = sorted[kth];
            for (std::size_t k = 0; k < interior.size(); ++k)
                if (vals[k] <= tau) t.labels[interior[k]] = Tissue::FAT;
        }
        // Small fat buffer at the nipple tip.
        const double x_tip = outline.rx_pos * (1.0 - 2.0 * params.back_fat_buffer_frac);
        for (std::size_t idx : interior) {
            const int i = static_cast<int>(idx % grid.nx);
            if (grid.x(i) > x_tip) t.labels[idx] = Tissue::FAT;
        }
    }
    return t;
}

double interior_fat_fraction(const TissueMap& t) {
    std::size_t fat = 0, gland = 0;
    for (Tissue label : t.labels) {
        if (label == Tissue::FAT) ++fat;
        if (label == Tissue::GLAND) ++gland;
    }
    const std::size_t total = fat + gland;
    return total == 0 ? 0.0 : static_cast<double>(fat) / total;
}

SoundSpeedMap assign_sound_speed(const TissueMap& t, std::uint64_t seed,
                                 double c0, double roi_radius) {
    const Grid2D& g = t.grid;
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
    RealField2D pert = smooth_noise(g, 2.0 * g.h, rng);
    double max_abs = 0.0;
    for (double v : pert.values) max_abs = std::max(max_abs, std::abs(v));
    const double scale = max_abs > 0.0 ? 0.01 / max_abs : 0.0;

    SoundSpeedMap map{RealField2D(g), c0, roi_radius, {0.0, 0.0}};
    for (std::size_t i = 0; i < g.size(); ++i) {
        double base;
        switch (t.labels[i]) {
            case Tissue::WATER: map.c.values[i] = c0; continue;
            case Tissue::SKIN: base = kSpeedSkin; break;
            case Tissue::FAT: base = kSpeedFat; break;
            case Tissue::GLAND: base = kSpeedGland; break;
            case Tissue::MUSCLE: base = kSpeedMuscle; break;
            default: base = c0; break;
        }
        map.c.values[i] = base * (1.0 + scale * pert.values[i]);
    }
    return map;
}

SoundSpeedMap generate_breast_phantom(BreastType type, const Grid2D& grid,
                                      std::uint64_t seed, double roi_radius) {
    PhantomParams params = sample_phantom_params(type, seed);
    TissueMap t = generate_tissue_map(params, grid, roi_radius);
    return assign_sound_speed(t, seed, 1500.0, roi_radius);
}

SoundSpeedMap generate_grf_phantom(const Grid2D& grid, double correlation_length,
                                   double contrast, double c0, std::uint64_t seed,
                                   double roi_radius) {
    if (!(correlation_length > 0.0))
        throw std::invalid_argument("generate_grf_phantom: correlation_length must be > 0");
    if (contrast < 0.0 || contrast >= 0.2)
        throw std::invalid_argument("generate_grf_phantom: contrast must be in [0, 0.2)");
    if (roi_radius <= 0.0)
        roi_radius = 0.45 * std::min(grid.extent_x(), grid.extent_y());

    std::mt19937_64 rng(seed ^ 0xa0761d6478bd642fULL);
    std::vector<Complex> w(grid.size());
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& z : w) z = Complex(n01(rng), 0.0);

    Fft2D fft(grid.nx, grid.ny);
    std::vector<Complex> spec(grid.size());
    fft.forward(w.data(), spec.data());
    // Spectral density exp(-|p|^2 l^2 / 2) gives Gaussian covariance
    // exp(-r^2 / (2 l^2)).
    const double l2 = correlation_length * correlation_length;
    for (int j = 0; j < grid.ny; ++j) {
        const double py = spectral_freq(j, grid.ny, grid.h);
        for (int i = 0; i < grid.nx; ++i) {
            const double px = spectral_freq(i, grid.nx, grid.h);
            const double p2 = px * px + py * py;
            spec[static_cast<std::size_t>(j) * grid.nx + i] *=
                std::sqrt(std::exp(-0.5 * p2 * l2));
        }
    }
    spec[0] = 0.0;  // exact zero mean
    fft.inverse(spec.data(), w.data());

    double var = 0.0;
    for (const Complex& z : w) var += z.real() * z.real();
    var /= static_cast<double>(grid.size());
    const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;

    SoundSpeedMap map{RealField2D(grid), c0, roi_radius, {0.0, 0.0}};
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * grid.nx + i;
            const double d = std::hypot(grid.x(i), grid.y(j));
            if (d >= roi_radius) {
                map.c.values[idx] = c0;
            } else {
                const double g = w[idx].real() * inv_std;
                map.c.values[idx] =
                    std::clamp(c0 * (1.0 + contrast * g), 1300.0, 1700.0);
            }
        }
    }
    return map;
}

}  // namespace usct
