// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_ACQUISITION_HPP
#define USCT_ACQUISITION_HPP

#include "usct/grid.hpp"
#include "usct/solver.hpp"

namespace usct {

// Table-matched acquisition defaults.
inline constexpr int kDefaultTransducers = 256;
inline constexpr double kDefaultRingDiameter = 0.220;  // m
inline constexpr Complex kDefaultSourceValue{0.195, -0.0275};

struct RingArray {
    int m = kDefaultTransducers;
    double diameter = kDefaultRingDiameter;
    Point center;
    double theta0 = 0.0;
};

std::vector<Point> ring_positions(const RingArray& a);

/// Default acquisition frequencies: 300-650 kHz in 50 kHz steps, as angular
/// frequencies (rad/s).
std::vector<double> default_angular_frequencies();

enum class SourceInjection { NearestCell, Bilinear };

/// Discrete delta at the cell nearest `position`, value amplitude/h^2, so the
/// field integrates to `amplitude`.
ComplexField2D make_point_source(const Grid2D& grid, Point position,
                                 Complex amplitude);

/// Delta spread over the four surrounding cells with bilinear weights (the
/// adjoint of bilinear receiver sampling); also integrates to `amplitude`.
ComplexField2D make_point_source_bilinear(const Grid2D& grid, Point position,
                                          Complex amplitude);

ComplexField2D make_point_source(const Grid2D& grid, Point position,
                                 Complex amplitude, SourceInjection mode);

Complex sample_bilinear(const ComplexField2D& u, Point position);

std::vector<Complex> record_receivers(const ComplexField2D& u, const RingArray& a);

struct MeasurementTensor {
    int m = 0;                        // transducers
    std::vector<double> frequencies;  // angular, rad/s
    RingArray array;
    std::vector<Complex> y;  // [receiver + m*(source + m*freq)]

    int n_freq() const { return static_cast<int>(frequencies.size()); }
    Complex& at(int receiver, int source, int freq) {
        return y[static_cast<std::size_t>(freq) * m * m +
                 static_cast<std::size_t>(source) * m + receiver];
    }
    Complex at(int receiver, int source, int freq) const {
        return y[static_cast<std::size_t>(freq) * m * m +
                 static_cast<std::size_t>(source) * m + receiver];
    }
};

struct SolveFailure {
    int source = 0;
    int freq_index = 0;
    SolveReport report;
};

struct SimulationResult {
    MeasurementTensor tensor;
    std::vector<SolveFailure> failures;
    std::vector<ComplexField2D> fields;  // per (source, freq) when requested
};

struct SimulateOptions {
    SourceInjection injection = SourceInjection::Bilinear;
    Complex source_value = kDefaultSourceValue;
    int threads = 1;
    bool keep_fields = false;
    bool throw_on_failure = true;
};

SimulationResult simulate_measurements(const SoundSpeedMap& c,
                                       const std::vector<double>& angular_frequencies,
                                       const RingArray& a, const CBSConfig& cfg,
                                       const SimulateOptions& opt = {});

}  // namespace usct

#endif
