// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_FWI_HPP
#define USCT_FWI_HPP

#include <optional>

#include "usct/acquisition.hpp"

namespace usct {

enum class StepRule { FixedRelative, Backtracking };

struct InversionConfig {
    std::vector<double> frequency_schedule;  // angular, ascending
    int iters_per_frequency = 30;
    StepRule step_rule = StepRule::Backtracking;
    double initial_step = 1.0;  // multiplier on the 10 m/s first-update scale
    double min_speed = 1350.0;
    double max_speed = 1650.0;
    std::optional<std::vector<int>> source_subset;
    CBSConfig cbs;
    SourceInjection injection = SourceInjection::Bilinear;
    Complex source_value = kDefaultSourceValue;
    int threads = 1;
};

struct GradientField {
    Grid2D grid;
    std::vector<double> g;
};

struct TraceRow {
    double omega = 0.0;
    int iteration = 0;
    double misfit = 0.0;
    double step = 0.0;
    bool accepted = true;
    bool block_terminated = false;  // backtracking step underflow
};

struct InvertResult {
    SoundSpeedMap c;
    std::vector<TraceRow> trace;
};

/// Sum over sources and frequencies of squared receiver-residual norms.
double data_misfit(const MeasurementTensor& y_obs, const MeasurementTensor& y_pred);

/// Residual field of Eq-7 form: sum_i (u(x_i) - y_i) * delta_h(x - x_i),
/// residuals injected with the given scheme.
ComplexField2D adjoint_source(const std::vector<Complex>& u_at_receivers,
                              const std::vector<Complex>& y_obs_column,
                              const RingArray& a, const Grid2D& grid,
                              SourceInjection mode = SourceInjection::Bilinear);

/// g(x) = Re[-2 omega^2 conj(lambda) u / c^3] inside the ROI, zero outside.
GradientField gradient_single(const SoundSpeedMap& c, double omega,
                              const ComplexField2D& u, const ComplexField2D& lambda);

std::pair<GradientField, double> compute_total_gradient(
    const SoundSpeedMap& c, const MeasurementTensor& y_obs, int freq_index,
    const InversionConfig& cfg);

InvertResult invert(const MeasurementTensor& y_obs, const SoundSpeedMap& c_init,
                    const InversionConfig& cfg);

}  // namespace usct

#endif
