// SPDX-License-Identifier: Apache-2.0
#include "usct/fwi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "usct/parallel.hpp"

namespace usct {

namespace {

bool in_roi(const SoundSpeedMap& c, int i, int j) {
    const double dx = c.c.grid.x(i) - c.roi_center.x;
    const double dy = c.c.grid.y(j) - c.roi_center.y;
    return std::hypot(dx, dy) < c.roi_radius;
}

std::vector<int> source_list(const MeasurementTensor& y_obs,
                             const InversionConfig& cfg) {
    if (cfg.source_subset) {
        for (int k : *cfg.source_subset)
            if (k < 0 || k >= y_obs.m)
                throw std::invalid_argument("source subset index out of range");
        return *cfg.source_subset;
    }
    std::vector<int> all(y_obs.m);
    for (int k = 0; k < y_obs.m; ++k) all[k] = k;
    return all;
}

int find_frequency_index(const MeasurementTensor& y_obs, double omega) {
    for (int j = 0; j < y_obs.n_freq(); ++j)
        if (std::abs(y_obs.frequencies[j] - omega) <= 1e-9 * omega) return j;
    std::ostringstream msg;
    msg << "frequency " << omega << " rad/s not present in the measurement tensor";
    throw std::invalid_argument(msg.str());
}

/// One forward solve per source at a single frequency, with receiver
/// readings and the resulting misfit; kept so the line search's winning
/// candidate can seed the next gradient without repeating forward solves.
struct ForwardSweep {
    std::vector<ComplexField2D> u;
    std::vector<std::vector<Complex>> recv;
    double misfit = 0.0;
};

ForwardSweep forward_sweep(const SoundSpeedMap& c, const MeasurementTensor& y_obs,
                           int freq_index, const InversionConfig& cfg,
                           const std::vector<int>& sources,
                           const std::vector<Point>& pts) {
    ForwardSweep sweep;
    sweep.u.resize(sources.size());
    sweep.recv.resize(sources.size());
    std::vector<double> per_source(sources.size(), 0.0);
    parallel_for(sources.size(), cfg.threads, [&](std::size_t t) {
        const int k = sources[t];
        HelmholtzProblem prob{c, y_obs.frequencies[freq_index],
                              make_point_source(c.c.grid, pts[k], cfg.source_value,
                                                cfg.injection)};
        SolveResult sol = solve_helmholtz(prob, cfg.cbs);
        if (!sol.report.converged) {
            std::ostringstream msg;
            msg << "forward solve did not converge (source " << k
                << ", frequency index " << freq_index << ")";
            throw std::runtime_error(msg.str());
        }
        sweep.u[t] = std::move(sol.u);
        sweep.recv[t] = record_receivers(sweep.u[t], y_obs.array);
        double acc = 0.0;
        for (int l = 0; l < y_obs.m; ++l)
            acc += std::norm(sweep.recv[t][l] - y_obs.at(l, k, freq_index));
        per_source[t] = acc;
    });
    for (double v : per_source) sweep.misfit += v;
    return sweep;
}

/// Adjoint solves against an existing forward sweep; exact discrete adjoint
/// of the sampled misfit (see compute_total_gradient).
GradientField gradient_from_sweep(const SoundSpeedMap& c,
                                  const MeasurementTensor& y_obs, int freq_index,
                                  const InversionConfig& cfg,
                                  const std::vector<int>& sources,
                                  const ForwardSweep& sweep) {
    const Grid2D& grid = c.c.grid;
    const double omega = y_obs.frequencies[freq_index];
    const double h2 = grid.h * grid.h;
    std::vector<GradientField> partial(sources.size());
    parallel_for(sources.size(), cfg.threads, [&](std::size_t t) {
        const int k = sources[t];
        std::vector<Complex> y_col(y_obs.m);
        for (int l = 0; l < y_obs.m; ++l) y_col[l] = y_obs.at(l, k, freq_index);
        ComplexField2D res = adjoint_source(sweep.recv[t], y_col, y_obs.array,
                                            grid, cfg.injection);
        ComplexField2D s_adj(grid);
        for (std::size_t n = 0; n < s_adj.values.size(); ++n)
            s_adj.values[n] = -h2 * std::conj(res.values[n]);
        HelmholtzProblem adj{c, omega, s_adj};
        SolveResult sol_w = solve_helmholtz(adj, cfg.cbs);
        if (!sol_w.report.converged) {
            std::ostringstream msg;
            msg << "adjoint solve did not converge (source " << k
                << ", frequency index " << freq_index << ")";
            throw std::runtime_error(msg.str());
        }
        ComplexField2D lambda(grid);
        for (std::size_t n = 0; n < lambda.values.size(); ++n)
            lambda.values[n] = -2.0 * std::conj(sol_w.u.values[n]);
        partial[t] = gradient_single(c, omega, sweep.u[t], lambda);
    });
    GradientField total{grid, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t t = 0; t < sources.size(); ++t)
        for (std::size_t n = 0; n < total.g.size(); ++n)
            total.g[n] += partial[t].g[n];
    return total;
}

}  // namespace

double data_misfit(const MeasurementTensor& y_obs, const MeasurementTensor& y_pred) {
    if (y_obs.m != y_pred.m || y_obs.n_freq() != y_pred.n_freq() ||
        y_obs.y.size() != y_pred.y.size())
        throw std::invalid_argument("data_misfit: tensor shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < y_obs.y.size(); ++i)
        total += std::norm(y_obs.y[i] - y_pred.y[i]);
    return total;
}

ComplexField2D adjoint_source(const std::vector<Complex>& u_at_receivers,
                              const std::vector<Complex>& y_obs_column,
                              const RingArray& a, const Grid2D& grid,
                              SourceInjection mode) {
    if (u_at_receivers.size() != y_obs_column.size() ||
        static_cast<int>(u_at_receivers.size()) != a.m)
        throw std::invalid_argument("adjoint_source: vector length mismatch");
    std::vector<Point> pts = ring_positions(a);
    ComplexField2D field(grid);
    for (int i = 0; i < a.m; ++i) {
        const Complex r = u_at_receivers[i] - y_obs_column[i];
        if (r == Complex(0.0)) continue;
        ComplexField2D d = make_point_source(grid, pts[i], r, mode);
        for (std::size_t n = 0; n < field.values.size(); ++n)
            field.values[n] += d.values[n];
    }
    return field;
}

GradientField gradient_single(const SoundSpeedMap& c, double omega,
                              const ComplexField2D& u, const ComplexField2D& lambda) {
    if (!(u.grid == lambda.grid) || !(u.grid == c.c.grid))
        throw std::invalid_argument("gradient_single: grid mismatch");
    const Grid2D& g = c.c.grid;
    GradientField out{g, std::vector<double>(g.size(), 0.0)};
    const double w2 = omega * omega;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!in_roi(c, i, j)) continue;
            const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
            const double c3 = c.c.values[idx] * c.c.values[idx] * c.c.values[idx];
            out.g[idx] =
                (-2.0 * w2 / c3) *
                std::real(std::conj(lambda.values[idx]) * u.values[idx]);
        }
    }
    return out;
}

std::pair<GradientField, double> compute_total_gradient(
    const SoundSpeedMap& c, const MeasurementTensor& y_obs, int freq_index,
    const InversionConfig& cfg) {
    if (freq_index < 0 || freq_index >= y_obs.n_freq())
        throw std::invalid_argument("compute_total_gradient: bad frequency index");
    std::vector<int> sources = source_list(y_obs, cfg);
    std::vector<Point> pts = ring_positions(y_obs.array);

    // Exact discrete adjoint of the sampled misfit: solve S w = R^T conj(r)
    // with the same operator (S is complex-symmetric), then fold the
    // scaling into the lambda passed to gradient_single.
    ForwardSweep sweep = forward_sweep(c, y_obs, freq_index, cfg, sources, pts);
    GradientField g = gradient_from_sweep(c, y_obs, freq_index, cfg, sources, sweep);
    return {std::move(g), sweep.misfit};
}

namespace {

SoundSpeedMap take_step(const SoundSpeedMap& c, const GradientField& g,
                        double step, const InversionConfig& cfg) {
    SoundSpeedMap out = c;
    const Grid2D& grid = c.c.grid;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * grid.nx + i;
            if (in_roi(c, i, j)) {
                out.c.values[idx] = std::clamp(c.c.values[idx] - step * g.g[idx],
                                               cfg.min_speed, cfg.max_speed);
            } else {
                out.c.values[idx] = c.c0;
            }
        }
    }
    return out;
}

}  // namespace

InvertResult invert(const MeasurementTensor& y_obs, const SoundSpeedMap& c_init,
                    const InversionConfig& cfg) {
    if (cfg.frequency_schedule.empty())
        throw std::invalid_argument("invert: empty frequency schedule");
    if (!std::is_sorted(cfg.frequency_schedule.begin(), cfg.frequency_schedule.end()))
        throw std::invalid_argument("invert: frequency schedule must be ascending");
    if (!(cfg.min_speed < cfg.max_speed))
        throw std::invalid_argument("invert: min_speed must be below max_speed");

    std::vector<int> sources = source_list(y_obs, cfg);
    std::vector<Point> pts = ring_positions(y_obs.array);

    InvertResult result;
    result.c = c_init;

    for (double omega : cfg.frequency_schedule) {
        const int j = find_frequency_index(y_obs, omega);
        if (cfg.iters_per_frequency <= 0) continue;

        ForwardSweep sweep = forward_sweep(result.c, y_obs, j, cfg, sources, pts);
        GradientField g =
            gradient_from_sweep(result.c, y_obs, j, cfg, sources, sweep);
        double g_max = 0.0, g_norm2 = 0.0;
        for (double v : g.g) {
            g_max = std::max(g_max, std::abs(v));
            g_norm2 += v * v;
        }
        if (g_max == 0.0) {
            for (int it = 1; it <= cfg.iters_per_frequency; ++it)
                result.trace.push_back({omega, it, sweep.misfit, 0.0, true, false});
            continue;
        }
        // First update capped at 10 m/s (times initial_step).
        const double alpha0 = cfg.initial_step * 10.0 / g_max;
        double alpha = alpha0;

        for (int it = 1; it <= cfg.iters_per_frequency; ++it) {
            if (cfg.step_rule == StepRule::FixedRelative) {
                result.c = take_step(result.c, g, alpha0, cfg);
                sweep = forward_sweep(result.c, y_obs, j, cfg, sources, pts);
                result.trace.push_back({omega, it, sweep.misfit, alpha0, true, false});
                if (it < cfg.iters_per_frequency)
                    g = gradient_from_sweep(result.c, y_obs, j, cfg, sources, sweep);
            } else {
                bool accepted = false;
                while (!accepted) {
                    if (alpha < 1e-6 * alpha0) {
                        result.trace.push_back(
                            {omega, it, sweep.misfit, alpha, false, true});
                        break;
                    }
                    SoundSpeedMap candidate = take_step(result.c, g, alpha, cfg);
                    // The winning candidate's forward fields are kept and
                    // reused by the next gradient evaluation.
                    ForwardSweep trial =
                        forward_sweep(candidate, y_obs, j, cfg, sources, pts);
                    if (trial.misfit <= sweep.misfit - 1e-4 * alpha * g_norm2) {
                        result.c = std::move(candidate);
                        sweep = std::move(trial);
                        result.trace.push_back(
                            {omega, it, sweep.misfit, alpha, true, false});
                        accepted = true;
                    } else {
                        alpha *= 0.5;
                    }
                }
                if (!accepted) break;  // step underflow ends the block
                if (it < cfg.iters_per_frequency) {
                    g = gradient_from_sweep(result.c, y_obs, j, cfg, sources, sweep);
                    g_max = 0.0;
                    g_norm2 = 0.0;
                    for (double v : g.g) {
                        g_max = std::max(g_max, std::abs(v));
                        g_norm2 += v * v;
                    }
                    if (g_max == 0.0) break;
                    alpha = std::min(2.0 * alpha, alpha0);
                }
            }
        }
    }
    return result;
}

}  // namespace usct
