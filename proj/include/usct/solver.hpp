// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_SOLVER_HPP
#define USCT_SOLVER_HPP

#include "usct/grid.hpp"
#include "usct/phantom.hpp"

namespace usct {

struct HelmholtzProblem {
    SoundSpeedMap c;
    double omega = 0.0;       // rad/s
    ComplexField2D source;    // s(x); the equation solved is (lap + k^2) u = -s
};

enum class K0Strategy { Midpoint, Background };

struct CBSConfig {
    int pad_width = 50;
    double epsilon_safety = 1.05;
    int max_iter = 2000;
    double tol = 1e-6;
    K0Strategy k0_strategy = K0Strategy::Midpoint;
};

struct SolveReport {
    int iterations = 0;
    double final_update = 0.0;
    double residual = 0.0;
    bool converged = false;
    double k0 = 0.0;
    double epsilon = 0.0;
    bool epsilon_fallback = false;
};

struct ScatteringPotential {
    ComplexField2D v;          // V(x) = k^2(x) - k0^2 - i eps, padded grid
    std::vector<Complex> k2;   // k^2(x) including the absorbing ramp
    double k0 = 0.0;
    double epsilon = 0.0;
    bool epsilon_fallback = false;
    int pad_width = 0;
};

struct SolveResult {
    ComplexField2D u;         // cropped to the problem grid
    ComplexField2D u_padded;  // full padded-grid iterate
    SolveReport report;
};

ScatteringPotential build_scattering_potential(const HelmholtzProblem& p,
                                               const CBSConfig& cfg);

SolveResult solve_helmholtz(const HelmholtzProblem& p, const CBSConfig& cfg);

/// Relative residual ||S_c u + s||_2 / ||s||_2 on the padded grid, with S_c
/// evaluated directly (spectral Laplacian plus k^2(x)), independent of the
/// CBS iteration. `u_padded` must live on the padded grid of `cfg`.
double helmholtz_residual(const HelmholtzProblem& p, const ComplexField2D& u_padded,
                          const CBSConfig& cfg);

}  // namespace usct

#endif
