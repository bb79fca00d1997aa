// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_METRICS_HPP
#define USCT_METRICS_HPP

#include <optional>

#include "usct/grid.hpp"

namespace usct {

struct MetricReport {
    std::optional<double> rrmse;
    std::vector<double> per_sample_rrmse;
    std::optional<double> max_error;
    std::optional<double> ssim;
    std::optional<double> psnr;
};

/// ||u_hat - u||_2 / ||u||_2.
double rrmse(const std::vector<Complex>& u_hat, const std::vector<Complex>& u);
double rrmse(const std::vector<double>& u_hat, const std::vector<double>& u);
double rrmse(const ComplexField2D& u_hat, const ComplexField2D& u);
double rrmse(const RealField2D& u_hat, const RealField2D& u);

double max_error(const std::vector<std::pair<ComplexField2D, ComplexField2D>>& samples);
double max_error(const std::vector<double>& per_sample_rrmse);

enum class SsimRange { GroundTruth, Joint };

/// Mean local SSIM, 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03.
/// Dynamic range L = max - min of y (GroundTruth) or of both images (Joint).
double ssim(const RealField2D& x, const RealField2D& y,
            SsimRange range = SsimRange::GroundTruth);

/// 20*log10(L / RMSE), L = max - min of y. Identical images -> +infinity.
double psnr(const RealField2D& x, const RealField2D& y);

}  // namespace usct

#endif
