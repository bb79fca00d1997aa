// SPDX-License-Identifier: Apache-2.0
#include "usct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usct {

namespace {

template <class T>
double rrmse_impl(const std::vector<T>& u_hat, const std::vector<T>& u) {
    if (u_hat.size() != u.size())
        throw std::invalid_argument("rrmse: shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num += std::norm(Complex(u_hat[i]) - Complex(u[i]));
        den += std::norm(Complex(u[i]));
    }
    if (den == 0.0) throw std::invalid_argument("rrmse: zero-norm reference");
    return std::sqrt(num / den);
}

}  // namespace

double rrmse(const std::vector<Complex>& u_hat, const std::vector<Complex>& u) {
    return rrmse_impl(u_hat, u);
}

double rrmse(const std::vector<double>& u_hat, const std::vector<double>& u) {
    return rrmse_impl(u_hat, u);
}

double rrmse(const ComplexField2D& u_hat, const ComplexField2D& u) {
    return rrmse_impl(u_hat.values, u.values);
}

double rrmse(const RealField2D& u_hat, const RealField2D& u) {
    return rrmse_impl(u_hat.values, u.values);
}

double max_error(
    const std::vector<std::pair<ComplexField2D, ComplexField2D>>& samples) {
    if (samples.empty()) throw std::invalid_argument("max_error: empty sample list");
    double worst = 0.0;
    for (const auto& [u_hat, u] : samples)
        worst = std::max(worst, rrmse(u_hat, u));
    return worst;
}

double max_error(const std::vector<double>& per_sample_rrmse) {
    if (per_sample_rrmse.empty())
        throw std::invalid_argument("max_error: empty sample list");
    return *std::max_element(per_sample_rrmse.begin(), per_sample_rrmse.end());
}

double ssim(const RealField2D& x, const RealField2D& y, SsimRange range) {
    if (!(x.grid == y.grid)) throw std::invalid_argument("ssim: grid mismatch");
    const int nx = x.grid.nx, ny = x.grid.ny;
    constexpr int kWin = 11;
    constexpr double kSigma = 1.5;
    if (nx < kWin || ny < kWin)
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");

    double lo = y.values[0], hi = y.values[0];
    for (double v : y.values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (range == SsimRange::Joint) {
        for (double v : x.values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    }
    const double L = hi - lo;
    if (!(L > 0.0)) throw std::invalid_argument("ssim: zero dynamic range");
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);

    double w[kWin][kWin];
    double wsum = 0.0;
    for (int a = 0; a < kWin; ++a)
        for (int b = 0; b < kWin; ++b) {
            const double dx = a - (kWin - 1) / 2.0, dy = b - (kWin - 1) / 2.0;
            w[a][b] = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
            wsum += w[a][b];
        }
    for (int a = 0; a < kWin; ++a)
        for (int b = 0; b < kWin; ++b) w[a][b] /= wsum;

    double total = 0.0;
    std::size_t count = 0;
    for (int j = 0; j + kWin <= ny; ++j) {
        for (int i = 0; i + kWin <= nx; ++i) {
            double mx = 0.0, my = 0.0;
            for (int b = 0; b < kWin; ++b)
                for (int a = 0; a < kWin; ++a) {
                    mx += w[a][b] * x.at(i + a, j + b);
                    my += w[a][b] * y.at(i + a, j + b);
                }
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (int b = 0; b < kWin; ++b)
                for (int a = 0; a < kWin; ++a) {
                    const double ex = x.at(i + a, j + b) - mx;
                    const double ey = y.at(i + a, j + b) - my;
                    vx += w[a][b] * ex * ex;
                    vy += w[a][b] * ey * ey;
                    cov += w[a][b] * ex * ey;
                }
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double psnr(const RealField2D& x, const RealField2D& y) {
    if (!(x.grid == y.grid)) throw std::invalid_argument("psnr: grid mismatch");
    double lo = y.values[0], hi = y.values[0];
    for (double v : y.values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const double L = hi - lo;
    if (!(L > 0.0)) throw std::invalid_argument("psnr: zero dynamic range");
    double mse = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double e = x.values[i] - y.values[i];
        mse += e * e;
    }
    mse /= static_cast<double>(x.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(L / std::sqrt(mse));
}

}  // namespace usct
