// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "usct/dataset_io.hpp"
#include "usct/fwi.hpp"
#include "usct/metrics.hpp"
#include "usct/parallel.hpp"

using namespace usct;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Criterion {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --- 1. homogeneous-water field vs analytic outgoing cylindrical wave -------
Criterion criterion_green() {
    Criterion c;
    const double c0 = 1500.0, freq = 300e3;
    const double omega = kTwoPi * freq, k0 = omega / c0, lambda = c0 / freq;

    Grid2D g = make_centered_grid(256, 256, 0.5e-3);
    SoundSpeedMap map{RealField2D(g, c0), c0, 0.110, {0.0, 0.0}};
    const Point src{g.x(128), g.y(128)};
    const Complex amp = kDefaultSourceValue;

    CBSConfig cfg;  // pad 50, tol 1e-6
    cfg.k0_strategy = K0Strategy::Background;

    const auto t0 = std::chrono::steady_clock::now();
    SolveResult sol = solve_helmholtz({map, omega, make_point_source(g, src, amp)},
                                      cfg);
    const double elapsed = seconds_since(t0);

    const Complex I(0.0, 1.0);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r = std::hypot(g.x(i) - src.x, g.y(j) - src.y);
            if (r < 3.0 * lambda || r > 8.0 * lambda) continue;
            const Complex h0(std::cyl_bessel_j(0, k0 * r),
                             std::cyl_neumann(0, k0 * r));
            const Complex ana = amp * (I / 4.0) * h0;
            num += std::norm(sol.u.at(i, j) - ana);
            den += std::norm(ana);
        }
    const double rel = std::sqrt(num / den);
    c.require(sol.report.converged, "solver did not converge");
    c.require(rel <= 0.02, "annulus error " + fmt(rel) + " > 0.02");
    c.require(elapsed < 10.0, "runtime " + fmt(elapsed) + "s >= 10s");
    c.detail << "rel L2 " << fmt(rel) << ", " << fmt(elapsed) << "s";
    return c;
}

// --- 2. residual certificate across phantoms and frequencies ----------------
Criterion criterion_residual() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    Grid2D g = make_centered_grid(240, 240, 1e-3);
    const BreastType types[] = {BreastType::HET, BreastType::FIB, BreastType::FAT,
                                BreastType::EXD};
    const double freqs[] = {300e3, 400e3, 500e3};

    std::vector<SoundSpeedMap> phantoms;
    for (int p = 0; p < 10; ++p)
        phantoms.push_back(
            generate_breast_phantom(types[p % 4], g, 1000 + p, 0.110));
    const Point src_pos = ring_positions({16, 0.220, {0.0, 0.0}, 0.0})[3];

    std::vector<double> residuals(30, 1.0);
    parallel_for(30, 4, [&](std::size_t task) {
        const SoundSpeedMap& map = phantoms[task % 10];
        const double omega = kTwoPi * freqs[task / 10];
        HelmholtzProblem p{map, omega,
                           make_point_source(g, src_pos, kDefaultSourceValue,
                                             SourceInjection::Bilinear)};
        CBSConfig cfg;  // tol 1e-6, max_iter 2000, pad 50
        SolveResult sol = solve_helmholtz(p, cfg);
        residuals[task] = sol.report.converged ? sol.report.residual : 1.0;
    });

    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    const double elapsed = seconds_since(t0);
    c.require(worst <= 1e-5, "worst residual " + fmt(worst) + " > 1e-5");
    c.require(elapsed < 300.0, "runtime " + fmt(elapsed) + "s >= 5min");
    c.detail << "worst residual " << fmt(worst) << " over 30 solves, "
             << fmt(elapsed) << "s";
    return c;
}

// --- 3. source/receiver reciprocity -----------------------------------------
Criterion criterion_reciprocity() {
    Criterion c;
    Grid2D g = make_centered_grid(240, 240, 1e-3);
    SoundSpeedMap map = generate_breast_phantom(BreastType::HET, g, 7, 0.110);
    RingArray ring{16, 0.220, {0.0, 0.0}, 0.0};
    CBSConfig cfg;
    SimulateOptions opt;
    opt.threads = 4;
    MeasurementTensor y =
        simulate_measurements(map, {kTwoPi * 400e3}, ring, cfg, opt).tensor;

    double ymax = 0.0;
    for (const Complex& z : y.y) ymax = std::max(ymax, std::abs(z));
    double worst = 0.0;
    for (int k = 0; k < 16; ++k)
        for (int l = 0; l < k; ++l)
            worst = std::max(worst, std::abs(y.at(l, k, 0) - y.at(k, l, 0)));
    c.require(worst <= 1e-3 * ymax,
              "asymmetry " + fmt(worst) + " > 1e-3*max|Y|=" + fmt(1e-3 * ymax));
    c.detail << "max |Y[l,k]-Y[k,l]| = " << fmt(worst) << " vs bound "
             << fmt(1e-3 * ymax);
    return c;
}

// --- 4. adjoint gradient vs central finite differences ----------------------
Criterion criterion_gradient() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    const double omega = kTwoPi * 300e3;
    Grid2D g = make_centered_grid(48, 48, 1e-3);
    const double roi = 0.016;

    SoundSpeedMap truth{RealField2D(g, 1500.0), 1500.0, roi, {0.0, 0.0}};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::hypot(g.x(i) - 0.003, g.y(j)) < 0.006)
                truth.c.at(i, j) = 1530.0;

    RingArray ring{4, 0.036, {0.0, 0.0}, 0.3};
    CBSConfig cbs;
    cbs.pad_width = 30;
    cbs.tol = 1e-8;
    cbs.max_iter = 4000;
    // background k0: single-cell perturbations must not move the pad absorption
    cbs.k0_strategy = K0Strategy::Background;

    SimulateOptions sim;
    sim.threads = 4;
    MeasurementTensor y_obs =
        simulate_measurements(truth, {omega}, ring, cbs, sim).tensor;

    SoundSpeedMap model{RealField2D(g, 1500.0), 1500.0, roi, {0.0, 0.0}};
    InversionConfig cfg;
    cfg.frequency_schedule = {omega};
    cfg.cbs = cbs;
    cfg.threads = 4;
    auto [grad, misfit] = compute_total_gradient(model, y_obs, 0, cfg);

    std::vector<Point> pts = ring_positions(ring);
    auto misfit_at = [&](const SoundSpeedMap& m) {
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            HelmholtzProblem p{m, omega,
                               make_point_source(g, pts[k], cfg.source_value,
                                                 cfg.injection)};
            std::vector<Complex> recv =
                record_receivers(solve_helmholtz(p, cbs).u, ring);
            for (int l = 0; l < 4; ++l) total += std::norm(recv[l] - y_obs.at(l, k, 0));
        }
        return total;
    };

    std::mt19937_64 rng(5);
    std::vector<std::pair<int, int>> cells;
    while (cells.size() < 20) {
        const int i = static_cast<int>(rng() % g.nx);
        const int j = static_cast<int>(rng() % g.ny);
        if (std::hypot(g.x(i), g.y(j)) < 0.8 * roi) cells.emplace_back(i, j);
    }
    std::vector<double> rel(cells.size(), 1.0);
    const double delta = 0.1;
    parallel_for(cells.size(), 4, [&](std::size_t t) {
        const auto [i, j] = cells[t];
        SoundSpeedMap plus = model, minus = model;
        plus.c.at(i, j) += delta;
        minus.c.at(i, j) -= delta;
        const double fd = (misfit_at(plus) - misfit_at(minus)) / (2.0 * delta);
        const double adj = grad.g[static_cast<std::size_t>(j) * g.nx + i];
        rel[t] = std::abs(adj - fd) / std::abs(fd);
    });
    double worst = 0.0;
    for (double r : rel) worst = std::max(worst, r);
    const double elapsed = seconds_since(t0);
    c.require(worst <= 2e-2, "worst rel error " + fmt(worst) + " > 2e-2");
    c.require(elapsed < 120.0, "runtime " + fmt(elapsed) + "s >= 2min");
    c.detail << "worst rel error " << fmt(worst) << " over 20 cells, "
             << fmt(elapsed) << "s";
    return c;
}

// --- 5. desk-scale full-waveform inversion recovery -------------------------
Criterion criterion_fwi() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    Grid2D g = make_centered_grid(64, 64, 1e-3);
    const double roi = 0.014;

    // Circular +3% inclusion with a raised-cosine edge: band-limited data
    // cannot represent a sharp jump, so the target is kept resolvable.
    SoundSpeedMap truth{RealField2D(g, 1500.0), 1500.0, roi, {0.0, 0.0}};
    const double r0 = 0.008, taper = 0.005;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r = std::hypot(g.x(i) - 0.004, g.y(j) + 0.002);
            double w;
            if (r <= r0 - taper) w = 1.0;
            else if (r >= r0) w = 0.0;
            else w = 0.5 - 0.5 * std::cos(std::numbers::pi * (r0 - r) / taper);
            truth.c.at(i, j) = 1500.0 + 45.0 * w;
        }

    RingArray ring{16, 0.056, {0.0, 0.0}, 0.0};
    const std::vector<double> freqs{kTwoPi * 300e3, kTwoPi * 400e3, kTwoPi * 500e3};
    CBSConfig cbs;
    cbs.pad_width = 20;

    SimulateOptions sim;
    sim.threads = 4;
    MeasurementTensor y_obs = simulate_measurements(truth, freqs, ring, cbs, sim).tensor;

    SoundSpeedMap water{RealField2D(g, 1500.0), 1500.0, roi, {0.0, 0.0}};
    InversionConfig cfg;
    cfg.frequency_schedule = freqs;
    cfg.iters_per_frequency = 30;
    cfg.cbs = cbs;
    cfg.threads = 4;
    InvertResult res = invert(y_obs, water, cfg);

    // misfit must be monotone non-increasing within each frequency block
    bool monotone = true;
    for (std::size_t r = 1; r < res.trace.size(); ++r) {
        const TraceRow& prev = res.trace[r - 1];
        const TraceRow& row = res.trace[r];
        if (row.omega == prev.omega && row.accepted &&
            row.misfit > prev.misfit * (1.0 + 1e-12))
            monotone = false;
    }

    const double s = ssim(res.c.c, truth.c);
    const double p_water = psnr(water.c, truth.c);
    const double p_recon = psnr(res.c.c, truth.c);
    const double gain = p_recon - p_water;
    const double elapsed = seconds_since(t0);

    c.require(s >= 0.85, "SSIM " + fmt(s) + " < 0.85");
    c.require(gain >= 6.0, "PSNR gain " + fmt(gain) + " dB < 6 dB");
    c.require(monotone, "misfit not monotone within a frequency block");
    c.require(elapsed < 900.0, "runtime " + fmt(elapsed) + "s >= 15min");
    c.detail << "SSIM " << fmt(s) << ", PSNR " << fmt(p_water) << " -> "
             << fmt(p_recon) << " dB, " << fmt(elapsed) << "s";
    return c;
}

// --- 6. default acquisition configuration recorded in the manifest ----------
Criterion criterion_config() {
    Criterion c;
    Manifest m;
    m.grid = make_centered_grid(480, 480, 0.5e-3);
    m.ring = RingArray{};
    m.source_value = kDefaultSourceValue;
    m.frequencies = default_angular_frequencies();
    const fs::path file =
        fs::temp_directory_path() / "usct_acceptance" / "manifest.txt";
    fs::create_directories(file.parent_path());
    write_manifest(m, file);
    Manifest r = read_manifest(file);

    c.require(r.grid.nx == 480 && r.grid.ny == 480, "grid is not 480x480");
    c.require(r.grid.h == 0.5e-3, "grid spacing is not 0.5 mm");
    c.require(r.ring.m == 256, "ring does not have 256 transducers");
    c.require(r.ring.diameter == 0.220, "ring diameter is not 220 mm");
    c.require(r.source_value == Complex(0.195, -0.0275),
              "source value is not 0.195-0.0275i");
    c.require(r.frequencies.size() == 8, "frequency ladder is not 8 entries");
    for (std::size_t i = 0; i < r.frequencies.size(); ++i)
        c.require(std::abs(r.frequencies[i] - kTwoPi * (300e3 + 50e3 * i)) <
                      1e-6 * r.frequencies[i],
                  "frequency " + std::to_string(i) + " off the 300-650 kHz ladder");
    std::vector<Point> pts = ring_positions(r.ring);
    const double want = kTwoPi / 256.0;
    for (int k = 0; k < 256; ++k) {
        const Point a = pts[k], b = pts[(k + 1) % 256];
        const double angle = std::acos(std::clamp(
            (a.x * b.x + a.y * b.y) / (0.110 * 0.110), -1.0, 1.0));
        c.require(std::abs(angle - want) < 1e-9, "transducer spacing != 2pi/256");
        c.require(std::abs(std::hypot(a.x, a.y) - 0.110) < 1e-12,
                  "transducer radius != 110 mm");
    }
    c.detail << "480x480 @ 0.5 mm, 256 transducers @ 220 mm, 8 frequencies";
    return c;
}

// --- 7. metric oracles -------------------------------------------------------
Criterion criterion_metrics() {
    Criterion c;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Grid2D g = make_centered_grid(16, 16, 1.0);

    ComplexField2D u(g);
    for (auto& z : u.values) z = Complex(d(rng), d(rng));
    ComplexField2D u11 = u;
    for (auto& z : u11.values) z *= 1.1;
    c.require(std::abs(rrmse(u11, u) - 0.1) <= 1e-12,
              "rrmse(1.1u, u) deviates from 0.1");

    RealField2D x(g);
    for (double& v : x.values) v = d(rng);
    c.require(std::abs(ssim(x, x) - 1.0) <= 1e-12, "ssim(x,x) != 1");

    RealField2D y(g);
    for (double& v : y.values) v = 0.5 * (d(rng) + 1.0);
    y.values[0] = 0.0;
    y.values[1] = 1.0;  // dynamic range exactly 1
    RealField2D x10 = y;
    for (double& v : x10.values) v += 0.1;
    c.require(std::abs(psnr(x10, y) - 20.0) <= 1e-9, "psnr at RMSE=L/10 != 20 dB");

    for (int suite = 0; suite < 20; ++suite) {
        std::vector<std::pair<ComplexField2D, ComplexField2D>> samples;
        double expect = 0.0;
        for (int s = 0; s < 8; ++s) {
            ComplexField2D a(g), b(g);
            for (auto& z : a.values) z = Complex(d(rng), d(rng));
            for (auto& z : b.values) z = Complex(d(rng), d(rng));
            expect = std::max(expect, rrmse(a, b));
            samples.emplace_back(std::move(a), std::move(b));
        }
        c.require(max_error(samples) == expect,
                  "max_error != max per-sample rrmse");
    }
    c.detail << "rrmse/ssim/psnr/max_error oracles within pinned tolerances";
    return c;
}

// --- 8. phantom statistics ---------------------------------------------------
Criterion criterion_phantoms() {
    Criterion c;
    Grid2D g = make_centered_grid(240, 240, 1e-3);
    std::vector<double> fractions(200);
    parallel_for(200, 4, [&](std::size_t s) {
        PhantomParams p =
            sample_phantom_params(BreastType::HET, 5000 + s);
        fractions[s] = interior_fat_fraction(generate_tissue_map(p, g, 0.110));
    });
    double lo = 1.0, hi = 0.0;
    for (double f : fractions) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    c.require(lo > 0.20 && hi < 0.55,
              "fat fraction range [" + fmt(lo) + ", " + fmt(hi) +
                  "] leaves (0.20, 0.55)");

    bool in_range = true;
    for (std::uint64_t s = 0; s < 200; ++s) {
        PhantomParams p = sample_phantom_params(BreastType::HET, 5000 + s);
        in_range = in_range && p.a1b >= 3.5 && p.a1b <= 7.5 && p.a1t >= 3.5 &&
                   p.a1t <= 7.5 && p.a2l >= 3.5 && p.a2l <= 7.5 && p.a2r >= 3.5 &&
                   p.a2r <= 7.5 && p.a3 / p.a1b >= 1.0 && p.a3 / p.a1b <= 1.5 &&
                   p.target_fat_frac >= 0.25 && p.target_fat_frac <= 0.5 &&
                   p.skin_scale >= 200.0 && p.skin_scale <= 400.0 &&
                   p.skin_strength >= 0.5 && p.skin_strength <= 2.0;
    }
    c.require(in_range, "a sampled parameter left its truncation interval");

    // random-field phantoms: empirical mean and autocorrelation at one
    // correlation length, averaged over 100 seeds
    Grid2D gg = make_centered_grid(128, 128, 1e-3);
    const double ell = 3e-3, contrast = 0.03, c0 = 1500.0, roi = 0.055;
    double mean_sum = 0.0, var_sum = 0.0, cov_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SoundSpeedMap m = generate_grf_phantom(gg, ell, contrast, c0, seed, roi);
        double acc = 0.0;
        int count = 0;
        for (int j = 0; j < gg.ny; ++j)
            for (int i = 0; i < gg.nx; ++i) {
                const double dist = std::hypot(gg.x(i), gg.y(j));
                if (dist < roi) {
                    acc += m.c.at(i, j);
                    ++count;
                }
                if (dist < 0.8 * roi) {
                    const double gc = (m.c.at(i, j) / c0 - 1.0) / contrast;
                    const double gl = (m.c.at(i + 3, j) / c0 - 1.0) / contrast;
                    var_sum += gc * gc;
                    cov_sum += gc * gl;
                }
            }
        mean_sum += acc / count;
    }
    const double mean_dev = std::abs(mean_sum / 100.0 - c0) / c0;
    const double rho = cov_sum / var_sum;
    c.require(mean_dev < 0.002, "ROI mean deviates " + fmt(mean_dev) + " > 0.2%");
    c.require(std::abs(rho - std::exp(-0.5)) < 0.1,
              "autocorrelation at one length " + fmt(rho) + " vs exp(-1/2)");
    c.detail << "fat fraction in [" << fmt(lo) << ", " << fmt(hi)
             << "], mean dev " << fmt(mean_dev) << ", autocorr " << fmt(rho);
    return c;
}

// --- 9. serialization round trip, typed errors, resumable export ------------
Criterion criterion_io() {
    Criterion c;
    const fs::path dir = fs::temp_directory_path() / "usct_acceptance";
    fs::create_directories(dir);
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> ni(2, 8);
    std::uniform_real_distribution<double> d(-1.0, 1.0);

    bool exact = true;
    const fs::path file = dir / "roundtrip.obe";
    for (int trial = 0; trial < 1000 && exact; ++trial) {
        DatasetEntry e;
        Grid2D g = make_grid(ni(rng), ni(rng), 0.5e-3 + 0.1e-3 * d(rng),
                             {d(rng) * 0.01, d(rng) * 0.01});
        e.phantom_id = "p" + std::to_string(trial);
        e.breast_type = static_cast<BreastType>(rng() % 4);
        e.c.c = RealField2D(g);
        for (double& v : e.c.c.values) v = 1500.0 + 100.0 * d(rng);
        e.c.c0 = 1500.0 + d(rng);
        e.c.roi_radius = 0.1 + 0.01 * d(rng);
        e.omega = kTwoPi * (300e3 + 1e3 * d(rng));
        e.source = {static_cast<int>(rng() % 256), {d(rng) * 0.1, d(rng) * 0.1},
                    Complex(d(rng), d(rng))};
        e.u = ComplexField2D(g);
        for (auto& z : e.u.values) z = Complex(d(rng), d(rng));
        write_entry(e, file);
        DatasetEntry r = read_entry(file);
        exact = r.phantom_id == e.phantom_id && r.breast_type == e.breast_type &&
                r.c.c.grid == e.c.c.grid && r.c.c.values == e.c.c.values &&
                r.c.c0 == e.c.c0 && r.c.roi_radius == e.c.roi_radius &&
                r.omega == e.omega && r.source.index == e.source.index &&
                r.source.position.x == e.source.position.x &&
                r.source.amplitude == e.source.amplitude &&
                r.u.values == e.u.values;
    }
    c.require(exact, "a randomized entry failed to round-trip bit-exactly");

    // corrupted headers must raise the typed errors
    std::vector<char> bytes;
    {
        std::ifstream in(file, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
    }
    auto dump_bytes = [&](const std::vector<char>& b) {
        std::ofstream out(dir / "bad.obe", std::ios::binary);
        out.write(b.data(), static_cast<std::streamsize>(b.size()));
    };
    bool typed = true;
    {
        std::vector<char> b = bytes;
        b[0] = 'Z';
        dump_bytes(b);
        try {
            read_entry(dir / "bad.obe");
            typed = false;
        } catch (const BadMagicError&) {
        } catch (...) { typed = false; }
    }
    {
        std::vector<char> b = bytes;
        b[4] = 77;
        dump_bytes(b);
        try {
            read_entry(dir / "bad.obe");
            typed = false;
        } catch (const VersionError&) {
        } catch (...) { typed = false; }
    }
    {
        std::vector<char> b(bytes.begin(), bytes.begin() + bytes.size() / 3);
        dump_bytes(b);
        try {
            read_entry(dir / "bad.obe");
            typed = false;
        } catch (const TruncatedError&) {
        } catch (...) { typed = false; }
    }
    c.require(typed, "a corrupted header did not raise its typed error");

    // resumable export: 2 phantoms x 2 frequencies x 4 sources
    Grid2D g = make_centered_grid(48, 48, 1e-3);
    std::vector<ExportPhantom> phantoms;
    phantoms.push_back(
        {"a", BreastType::HET,
         SoundSpeedMap{RealField2D(g, 1500.0), 1500.0, 0.016, {0.0, 0.0}}});
    phantoms.push_back({"b", BreastType::FIB,
                        generate_grf_phantom(g, 4e-3, 0.03, 1500.0, 31, 0.016)});
    const std::vector<double> freqs{kTwoPi * 300e3, kTwoPi * 350e3};
    RingArray ring{4, 0.036, {0.0, 0.0}, 0.2};
    CBSConfig cfg;
    cfg.pad_width = 25;
    ExportOptions opt;
    opt.threads = 4;
    const fs::path exp = dir / "export";
    fs::remove_all(exp);
    ExportResult first = export_dataset(phantoms, freqs, ring, cfg, exp, opt);
    ExportResult second = export_dataset(phantoms, freqs, ring, cfg, exp, opt);
    c.require(first.solves_performed == 16,
              "first export ran " + std::to_string(first.solves_performed) +
                  " solves, expected 16");
    c.require(second.solves_performed == 0 && second.entries_reused == 16,
              "re-export was not free: " +
                  std::to_string(second.solves_performed) + " solves");
    c.detail << "1000 round trips exact, typed errors, re-export solves 0/16";
    return c;
}

}  // namespace

int main() {
    struct Named {
        const char* name;
        Criterion (*fn)();
    };
    const Named criteria[] = {
        {"analytic Green's function match", criterion_green},
        {"residual certificate", criterion_residual},
        {"measurement reciprocity", criterion_reciprocity},
        {"adjoint gradient vs finite differences", criterion_gradient},
        {"desk-scale FWI recovery", criterion_fwi},
        {"default configuration fidelity", criterion_config},
        {"metric oracles", criterion_metrics},
        {"phantom statistics", criterion_phantoms},
        {"IO round trip and resumable export", criterion_io},
    };

    int failures = 0;
    int index = 0;
    for (const Named& c : criteria) {
        ++index;
        Criterion result;
        try {
            result = c.fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail << "exception: " << e.what();
        }
        std::printf("criterion %d (%s): %s — %s\n", index, c.name,
                    result.pass ? "PASS" : "FAIL", result.detail.str().c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    if (failures) std::printf("%d of 9 criteria FAILED\n", failures);
    else std::printf("all 9 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
