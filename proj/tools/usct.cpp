// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: phantom generation, wavefield simulation,
// FWI reconstruction, metric evaluation, and image rendering.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "usct/dataset_io.hpp"
#include "usct/fwi.hpp"
#include "usct/metrics.hpp"
#include "usct/render.hpp"

namespace fs = std::filesystem;
using namespace usct;

namespace {

int default_threads() {
    if (const char* env = std::getenv("USCT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::vector<double> to_angular(const std::vector<double>& hz) {
    std::vector<double> w;
    w.reserve(hz.size());
    for (double f : hz) w.push_back(2.0 * std::numbers::pi * f);
    return w;
}

RealField2D magnitude(const ComplexField2D& f) {
    RealField2D out(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        out.values[i] = std::abs(f.values[i]);
    return out;
}

struct PhantomArgs {
    std::string type = "HET";
    int count = 1;
    std::uint64_t seed = 0;
    std::string out = ".";
    int nx = 480, ny = 480;
    double spacing = 0.5e-3;
    double roi_radius = 0.110;
    double correlation_length = 8e-3;
    double contrast = 0.05;
};

int run_phantom(const PhantomArgs& a) {
    fs::create_directories(a.out);
    Grid2D grid = make_centered_grid(a.nx, a.ny, a.spacing);
    for (int k = 0; k < a.count; ++k) {
        const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
        SoundSpeedMap map;
        if (a.type == "GRF") {
            map = generate_grf_phantom(grid, a.correlation_length, a.contrast,
                                       1500.0, seed, a.roi_radius);
        } else {
            map = generate_breast_phantom(breast_type_from_string(a.type), grid,
                                          seed, a.roi_radius);
        }
        const std::string stem =
            a.type + "_" + std::to_string(seed);
        write_speed_map(map, fs::path(a.out) / (stem + ".obus"));
        write_pgm(map.c, fs::path(a.out) / (stem + ".pgm"));
        std::cout << "wrote " << stem << ".obus\n";
    }
    return 0;
}

struct SimulateArgs {
    std::string phantom_file;
    std::vector<double> freqs_hz;
    int sources = kDefaultTransducers;
    double ring_diameter = kDefaultRingDiameter;
    std::string out = ".";
    bool dump_fields = false;
    int threads = default_threads();
    double tol = 1e-6;
    int max_iter = 2000;
    int pad = 50;
    std::string injection = "bilinear";
    double source_re = kDefaultSourceValue.real();
    double source_im = kDefaultSourceValue.imag();
};

int run_simulate(const SimulateArgs& a) {
    fs::create_directories(a.out);
    SoundSpeedMap map = read_speed_map(a.phantom_file);
    std::vector<double> omegas = a.freqs_hz.empty()
                                     ? default_angular_frequencies()
                                     : to_angular(a.freqs_hz);
    RingArray ring{a.sources, a.ring_diameter, {0.0, 0.0}, 0.0};
    CBSConfig cbs;
    cbs.tol = a.tol;
    cbs.max_iter = a.max_iter;
    cbs.pad_width = a.pad;
    SimulateOptions opt;
    opt.injection = a.injection == "nearest" ? SourceInjection::NearestCell
                                             : SourceInjection::Bilinear;
    opt.source_value = Complex(a.source_re, a.source_im);
    opt.threads = a.threads;
    opt.keep_fields = a.dump_fields;
    opt.throw_on_failure = false;

    SimulationResult result = simulate_measurements(map, omegas, ring, cbs, opt);
    write_tensor(result.tensor, fs::path(a.out) / "tensor.obus");

    Manifest manifest;
    manifest.grid = map.c.grid;
    manifest.c0 = map.c0;
    manifest.roi_radius = map.roi_radius;
    manifest.ring = ring;
    manifest.source_value = opt.source_value;
    manifest.frequencies = omegas;
    manifest.self_measurement = true;
    if (a.dump_fields) {
        const std::vector<Point> pts = ring_positions(ring);
        for (int j = 0; j < static_cast<int>(omegas.size()); ++j)
            for (int k = 0; k < ring.m; ++k) {
                const std::string name =
                    "field_f" + std::to_string(j) + "_s" + std::to_string(k) + ".obus";
                write_complex_field(
                    result.fields[static_cast<std::size_t>(j) * ring.m + k],
                    fs::path(a.out) / name);
                manifest.entries.push_back({"phantom", j, k, name, "ok"});
            }
    }
    write_manifest(manifest, fs::path(a.out) / "manifest.txt");

    std::ofstream report(fs::path(a.out) / "solve_report.txt");
    report << "solves = " << ring.m * omegas.size() << "\n";
    report << "failures = " << result.failures.size() << "\n";
    for (const SolveFailure& f : result.failures)
        report << "failed = source " << f.source << " freq " << f.freq_index
               << " update " << f.report.final_update << "\n";

    if (!result.failures.empty()) {
        std::cerr << "error: " << result.failures.size()
                  << " solves did not converge (see solve_report.txt)\n";
        return 2;
    }
    std::cout << "tensor " << ring.m << "x" << ring.m << "x" << omegas.size()
              << " written to " << a.out << "\n";
    return 0;
}

struct InvertArgs {
    std::string obs_file;
    std::string init_file;
    std::vector<double> freqs_hz;
    int iters = 30;
    std::string out = ".";
    int threads = default_threads();
    std::string step_rule = "backtracking";
    double min_speed = 1350.0, max_speed = 1650.0;
    double tol = 1e-6;
    int pad = 50;
    std::vector<int> sources;
    double roi_radius = 0.0;
};

int run_invert(const InvertArgs& a) {
    fs::create_directories(a.out);
    MeasurementTensor y_obs = read_tensor(a.obs_file);

    SoundSpeedMap c_init;
    if (!a.init_file.empty()) {
        c_init = read_speed_map(a.init_file);
    } else {
        throw std::runtime_error("invert: --init map file is required");
    }
    if (a.roi_radius > 0.0) c_init.roi_radius = a.roi_radius;

    InversionConfig cfg;
    cfg.frequency_schedule =
        a.freqs_hz.empty() ? y_obs.frequencies : to_angular(a.freqs_hz);
    std::sort(cfg.frequency_schedule.begin(), cfg.frequency_schedule.end());
    cfg.iters_per_frequency = a.iters;
    cfg.step_rule = a.step_rule == "fixed" ? StepRule::FixedRelative
                                           : StepRule::Backtracking;
    cfg.min_speed = a.min_speed;
    cfg.max_speed = a.max_speed;
    cfg.cbs.tol = a.tol;
    cfg.cbs.pad_width = a.pad;
    cfg.threads = a.threads;
    if (!a.sources.empty()) cfg.source_subset = a.sources;

    InvertResult result = invert(y_obs, c_init, cfg);
    write_speed_map(result.c, fs::path(a.out) / "recon.obus");
    write_pgm(result.c.c, fs::path(a.out) / "recon.pgm");

    std::ofstream trace(fs::path(a.out) / "trace.csv");
    trace << "omega,iteration,misfit,step,accepted,block_terminated\n";
    for (const TraceRow& row : result.trace)
        trace << row.omega << "," << row.iteration << "," << row.misfit << ","
              << row.step << "," << row.accepted << "," << row.block_terminated
              << "\n";
    std::cout << "reconstruction written to " << a.out << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string recon_file;
    std::string truth_file;
    std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
    SoundSpeedMap recon = read_speed_map(a.recon_file);
    SoundSpeedMap truth = read_speed_map(a.truth_file);
    MetricReport report;
    report.rrmse = rrmse(recon.c, truth.c);
    report.ssim = ssim(recon.c, truth.c);
    report.psnr = psnr(recon.c, truth.c);

    std::cout << "rrmse = " << *report.rrmse << "\n";
    std::cout << "ssim = " << *report.ssim << "\n";
    std::cout << "psnr = " << *report.psnr << "\n";
    if (!a.out.empty()) {
        std::ofstream out(a.out);
        out << "rrmse = " << *report.rrmse << "\n";
        out << "ssim = " << *report.ssim << "\n";
        out << "psnr = " << *report.psnr << "\n";
    }
    return 0;
}

struct RenderArgs {
    std::string input;
    std::string out;
};

int run_render(const RenderArgs& a) {
    try {
        SoundSpeedMap map = read_speed_map(a.input);
        write_pgm(map.c, a.out);
        return 0;
    } catch (const ShapeError&) {
        // not a speed map; fall through to complex field
    }
    ComplexField2D f = read_complex_field(a.input);
    fs::path stem(a.out);
    stem.replace_extension();
    write_complex_pgm(f, stem);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain ultrasound tomography toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");

    PhantomArgs pa;
    auto* phantom = app.add_subcommand("phantom", "generate sound-speed phantoms");
    phantom->add_option("--type", pa.type, "phantom type")
        ->check(CLI::IsMember({"HET", "FIB", "FAT", "EXD", "GRF"}));
    phantom->add_option("--count", pa.count);
    phantom->add_option("--seed", pa.seed);
    phantom->add_option("--out", pa.out);
    phantom->add_option("--nx", pa.nx);
    phantom->add_option("--ny", pa.ny);
    phantom->add_option("--spacing", pa.spacing, "grid spacing in meters");
    phantom->add_option("--roi-radius", pa.roi_radius);
    phantom->add_option("--correlation-length", pa.correlation_length);
    phantom->add_option("--contrast", pa.contrast);

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "simulate ring-array measurements");
    simulate->add_option("--phantom", sa.phantom_file)->required();
    simulate->add_option("--freqs", sa.freqs_hz, "frequencies in Hz");
    simulate->add_option("--sources", sa.sources);
    simulate->add_option("--ring-diameter", sa.ring_diameter);
    simulate->add_option("--out", sa.out);
    simulate->add_flag("--dump-fields", sa.dump_fields);
    simulate->add_option("--threads", sa.threads);
    simulate->add_option("--tol", sa.tol);
    simulate->add_option("--max-iter", sa.max_iter);
    simulate->add_option("--pad", sa.pad);
    simulate->add_option("--injection", sa.injection)
        ->check(CLI::IsMember({"nearest", "bilinear"}));
    simulate->add_option("--source-re", sa.source_re);
    simulate->add_option("--source-im", sa.source_im);

    InvertArgs ia;
    auto* invert_cmd = app.add_subcommand("invert", "adjoint-state FWI reconstruction");
    invert_cmd->add_option("--obs", ia.obs_file)->required();
    invert_cmd->add_option("--init", ia.init_file)->required();
    invert_cmd->add_option("--freqs", ia.freqs_hz, "schedule frequencies in Hz");
    invert_cmd->add_option("--iters", ia.iters);
    invert_cmd->add_option("--out", ia.out);
    invert_cmd->add_option("--threads", ia.threads);
    invert_cmd->add_option("--step-rule", ia.step_rule)
        ->check(CLI::IsMember({"backtracking", "fixed"}));
    invert_cmd->add_option("--min-speed", ia.min_speed);
    invert_cmd->add_option("--max-speed", ia.max_speed);
    invert_cmd->add_option("--tol", ia.tol);
    invert_cmd->add_option("--pad", ia.pad);
    invert_cmd->add_option("--sources", ia.sources, "source subset indices");
    invert_cmd->add_option("--roi-radius", ia.roi_radius);

    EvaluateArgs ea;
    auto* evaluate = app.add_subcommand("evaluate", "compare reconstruction to truth");
    evaluate->add_option("--recon", ea.recon_file)->required();
    evaluate->add_option("--truth", ea.truth_file)->required();
    evaluate->add_option("--out", ea.out);

    RenderArgs ra;
    auto* render = app.add_subcommand("render", "render a field file to PGM");
    render->add_option("--input", ra.input)->required();
    render->add_option("--out", ra.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (phantom->parsed()) return run_phantom(pa);
        if (simulate->parsed()) return run_simulate(sa);
        if (invert_cmd->parsed()) return run_invert(ia);
        if (evaluate->parsed()) return run_evaluate(ea);
        if (render->parsed()) return run_render(ra);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
