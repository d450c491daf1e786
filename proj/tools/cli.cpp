#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "csar/csar.hpp"
#include "csar/io/capture.hpp"
#include "csar/io/image_export.hpp"
#include "csar/io/scene_config.hpp"

namespace csar::cli {
namespace {

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

int cmd_simulate(const std::string& scene_path, const std::string& out_path, int precision_bits, std::ostream& out) {
    const auto cfg = io::load_scene_config(scene_path);
    const auto data = simulate_scene(cfg.radar, cfg.aperture, cfg.scene, cfg.antenna, cfg.noise);
    io::write_capture(data, out_path,
                      precision_bits == 64 ? io::SamplePrecision::Float64 : io::SamplePrecision::Float32);
    out << "wrote " << data.samples.rows() << " x " << data.samples.cols() << " capture to " << out_path << '\n';
    return kOk;
}

int cmd_reconstruct(const std::string& in_path, const std::string& grid_spec, const std::string& out_path,
                    const std::string& format_name, double floor_db, const std::string& taper, std::ostream& out) {
    const auto fmt = io::parse_image_format(format_name);
    const auto grid = io::parse_grid_spec(grid_spec);
    if (!(floor_db < 0)) throw ValidationError("--floor-db must be < 0");
    ReconstructOptions options;
    if (taper == "hann")
        options.taper = AzimuthTaper::Hann;
    else if (taper != "none")
        throw ValidationError("--taper must be none or hann");
    const auto data = io::read_capture(in_path);
    const auto image = reconstruct_image(data, grid, options);
    io::export_image(image, fmt, floor_db, out_path);
    out << "wrote " << grid.n_r << " x " << grid.n_theta << " image to " << out_path << '\n';
    return kOk;
}

int cmd_design(const std::string& config_path, std::ostream& out) {
    const auto cfg = io::load_scene_config(config_path);
    const double exposure = cfg.exposure();
    const double reference = cfg.reference_range();
    const auto report = design_report(cfg.radar, cfg.aperture.radius, exposure, reference, cfg.design.alpha);
    out << "delta_R = " << format("%.4f", report.delta_r) << " m\n";
    out << "delta_theta_max = " << format("%.4f", rad2deg(report.delta_theta_max)) << " deg ("
        << format("%.6f", report.delta_theta_max) << " rad)\n";
    out << "angular_resolution = " << format("%.4f", rad2deg(report.angular_resolution)) << " deg ("
        << format("%.6e", report.angular_resolution) << " rad) at exposure "
        << format("%.2f", rad2deg(exposure)) << " deg\n";
    out << "rcm_extent = " << format("%.4f", report.rcm_extent) << " m at R = " << format("%.3f", reference)
        << " m\n";
    out << "rcm_exceeds_range_cell = " << (report.rcm_extent > report.delta_r ? "true" : "false") << '\n';
    out << "monostatic_ok = " << (report.monostatic_ok ? "true" : "false") << " (d = "
        << format("%.4f", cfg.radar.d) << " m, alpha = " << format("%g", cfg.design.alpha) << ")\n";
    if (cfg.aperture.size() > 1) {
        const double step = std::abs(cfg.aperture.angles[1] - cfg.aperture.angles[0]);
        out << "configured_step = " << format("%.4f", rad2deg(step)) << " deg ("
            << (step <= report.delta_theta_max ? "meets" : "violates") << " Nyquist bound)\n";
    }
    return kOk;
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw FormatError(FormatErrorKind::Malformed, std::string(what) + ": expected A,B");
    try {
        std::size_t u1 = 0, u2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double x = std::stod(a, &u1), y = std::stod(b, &u2);
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(what);
        return {x, y};
    } catch (const std::exception&) {
        throw FormatError(FormatErrorKind::Malformed, std::string(what) + ": cannot parse \"" + s + "\"");
    }
}

int cmd_psf(const std::string& in_path, const std::string& truth_spec, std::ostream& out) {
    const auto [truth_r, truth_deg] = parse_pair(truth_spec, "--truth");
    const auto img = io::read_db_csv(in_path);
    const auto report = psf_report(img.db, img.grid);
    const double pr = img.grid.range_at(report.peak.range_index);
    const double pt = img.grid.angle_at(report.peak.angle_index);
    const auto truth_cell = nearest_cell(img.grid, PolarPoint<double>{truth_r, deg2rad(truth_deg)});
    out << "peak_cell = (" << report.peak.range_index << ", " << report.peak.angle_index << ")\n";
    out << "peak_position = " << format("%.4f", pr) << " m, " << format("%.3f", rad2deg(pt)) << " deg\n";
    out << "peak_db = " << format("%.3f", report.peak.value) << '\n';
    out << "truth_offset = " << format("%.4f", pr - truth_r) << " m, " << format("%.3f", rad2deg(pt) - truth_deg)
        << " deg (" << std::abs(report.peak.range_index - truth_cell.range_index) << ", "
        << std::abs(report.peak.angle_index - truth_cell.angle_index) << " cells)\n";
    out << "mainlobe_width_range = " << format("%.5f", report.mainlobe_width_range) << " m\n";
    out << "mainlobe_width_angle = " << format("%.6e", report.mainlobe_width_angle) << " rad ("
        << format("%.4f", rad2deg(report.mainlobe_width_angle)) << " deg)\n";
    out << "pslr_db = " << format("%.2f", report.pslr_db) << '\n';
    return kOk;
}

int cmd_bench(const std::string& scene_path, const std::string& grid_spec, int repeat, std::ostream& out) {
    if (repeat < 1) throw ValidationError("--repeat must be >= 1");
    const auto cfg = io::load_scene_config(scene_path);
    const auto grid = io::parse_grid_spec(grid_spec);
    const auto data = simulate_scene(cfg.radar, cfg.aperture, cfg.scene, cfg.antenna, cfg.noise);
    const double cells = double(grid.cells());
    const double samples = cells * double(data.samples.size());

    std::vector<double> seconds;
    for (int r = 0; r < repeat; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto image = reconstruct_image(data, grid);
        const auto t1 = std::chrono::steady_clock::now();
        // keep the result observable
        if (!std::isfinite(std::abs(image.values(0, 0)))) throw Error("bench: non-finite output");
        seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        out << "run " << r << ": " << format("%.4f", seconds.back()) << " s\n";
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double med = median(seconds);
    std::vector<double> deviation;
    for (double s : seconds) deviation.push_back(std::abs(s - med));
    const double relative_mad = median(deviation) / med;

    out << "workers = " << default_worker_count() << '\n';
    out << "cells = " << grid.cells() << ", samples_per_cell = " << data.samples.size() << '\n';
    out << "median_seconds = " << format("%.6f", med) << '\n';
    out << "cells_per_second = " << format("%.6e", cells / med) << '\n';
    out << "samples_per_second = " << format("%.6e", samples / med) << '\n';
    out << "relative_mad = " << format("%.4f", relative_mad) << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Circular SAR simulation, backprojection imaging and design toolkit", "csar"};
    app.require_subcommand(1);

    std::string scene, capture_out, capture_in, grid, image_out, image_format = "csv", taper = "none", config,
                                                                    truth, image_in;
    double floor_db = -60.0;
    int precision = 32;
    int repeat = 5;

    auto* simulate = app.add_subcommand("simulate", "simulate a raw capture from a scene config");
    simulate->add_option("--scene", scene, "scene config (JSON)")->required();
    simulate->add_option("--out", capture_out, "output capture file")->required();
    simulate->add_option("--precision", precision, "payload bits per component")->check(CLI::IsMember({32, 64}));

    auto* reconstruct = app.add_subcommand("reconstruct", "backproject a capture onto a polar grid");
    reconstruct->add_option("--in", capture_in, "input capture file")->required();
    reconstruct->add_option("--grid", grid, "rmin,rmax,nr,tmin,tmax,nt (m, m, -, deg, deg, -)")->required();
    reconstruct->add_option("--out", image_out, "output image")->required();
    reconstruct->add_option("--format", image_format, "pgm or csv");
    reconstruct->add_option("--floor-db", floor_db, "dB floor (< 0)");
    reconstruct->add_option("--taper", taper, "azimuth taper: none or hann");

    auto* design = app.add_subcommand("design", "print sampling and resolution figures");
    design->add_option("--config", config, "scene config (JSON)")->required();

    auto* psf = app.add_subcommand("psf", "measure the point spread function of an image");
    psf->add_option("--in", image_in, "image csv")->required();
    psf->add_option("--truth", truth, "R,theta (m, deg)")->required();

    auto* bench = app.add_subcommand("bench", "time the backprojection kernel");
    bench->add_option("--scene", scene, "scene config (JSON)")->required();
    bench->add_option("--grid", grid, "rmin,rmax,nr,tmin,tmax,nt")->required();
    bench->add_option("--repeat", repeat, "runs (median reported)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*simulate) return cmd_simulate(scene, capture_out, precision, out);
        if (*reconstruct) return cmd_reconstruct(capture_in, grid, image_out, image_format, floor_db, taper, out);
        if (*design) return cmd_design(config, out);
        if (*psf) return cmd_psf(image_in, truth, out);
        if (*bench) return cmd_bench(scene, grid, repeat, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoFormat;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kIoFormat;
    } catch (const LobeTruncatedError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

} // namespace csar::cli
