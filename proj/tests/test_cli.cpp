#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "csar");
    std::ostringstream out, err;
    const int code = csar::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scene(const char* name) {
    return std::string(CSAR_SCENES_DIR) + "/" + name;
}

std::string tmp(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("cli design prints the sampling and resolution figures") {
    const auto r = run({"design", "--config", scene("one_target.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("delta_R = 0.0430 m") != std::string::npos);
    CHECK(r.out.find("delta_theta_max = 37.8595 deg") != std::string::npos);
    CHECK(r.out.find("rcm_extent = 0.0490 m") != std::string::npos);
    CHECK(r.out.find("monostatic_ok = true") != std::string::npos);
}

TEST_CASE("cli simulate, reconstruct and psf find the configured target") {
    const auto capture = tmp("csar_cli_one.bin");
    const auto image = tmp("csar_cli_one.csv");
    REQUIRE(run({"simulate", "--scene", scene("one_target.json"), "--out", capture}).code == 0);
    const auto rec = run({"reconstruct", "--in", capture, "--grid", "1.8,2.2,40,43,47,40", "--out", image,
                          "--format", "csv", "--floor-db", "-80"});
    REQUIRE(rec.code == 0);
    const auto psf = run({"psf", "--in", image, "--truth", "2.0,45"});
    REQUIRE(psf.code == 0);
    CHECK(psf.out.find("peak_position = 2.0050 m, 45.050 deg") != std::string::npos);
    CHECK(psf.out.find("pslr_db") != std::string::npos);

    const auto pgm = tmp("csar_cli_one.pgm");
    CHECK(run({"reconstruct", "--in", capture, "--grid", "1.8,2.2,40,43,47,40", "--out", pgm, "--format", "pgm"}).code == 0);
    CHECK(slurp(pgm).rfind("P5\n40 40\n255\n", 0) == 0);
    for (const auto& f : {capture, image, pgm}) std::filesystem::remove(f);
}

TEST_CASE("cli outputs are deterministic across runs and worker counts") {
    const auto a = tmp("csar_det_a.bin"), b = tmp("csar_det_b.bin");
    REQUIRE(run({"simulate", "--scene", scene("three_targets.json"), "--out", a}).code == 0);
    REQUIRE(run({"simulate", "--scene", scene("three_targets.json"), "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));

    const auto ia = tmp("csar_det_a.csv"), ib = tmp("csar_det_b.csv");
    setenv("CSAR_THREADS", "1", 1);
    REQUIRE(run({"reconstruct", "--in", a, "--grid", "1.5,2.0,10,20,30,12", "--out", ia}).code == 0);
    setenv("CSAR_THREADS", "5", 1);
    REQUIRE(run({"reconstruct", "--in", a, "--grid", "1.5,2.0,10,20,30,12", "--out", ib}).code == 0);
    unsetenv("CSAR_THREADS");
    CHECK(slurp(ia) == slurp(ib));
    for (const auto& f : {a, b, ia, ib}) std::filesystem::remove(f);
}

TEST_CASE("cli exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"design"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto missing = run({"design", "--config", "/nonexistent/scene.json"});
    CHECK(missing.code == 3);
    CHECK(missing.err.find("i/o error") != std::string::npos);

    const auto capture = tmp("csar_cli_codes.bin");
    REQUIRE(run({"simulate", "--scene", scene("one_target.json"), "--out", capture}).code == 0);
    const auto bad_grid = run({"reconstruct", "--in", capture, "--grid", "3,2,10,0,90,10", "--out", tmp("x.csv")});
    CHECK(bad_grid.code == 4);
    CHECK(bad_grid.err.find("validation error") != std::string::npos);
    CHECK(run({"reconstruct", "--in", capture, "--grid", "0,2,10,0,90", "--out", tmp("x.csv")}).code == 3);
    CHECK(run({"reconstruct", "--in", capture, "--grid", "0,2,10,0,90,10", "--out", tmp("x.csv"), "--format", "png"})
              .code == 4);

    {
        std::ofstream out(capture, std::ios::binary);
        out << "XSAR garbage";
    }
    CHECK(run({"reconstruct", "--in", capture, "--grid", "0,2,10,0,90,10", "--out", tmp("x.csv")}).code == 3);
    std::filesystem::remove(capture);

    const auto bad_scene = tmp("csar_bad_scene.json");
    {
        std::ofstream out(bad_scene);
        out << R"({"radar": {"fc_hz": 79e9, "bandwidth_hz": 3.49e9, "n_samples": 128, "colour": 1},
                   "aperture": {"radius_m": 0.13, "theta_start_deg": 0, "theta_step_deg": 0.2, "n_angles": 10}})";
    }
    CHECK(run({"simulate", "--scene", bad_scene, "--out", tmp("y.bin")}).code == 4);
    std::filesystem::remove(bad_scene);
}

TEST_CASE("cli bench reports throughput") {
    const auto r = run({"bench", "--scene", scene("one_target.json"), "--grid", "1.9,2.1,4,44,46,4", "--repeat", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("cells_per_second = ") != std::string::npos);
    CHECK(r.out.find("samples_per_second = ") != std::string::npos);
    CHECK(r.out.find("relative_mad = ") != std::string::npos);
    CHECK(r.out.find("run 2:") != std::string::npos);
}
