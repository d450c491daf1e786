#include <doctest.h>

#include "csar/simulator.hpp"
#include "support.hpp"

using namespace csar;

namespace {

double wrapped_difference(double a, double b) {
    return std::abs(std::remainder(a - b, 2 * std::numbers::pi));
}

} // namespace

TEST_CASE("simulate_chirp: trivial reflectivities and phases") {
    const auto p = test::reference_radar();
    const auto k = wavenumber_vector(p);
    CHECK(simulate_chirp(p, k, 2.3, {0.0, 0.0}).cwiseAbs().maxCoeff() == 0.0);
    const auto ones = simulate_chirp(p, k, 0.0, {1.0, 0.0});
    for (Eigen::Index i = 0; i < ones.size(); ++i) CHECK(ones[i] == std::complex<double>(1.0, 0.0));

    // k_1 * 1.87 mod 2pi from a 40-digit evaluation
    const auto s = simulate_chirp(p, k, 1.87, {1.0, 0.0});
    double phase = std::arg(s[0]);
    if (phase < 0) phase += 2 * std::numbers::pi;
    CHECK(phase == doctest::Approx(4.8951173768646947).epsilon(1e-9));
    CHECK(phase == doctest::Approx(4.90).epsilon(2e-3));
    CHECK_THROWS_AS(simulate_chirp(p, k, -1.0, {1.0, 0.0}), ValidationError);
}

TEST_CASE("antenna_weight: isotropic and gated cosine") {
    const auto iso = AntennaModeld::isotropic();
    CHECK(antenna_weight(iso, 0.3, 2.9) == 1.0);

    const auto ant = AntennaModeld::gated_cosine(deg2rad(100.0));
    CHECK(antenna_weight(ant, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(antenna_weight(ant, 0.0, deg2rad(50.0)) == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(antenna_weight(ant, 0.0, deg2rad(-50.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(antenna_weight(ant, 0.0, deg2rad(120.0)) == 0.0);
    CHECK(antenna_weight(ant, 0.0, deg2rad(100.0)) == doctest::Approx(0.0).epsilon(1e-12));
    // off-axis angle is measured from the rotated boresight and wraps
    CHECK(antenna_weight(ant, deg2rad(350.0), deg2rad(10.0)) == doctest::Approx(std::cos(0.1 * std::numbers::pi)));
    const auto tilted = AntennaModeld::gated_cosine(deg2rad(100.0), deg2rad(30.0));
    CHECK(antenna_weight(tilted, 0.0, deg2rad(30.0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(AntennaModeld::gated_cosine(0.0).validate(), ValidationError);
}

TEST_CASE("simulate_scene: empty and cancelling scenes give zero data") {
    const auto p = test::reference_radar();
    const auto ap = Apertured::make_uniform(0.13, 0.0, deg2rad(0.2), 50);
    const auto empty = simulate_scene(p, ap, Scened{});
    CHECK(empty.samples.rows() == 128);
    CHECK(empty.samples.cols() == 50);
    CHECK(empty.samples.cwiseAbs().maxCoeff() == 0.0);

    Scened pair;
    pair.targets.push_back({2.0, 0.7, {0.3, -0.4}});
    pair.targets.push_back({2.0, 0.7, {-0.3, 0.4}});
    CHECK(simulate_scene(p, ap, pair).samples.cwiseAbs().maxCoeff() == 0.0);

    Apertured none;
    none.radius = 0.13;
    CHECK_THROWS_AS(simulate_scene(p, none, pair), ValidationError);
}

TEST_CASE("simulate_scene: one target has unit modulus and the slant-range phase history") {
    const auto p = test::reference_radar();
    const auto ap = Apertured::make_uniform(0.13, deg2rad(-45.0), deg2rad(0.2), 900);
    Scened scene;
    scene.targets.push_back({2.0, deg2rad(45.0), {1.0, 0.0}});
    const auto data = simulate_scene(p, ap, scene);
    const auto k = wavenumber_vector(p);
    CHECK((data.samples.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    for (Eigen::Index m = 0; m < data.samples.cols(); m += 37) {
        const double slant = slant_range(2.0, deg2rad(45.0), 0.13, ap.angles[m]);
        for (Eigen::Index i = 0; i < data.samples.rows(); i += 9)
            CHECK(wrapped_difference(std::arg(data.samples(i, m)), k[i] * slant) < 1e-9);
        // matches the single-chirp model exactly
        CHECK(data.samples.col(m) == simulate_chirp(p, k, slant, {1.0, 0.0}));
    }
}

TEST_CASE("simulate_scene: gated antenna blanks targets behind the radar") {
    const auto p = test::reference_radar();
    const auto ap = Apertured::make_uniform(0.13, deg2rad(170.0), deg2rad(1.0), 21);
    Scened scene;
    scene.targets.push_back({2.0, 0.0, {1.0, 0.0}});
    const auto data = simulate_scene(p, ap, scene, AntennaModeld::gated_cosine(deg2rad(100.0)));
    CHECK(data.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("add_noise: infinite SNR, determinism, variance") {
    const auto p = test::reference_radar();
    const auto ap = Apertured::make_uniform(0.13, 0.0, deg2rad(0.2), 900);
    Scened scene;
    scene.targets.push_back({2.0, 0.5, {1.0, 0.0}});
    const auto clean = simulate_scene(p, ap, scene);

    CHECK(add_noise(clean, NoiseSpecd{}).samples == clean.samples);

    NoiseSpecd noise;
    noise.snr_db = 10.0;
    noise.seed = 42;
    const auto a = add_noise(clean, noise, 1);
    const auto b = add_noise(clean, noise, 4);
    CHECK(a.samples == b.samples);
    noise.seed = 43;
    CHECK(add_noise(clean, noise).samples != a.samples);

    // zero signal with a unit reference power at 0 dB: sample variance near 1
    const auto silent = simulate_scene(p, ap, Scened{});
    NoiseSpecd unit;
    unit.snr_db = 0.0;
    unit.seed = 1;
    unit.reference_power = 1.0;
    const auto n = add_noise(silent, unit);
    const double variance = n.samples.cwiseAbs2().mean();
    CHECK(variance == doctest::Approx(1.0).epsilon(0.05));
    const std::complex<double> mean = n.samples.mean();
    CHECK(std::abs(mean) < 0.02);

    // SNR relative to the data's own mean power
    const auto noisy = add_noise(clean, NoiseSpecd{20.0, 3, std::nullopt});
    CHECK((noisy.samples - clean.samples).cwiseAbs2().mean() == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("range cell migration exceeds one range cell for the bench geometry") {
    double lo = 1e9, hi = 0;
    for (int s = -500; s <= 500; ++s) {
        const double sl = slant_range(2.0, 0.0, 0.13, deg2rad(0.1 * s));
        lo = std::min(lo, sl);
        hi = std::max(hi, sl);
    }
    CHECK(hi - lo == doctest::Approx(0.049).epsilon(0.02));
    CHECK(hi - lo > 0.043);
}
