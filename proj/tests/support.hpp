#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "csar/csar.hpp"

namespace csar::test {

/// Radar and track used throughout the measurements this toolkit reproduces.
inline RadarParamsd reference_radar() {
    RadarParamsd p;
    p.fc = 79e9;
    p.b = 3.49e9;
    p.n_samples = 128;
    p.chirp_time = 68.8e-6;
    p.max_range = 5.5;
    return p;
}

/// Eq.-by-definition reference: materializes the steering matrix with
/// std::exp and sums S .* conj(A) with Eigen. Independent of the blocked
/// recurrence in the production kernel.
inline std::complex<double> brute_force_cell(const DataMatrixd& data, double cell_range, double cell_azimuth) {
    const auto k = wavenumber_vector(data.params);
    ComplexMatrix<double> a(data.samples.rows(), data.samples.cols());
    for (Eigen::Index m = 0; m < a.cols(); ++m) {
        const double dx = data.aperture.radius * std::cos(data.aperture.angles[m]) - cell_range * std::cos(cell_azimuth);
        const double dy = data.aperture.radius * std::sin(data.aperture.angles[m]) - cell_range * std::sin(cell_azimuth);
        const double slant = std::hypot(dx, dy);
        for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, m) = std::exp(std::complex<double>(0, k[i] * slant));
    }
    return data.samples.cwiseProduct(a.conjugate()).sum();
}

/// Small random instance for property checks.
struct RandomInstance {
    RadarParamsd params;
    Apertured aperture;
    Scened scene;
};

inline RandomInstance random_instance(std::mt19937_64& rng, Eigen::Index max_n = 32, Eigen::Index max_m = 64) {
    std::uniform_int_distribution<Eigen::Index> n_dist(2, max_n), m_dist(1, max_m);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomInstance inst;
    inst.params.fc = 60e9 + 20e9 * u(rng);
    inst.params.b = 0.5e9 + 3e9 * u(rng);
    inst.params.n_samples = n_dist(rng);
    const Eigen::Index m = m_dist(rng);
    inst.aperture = Apertured::make_uniform(0.05 + 0.2 * u(rng), -1.0 + 2.0 * u(rng), deg2rad(0.1 + 2.0 * u(rng)), m);
    const int targets = 1 + int(u(rng) * 3);
    for (int t = 0; t < targets; ++t)
        inst.scene.targets.push_back({0.5 + 4.0 * u(rng), 2 * std::numbers::pi * u(rng),
                                      std::polar(0.1 + u(rng), 2 * std::numbers::pi * u(rng))});
    return inst;
}

inline PolarGridd random_grid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PolarGridd g;
    g.r_min = 0.5 + u(rng);
    g.r_max = g.r_min + 0.1 + u(rng);
    g.n_r = 1 + Eigen::Index(u(rng) * 6);
    g.theta_min = u(rng);
    g.theta_max = g.theta_min + 0.05 + u(rng);
    g.n_theta = 1 + Eigen::Index(u(rng) * 6);
    return g;
}

inline double max_abs_diff(const ComplexMatrix<double>& a, const ComplexMatrix<double>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace csar::test
