#include <doctest.h>

#include <random>

#include "csar/csar.hpp"
#include "support.hpp"

using namespace csar;

namespace {

MatrixX<double> floor_image(Eigen::Index rows, Eigen::Index cols, double floor) {
    return MatrixX<double>::Constant(rows, cols, floor);
}

struct SimulatedPair {
    PolarGridd grid;
    MatrixX<double> db;
};

SimulatedPair simulate_pair(PolarPoint<double> a, PolarPoint<double> b, const PolarGridd& grid) {
    const double centre = 0.5 * (a.azimuth + b.azimuth);
    const auto ap = Apertured::make_uniform(0.13, centre - deg2rad(90.0), deg2rad(0.2), 900);
    Scened scene;
    scene.targets.push_back({a.range, a.azimuth, {1.0, 0.0}});
    scene.targets.push_back({b.range, b.azimuth, {1.0, 0.0}});
    const auto data = simulate_scene(test::reference_radar(), ap, scene);
    return {grid, to_db_image(reconstruct_image(data, grid), -80.0)};
}

} // namespace

TEST_CASE("find_peak: tie-break and single bright cell") {
    const auto flat = floor_image(5, 7, -3.0);
    const auto p = find_peak(flat);
    CHECK(p.range_index == 0);
    CHECK(p.angle_index == 0);

    auto img = floor_image(5, 7, -60.0);
    img(3, 2) = 0.0;
    const auto q = find_peak(img);
    CHECK(q.range_index == 3);
    CHECK(q.angle_index == 2);
    CHECK(q.value == 0.0);

    img(1, 5) = 0.0;  // equal value at a lower range index wins
    CHECK(find_peak(img).range_index == 1);
    CHECK_THROWS_AS(find_peak(MatrixX<double>(0, 0)), ValidationError);
}

TEST_CASE("find_peak is invariant under positive affine rescaling") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-60.0, 0.0), scale(0.1, 10.0), shift(-50.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        MatrixX<double> img(9, 11);
        for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = std::round(u(rng));
        const auto p = find_peak(img);
        const double a = scale(rng), b = shift(rng);
        const MatrixX<double> rescaled = (img.array() * a + b).matrix();
        const auto q = find_peak(rescaled);
        CHECK(p.range_index == q.range_index);
        CHECK(p.angle_index == q.angle_index);
    }
}

TEST_CASE("mainlobe_width: constructed lobes") {
    const PolarGridd grid{1.0, 2.0, 10, 0.0, 1.0, 20};

    // 2-cell plateau 6 dB above its surroundings: -3 dB falls on the cell edges
    auto plateau = floor_image(10, 20, -6.0);
    plateau.block(4, 8, 2, 2).setZero();
    CHECK(mainlobe_width(plateau, grid, Axis::Range) == doctest::Approx(2 * grid.range_step()).epsilon(1e-14));
    CHECK(mainlobe_width(plateau, grid, Axis::Angle) == doctest::Approx(2 * grid.angle_step()).epsilon(1e-14));

    // triangle with 2 dB per cell: crossings 1.5 cells either side
    MatrixX<double> tri(10, 20);
    for (Eigen::Index i = 0; i < 10; ++i)
        for (Eigen::Index j = 0; j < 20; ++j) tri(i, j) = -2.0 * double(std::abs(i - 5) + std::abs(j - 10));
    CHECK(mainlobe_width(tri, grid, Axis::Range) == doctest::Approx(3 * grid.range_step()).epsilon(1e-14));
    CHECK(mainlobe_width(tri, grid, Axis::Angle) == doctest::Approx(3 * grid.angle_step()).epsilon(1e-14));

    // invariant under a global dB offset
    const MatrixX<double> shifted = (tri.array() - 17.25).matrix();
    CHECK(mainlobe_width(shifted, grid, Axis::Angle) == doctest::Approx(3 * grid.angle_step()).epsilon(1e-14));
}

TEST_CASE("mainlobe_width: lobe truncated by grid edge") {
    const PolarGridd grid{1.0, 2.0, 4, 0.0, 1.0, 4};
    auto img = floor_image(4, 4, -1.0);
    img(0, 2) = 0.0;
    CHECK_THROWS_AS(mainlobe_width(img, grid, Axis::Range), LobeTruncatedError);
    CHECK_THROWS_AS(mainlobe_width(img, grid, Axis::Angle), LobeTruncatedError);
}

TEST_CASE("peak_sidelobe_ratio on a constructed cut") {
    MatrixX<double> img = floor_image(1, 15, -40.0);
    const double cut[15] = {-40, -30, -13.2, -20, -35, -10, -3, 0, -3, -10, -30, -17.5, -25, -40, -40};
    for (int j = 0; j < 15; ++j) img(0, j) = cut[j];
    CHECK(peak_sidelobe_ratio(img) == doctest::Approx(-13.2));

    MatrixX<double> mono(1, 5);
    mono << -9, -3, 0, -4, -8;
    CHECK(peak_sidelobe_ratio(mono) == doctest::Approx(-9.0));
}

TEST_CASE("two_target_resolved: well separated along range") {
    const double dr = range_resolution(test::reference_radar());
    const PolarPoint<double> a{2.0, deg2rad(45.0)}, b{2.0 + 10 * dr, deg2rad(45.0)};
    const PolarGridd grid{1.7, 2.8, 110, deg2rad(43.0), deg2rad(47.0), 40};
    const auto sim = simulate_pair(a, b, grid);
    const auto result = analyze_two_targets(sim.db, grid, a, b);
    CHECK(result.resolved);
    CHECK(two_target_resolved(sim.db, grid, b, a));
    CHECK(cell_distance(grid, result.peak_a, result.peak_b) == doctest::Approx(10 * dr).epsilon(0.05));
}

TEST_CASE("two_target_resolved: coincident targets form one lobe") {
    const PolarPoint<double> a{2.0, deg2rad(45.0)};
    const PolarGridd grid{1.85, 2.15, 30, deg2rad(44.0), deg2rad(46.0), 20};
    const auto sim = simulate_pair(a, a, grid);
    CHECK_FALSE(two_target_resolved(sim.db, grid, a, a));
    CHECK_FALSE(two_target_resolved(sim.db, grid, a, PolarPoint<double>{2.01, deg2rad(45.1)}));
}

TEST_CASE("two_target_resolved is symmetric in its positions") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const PolarGridd grid{1.0, 2.0, 40, 0.0, 1.0, 40};
    for (int trial = 0; trial < 100; ++trial) {
        // two Gaussian blobs plus noise
        const double r1 = 1.2 + 0.6 * u(rng), t1 = 0.2 + 0.6 * u(rng);
        const double r2 = 1.2 + 0.6 * u(rng), t2 = 0.2 + 0.6 * u(rng);
        MatrixX<double> lin(40, 40);
        for (Eigen::Index i = 0; i < 40; ++i)
            for (Eigen::Index j = 0; j < 40; ++j) {
                const double r = grid.range_at(i), t = grid.angle_at(j);
                lin(i, j) = std::exp(-(std::pow(r - r1, 2) + std::pow(t - t1, 2)) / 0.004) +
                            0.8 * std::exp(-(std::pow(r - r2, 2) + std::pow(t - t2, 2)) / 0.004) + 1e-4 * u(rng);
            }
        const MatrixX<double> db = (20.0 * (lin.array() / lin.maxCoeff()).log10()).matrix();
        const PolarPoint<double> a{r1, t1}, b{r2, t2};
        CHECK(two_target_resolved(db, grid, a, b) == two_target_resolved(db, grid, b, a));
    }
}
