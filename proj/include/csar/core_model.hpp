#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "csar/errors.hpp"

namespace csar {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
/// Column-major, so one chirp (one column) is contiguous.
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

inline constexpr double kSpeedOfLight = 299792458.0;

/// Reading of "much less than" in the monostatic validity condition.
inline constexpr double kMonostaticFraction = 0.1;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
    return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}
template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
    return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Chirp, carrier and sampling parameters of the FMCW front end.
template <typename Scalar>
struct RadarParams {
    Scalar fc = Scalar(79e9);         ///< carrier (centre) frequency, Hz
    Scalar b = Scalar(3.49e9);        ///< chirp bandwidth, Hz
    Eigen::Index n_samples = 128;     ///< fast-time samples per chirp
    Scalar chirp_time = Scalar(68.8e-6);
    Scalar max_range = Scalar(5.5);
    Scalar c = Scalar(kSpeedOfLight);
    Scalar d = Scalar(0);             ///< Tx/Rx separation, m

    void validate() const {
        if (!(fc > 0)) throw ValidationError("radar: fc must be > 0");
        if (!(b > 0) || !(b < 2 * fc)) throw ValidationError("radar: bandwidth must satisfy 0 < b < 2*fc");
        if (n_samples < 2) throw ValidationError("radar: n_samples must be >= 2");
        if (!(c > 0)) throw ValidationError("radar: c must be > 0");
        if (!(d >= 0)) throw ValidationError("radar: d must be >= 0");
        if (!std::isfinite(chirp_time) || !std::isfinite(max_range))
            throw ValidationError("radar: metadata must be finite");
    }

    Scalar f_min() const { return fc - b / 2; }
    Scalar f_max() const { return fc + b / 2; }
    Scalar wavelength() const { return c / fc; }
};

/// Circular track of radius `radius` and the ordered collection angles.
template <typename Scalar>
struct Aperture {
    struct Uniform {
        Scalar start;
        Scalar step;
    };

    Scalar radius = Scalar(0.13);
    VectorX<Scalar> angles;
    /// Set when the angles were generated as start + m*step.
    std::optional<Uniform> uniform;

    static Aperture make_uniform(Scalar radius, Scalar start, Scalar step, Eigen::Index count) {
        Aperture ap;
        ap.radius = radius;
        ap.angles.resize(count);
        for (Eigen::Index m = 0; m < count; ++m) ap.angles[m] = start + step * Scalar(m);
        ap.uniform = Uniform{start, step};
        return ap;
    }

    Eigen::Index size() const { return angles.size(); }

    void validate() const {
        if (!(radius > 0)) throw ValidationError("aperture: radius must be > 0");
        if (angles.size() < 1) throw ValidationError("aperture: at least one angle required");
        if (!angles.allFinite()) throw ValidationError("aperture: angles must be finite");
        if (angles.size() >= 2) {
            const bool increasing = angles[1] > angles[0];
            for (Eigen::Index m = 1; m < angles.size(); ++m) {
                const bool ok = increasing ? angles[m] > angles[m - 1] : angles[m] < angles[m - 1];
                if (!ok) throw ValidationError("aperture: angles must be strictly monotonic");
            }
        }
    }

    /// Columns [first, first + count) as a new aperture.
    Aperture slice(Eigen::Index first, Eigen::Index count) const {
        if (first < 0 || count < 1 || first + count > angles.size())
            throw ValidationError("aperture: slice out of range");
        Aperture ap;
        ap.radius = radius;
        ap.angles = angles.segment(first, count);
        if (uniform) ap.uniform = Uniform{uniform->start + Scalar(first) * uniform->step, uniform->step};
        return ap;
    }
};

template <typename Scalar>
struct PointTarget {
    Scalar range = 0;                      ///< from track centre, m
    Scalar azimuth = 0;                    ///< rad
    std::complex<Scalar> reflectivity{1, 0};
};

template <typename Scalar>
struct Scene {
    std::vector<PointTarget<Scalar>> targets;

    void validate() const {
        for (const auto& t : targets) {
            if (!(t.range >= 0) || !std::isfinite(t.range))
                throw ValidationError("scene: target range must be finite and >= 0");
            if (!std::isfinite(t.azimuth)) throw ValidationError("scene: target azimuth must be finite");
            if (!std::isfinite(t.reflectivity.real()) || !std::isfinite(t.reflectivity.imag()))
                throw ValidationError("scene: reflectivity must be finite");
        }
    }
};

/// k_i for i = 1..N, rad/m.
template <typename Scalar>
using WavenumberVector = VectorX<Scalar>;

/// Raw beat-signal samples: rows are fast-time samples, columns are aperture angles.
template <typename Scalar>
struct DataMatrix {
    RadarParams<Scalar> params;
    Aperture<Scalar> aperture;
    ComplexMatrix<Scalar> samples;

    void validate() const {
        params.validate();
        aperture.validate();
        if (samples.rows() != params.n_samples || samples.cols() != aperture.size())
            throw ValidationError("data: samples must be n_samples x n_angles (" +
                                  std::to_string(params.n_samples) + " x " + std::to_string(aperture.size()) +
                                  "), got " + std::to_string(samples.rows()) + " x " +
                                  std::to_string(samples.cols()));
        if (!samples.allFinite()) throw ValidationError("data: samples must be finite");
    }
};

/// Region of interest in polar coordinates, sampled at cell centres.
template <typename Scalar>
struct PolarGrid {
    Scalar r_min = 0;
    Scalar r_max = 1;
    Eigen::Index n_r = 1;
    Scalar theta_min = 0;
    Scalar theta_max = 1;
    Eigen::Index n_theta = 1;

    void validate() const {
        if (!std::isfinite(r_min) || !std::isfinite(r_max) || !std::isfinite(theta_min) ||
            !std::isfinite(theta_max))
            throw ValidationError("grid: bounds must be finite");
        if (!(r_min >= 0) || !(r_min < r_max)) throw ValidationError("grid: need 0 <= r_min < r_max");
        if (!(theta_min < theta_max)) throw ValidationError("grid: need theta_min < theta_max");
        if (n_r < 1 || n_theta < 1) throw ValidationError("grid: cell counts must be >= 1");
    }

    Scalar range_step() const { return (r_max - r_min) / Scalar(n_r); }
    Scalar angle_step() const { return (theta_max - theta_min) / Scalar(n_theta); }
    Scalar range_at(Eigen::Index l) const { return r_min + (Scalar(l) + Scalar(0.5)) * range_step(); }
    Scalar angle_at(Eigen::Index l) const { return theta_min + (Scalar(l) + Scalar(0.5)) * angle_step(); }
    Eigen::Index cells() const { return n_r * n_theta; }
};

/// Complex intensity per grid cell; rows index range, columns index angle.
template <typename Scalar>
struct Image {
    PolarGrid<Scalar> grid;
    ComplexMatrix<Scalar> values;
};

/// Distance from the radar at `radar_angle` on a track of radius `track_radius`
/// to a point at (`target_range`, `target_azimuth`).
template <typename Scalar>
Scalar slant_range(Scalar target_range, Scalar target_azimuth, Scalar track_radius, Scalar radar_angle) {
    using std::cos;
    using std::sqrt;
    const Scalar sq = target_range * target_range + track_radius * track_radius -
                      Scalar(2) * track_radius * target_range * cos(radar_angle - target_azimuth);
    // rounding can push the collinear case a hair below zero
    return sqrt(sq > Scalar(0) ? sq : Scalar(0));
}

/// k_i = 4*pi*(fc - b/2 + b*(i-1)/N)/c. Tolerates b = 0 (all elements equal).
template <typename Scalar>
WavenumberVector<Scalar> wavenumber_vector(const RadarParams<Scalar>& params) {
    if (!(params.fc > 0) || !(params.c > 0) || params.n_samples < 1 || !(params.b >= 0))
        throw ValidationError("wavenumber_vector: invalid radar parameters");
    const Scalar four_pi = Scalar(4) * std::numbers::pi_v<Scalar>;
    const Scalar n = Scalar(params.n_samples);
    WavenumberVector<Scalar> k(params.n_samples);
    for (Eigen::Index i = 0; i < params.n_samples; ++i)
        k[i] = four_pi * (params.fc - params.b / 2 + params.b * Scalar(i) / n) / params.c;
    return k;
}

/// True when d << sqrt(4*alpha*lambda*range), with "<<" read as d < fraction * sqrt(...).
template <typename Scalar>
bool monostatic_valid(const RadarParams<Scalar>& params, Scalar range, Scalar alpha,
                      Scalar fraction = Scalar(kMonostaticFraction)) {
    if (!(range > 0) || !(alpha > 0)) throw ValidationError("monostatic_valid: range and alpha must be > 0");
    using std::sqrt;
    return params.d < fraction * sqrt(Scalar(4) * alpha * (params.c / params.fc) * range);
}

using RadarParamsd = RadarParams<double>;
using Apertured = Aperture<double>;
using PointTargetd = PointTarget<double>;
using Scened = Scene<double>;
using DataMatrixd = DataMatrix<double>;
using PolarGridd = PolarGrid<double>;
using Imaged = Image<double>;

} // namespace csar
