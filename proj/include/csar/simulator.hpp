#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "csar/core_model.hpp"
#include "csar/parallel.hpp"

namespace csar {

enum class AntennaKind { Isotropic, GatedCosine };

/// Fixed-mount ("scan mode") antenna: the boresight keeps a constant angle to
/// the outward radial of the track.
template <typename Scalar>
struct AntennaModel {
    AntennaKind kind = AntennaKind::Isotropic;
    Scalar beamwidth_3db = deg2rad(Scalar(100));
    Scalar boresight_offset = 0;

    static AntennaModel isotropic() { return {}; }
    static AntennaModel gated_cosine(Scalar beamwidth_3db, Scalar boresight_offset = 0) {
        return {AntennaKind::GatedCosine, beamwidth_3db, boresight_offset};
    }

    void validate() const {
        if (kind == AntennaKind::GatedCosine && !(beamwidth_3db > 0))
            throw ValidationError("antenna: beamwidth_3db must be > 0");
        if (!std::isfinite(boresight_offset)) throw ValidationError("antenna: boresight offset must be finite");
    }
};

template <typename Scalar>
struct NoiseSpec {
    Scalar snr_db = std::numeric_limits<Scalar>::infinity();
    std::uint64_t seed = 0;
    /// Signal power the SNR refers to. Unset: mean per-sample power of the data.
    std::optional<Scalar> reference_power;

    bool enabled() const { return std::isfinite(snr_db); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Wraps an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    a = std::remainder(a, two_pi);
    if (a <= -std::numbers::pi_v<Scalar>) a += two_pi;
    return a;
}

} // namespace detail

/// One noiseless chirp: element i = reflectivity * exp(+j k_i slant).
template <typename Scalar>
ComplexVector<Scalar> simulate_chirp(const RadarParams<Scalar>& params, const WavenumberVector<Scalar>& k,
                                     Scalar slant, std::complex<Scalar> reflectivity) {
    if (k.size() != params.n_samples) throw ValidationError("simulate_chirp: wavenumber length != n_samples");
    if (!(slant >= 0)) throw ValidationError("simulate_chirp: slant range must be >= 0");
    ComplexVector<Scalar> out(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) out[i] = reflectivity * std::polar(Scalar(1), k[i] * slant);
    return out;
}

/// Amplitude weight of the antenna for a target seen at `target_bearing_from_radar`
/// (absolute direction, rad) by a radar at `radar_angle` on the track.
template <typename Scalar>
Scalar antenna_weight(const AntennaModel<Scalar>& antenna, Scalar radar_angle, Scalar target_bearing_from_radar) {
    if (antenna.kind == AntennaKind::Isotropic) return Scalar(1);
    const Scalar off_axis =
        std::abs(detail::wrap_angle(target_bearing_from_radar - (radar_angle + antenna.boresight_offset)));
    if (off_axis > antenna.beamwidth_3db) return Scalar(0);
    // cos(p * theta_3db / 2) = 1/sqrt(2)  =>  p = pi / (2 * theta_3db)
    const Scalar p = std::numbers::pi_v<Scalar> / (2 * antenna.beamwidth_3db);
    const Scalar w = std::cos(p * off_axis);
    return w > Scalar(0) ? w : Scalar(0);
}

/// Adds circular complex Gaussian noise. Each column draws from its own
/// seed-derived stream, so the result does not depend on worker count.
template <typename Scalar>
DataMatrix<Scalar> add_noise(const DataMatrix<Scalar>& data, const NoiseSpec<Scalar>& noise, unsigned workers = 0) {
    if (!noise.enabled()) return data;
    const Eigen::Index n = data.samples.rows();
    const Eigen::Index m_count = data.samples.cols();
    Scalar power;
    if (noise.reference_power) {
        power = *noise.reference_power;
    } else {
        power = data.samples.size() > 0 ? data.samples.cwiseAbs2().sum() / Scalar(data.samples.size()) : Scalar(0);
    }
    if (!(power >= 0) || !std::isfinite(power)) throw ValidationError("add_noise: reference power must be finite and >= 0");
    const Scalar variance = power / std::pow(Scalar(10), noise.snr_db / Scalar(10));
    const Scalar sigma = std::sqrt(variance / Scalar(2));

    DataMatrix<Scalar> out = data;
    if (sigma == Scalar(0)) return out;
    parallel_for(static_cast<std::size_t>(m_count), 16, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            std::mt19937_64 engine(detail::splitmix64(noise.seed ^ detail::splitmix64(m + 1)));
            std::normal_distribution<Scalar> gauss(Scalar(0), sigma);
            auto col = out.samples.col(static_cast<Eigen::Index>(m));
            for (Eigen::Index i = 0; i < n; ++i) {
                const Scalar re = gauss(engine);
                const Scalar im = gauss(engine);
                col[i] += std::complex<Scalar>(re, im);
            }
        }
    });
    return out;
}

/// Raw data for `scene` observed over `aperture`: per column, the antenna-weighted
/// superposition of every target's chirp, followed by optional noise.
template <typename Scalar>
DataMatrix<Scalar> simulate_scene(const RadarParams<Scalar>& params, const Aperture<Scalar>& aperture,
                                  const Scene<Scalar>& scene,
                                  const AntennaModel<Scalar>& antenna = AntennaModel<Scalar>::isotropic(),
                                  const NoiseSpec<Scalar>& noise = {}, unsigned workers = 0) {
    params.validate();
    aperture.validate();
    scene.validate();
    antenna.validate();

    const WavenumberVector<Scalar> k = wavenumber_vector(params);
    const Eigen::Index n = params.n_samples;
    const Eigen::Index m_count = aperture.size();

    DataMatrix<Scalar> data{params, aperture, ComplexMatrix<Scalar>::Zero(n, m_count)};
    parallel_for(static_cast<std::size_t>(m_count), 8, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t mm = begin; mm < end; ++mm) {
            const auto m = static_cast<Eigen::Index>(mm);
            const Scalar theta = aperture.angles[m];
            const Scalar radar_x = aperture.radius * std::cos(theta);
            const Scalar radar_y = aperture.radius * std::sin(theta);
            auto col = data.samples.col(m);
            for (const auto& t : scene.targets) {
                Scalar weight = Scalar(1);
                if (antenna.kind != AntennaKind::Isotropic) {
                    const Scalar bearing = std::atan2(t.range * std::sin(t.azimuth) - radar_y,
                                                      t.range * std::cos(t.azimuth) - radar_x);
                    weight = antenna_weight(antenna, theta, bearing);
                    if (weight == Scalar(0)) continue;
                }
                const Scalar slant = slant_range(t.range, t.azimuth, aperture.radius, theta);
                const std::complex<Scalar> amp = weight * t.reflectivity;
                for (Eigen::Index i = 0; i < n; ++i) col[i] += amp * std::polar(Scalar(1), k[i] * slant);
            }
        }
    });
    return add_noise(data, noise, workers);
}

using AntennaModeld = AntennaModel<double>;
using NoiseSpecd = NoiseSpec<double>;

} // namespace csar
