#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csar/core_model.hpp"

namespace csar {

template <typename Scalar>
struct DesignReport {
    Scalar delta_r = 0;             ///< range resolution, m
    Scalar delta_theta_max = 0;     ///< worst-case Nyquist angular step, rad
    Scalar angular_resolution = 0;  ///< rad
    Scalar rcm_extent = 0;          ///< m
    bool monostatic_ok = true;
};

/// c / (2 b).
template <typename Scalar>
Scalar range_resolution(const RadarParams<Scalar>& params) {
    if (!(params.b > 0)) throw ValidationError("range_resolution: bandwidth must be > 0");
    return params.c / (Scalar(2) * params.b);
}

/// Largest angular step meeting the Nyquist rate for every target azimuth:
/// c / (r (f_max - f_min)).
template <typename Scalar>
Scalar max_angular_spacing(Scalar track_radius, Scalar f_min, Scalar f_max, Scalar c = Scalar(kSpeedOfLight)) {
    if (!(f_max > f_min)) throw ValidationError("max_angular_spacing: need f_max > f_min");
    if (!(track_radius > 0)) throw ValidationError("max_angular_spacing: track radius must be > 0");
    return c / (track_radius * (f_max - f_min));
}

/// Angular step bound for a target at `target_azimuth`: c / (r |sin 2θ| (f_max - f_min)).
/// Throws where sin 2θ vanishes, since the bound places no constraint there.
template <typename Scalar>
Scalar angular_spacing_at(Scalar track_radius, Scalar f_min, Scalar f_max, Scalar target_azimuth,
                          Scalar c = Scalar(kSpeedOfLight)) {
    const Scalar s = std::abs(std::sin(Scalar(2) * target_azimuth));
    if (!(s > Scalar(64) * std::numeric_limits<Scalar>::epsilon()))
        throw ValidationError("angular_spacing_at: sin(2*azimuth) = 0, bound is unconstrained");
    return max_angular_spacing(track_radius, f_min, f_max, c) / s;
}

/// lambda / (2 r theta_3dB): the linear-SAR formula with L_s = r * theta_3dB.
template <typename Scalar>
Scalar angular_resolution(const RadarParams<Scalar>& params, Scalar track_radius, Scalar beamwidth_3db) {
    if (!(beamwidth_3db > 0)) throw ValidationError("angular_resolution: beamwidth must be > 0");
    if (!(track_radius > 0)) throw ValidationError("angular_resolution: track radius must be > 0");
    return params.wavelength() / (Scalar(2) * track_radius * beamwidth_3db);
}

/// Spread of the slant range seen over an exposure of `exposure` rad centred on the target.
template <typename Scalar>
Scalar rcm_extent(Scalar target_range, Scalar track_radius, Scalar exposure) {
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    if (!(exposure >= 0) || exposure > two_pi) throw ValidationError("rcm_extent: exposure must be in (0, 2*pi]");
    const Scalar half = std::min(exposure / Scalar(2), std::numbers::pi_v<Scalar>);
    return slant_range(target_range, Scalar(0), track_radius, half) -
           slant_range(target_range, Scalar(0), track_radius, Scalar(0));
}

namespace detail {

/// Paraxial azimuth wavenumber k cos(theta_t); used by tests to re-derive the spacing bounds.
template <typename Scalar>
Scalar azimuth_wavenumber(Scalar k, Scalar target_azimuth) {
    return k * std::cos(target_azimuth);
}

} // namespace detail

/// Collects every design quantity for one configuration. `exposure` is the
/// angle over which a target is illuminated (the 3 dB beamwidth, or the
/// aperture span for an isotropic antenna).
template <typename Scalar>
DesignReport<Scalar> design_report(const RadarParams<Scalar>& params, Scalar track_radius, Scalar exposure,
                                   Scalar reference_range, Scalar alpha = Scalar(1)) {
    params.validate();
    DesignReport<Scalar> r;
    r.delta_r = range_resolution(params);
    r.delta_theta_max = max_angular_spacing(track_radius, params.f_min(), params.f_max(), params.c);
    r.angular_resolution = angular_resolution(params, track_radius, exposure);
    r.rcm_extent = rcm_extent(reference_range, track_radius, std::min(exposure, 2 * std::numbers::pi_v<Scalar>));
    r.monostatic_ok = monostatic_valid(params, reference_range, alpha);
    return r;
}

using DesignReportd = DesignReport<double>;

} // namespace csar
