#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "csar/core_model.hpp"
#include "csar/simulator.hpp"

namespace csar::io {

/// Optional design-calculator inputs; unset fields fall back to scene-derived defaults.
struct DesignInputs {
    std::optional<double> reference_range;  ///< m
    std::optional<double> exposure;         ///< rad
    double alpha = 1.0;
};

/// Everything needed to simulate, reconstruct and size a measurement, parsed
/// from a JSON document. Angles are degrees in the file and radians here.
struct SceneConfig {
    std::string description;
    RadarParamsd radar;
    Apertured aperture;
    AntennaModeld antenna;
    NoiseSpecd noise;
    Scened scene;
    std::optional<PolarGridd> grid;
    DesignInputs design;

    /// Range used for the RCM and monostatic checks.
    double reference_range() const;
    /// Illumination angle of a target: antenna beamwidth, or the aperture span.
    double exposure() const;
};

SceneConfig parse_scene_config(const std::string& text);
SceneConfig load_scene_config(const std::filesystem::path& path);

/// Parses "rmin,rmax,nr,tmin,tmax,nt" (angles in degrees). Malformed text
/// throws FormatError; out-of-range values throw ValidationError.
PolarGridd parse_grid_spec(const std::string& spec);

} // namespace csar::io
