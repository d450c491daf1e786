#include "csar/io/scene_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "csar/errors.hpp"

namespace csar::io {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ValidationError(std::string(where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

double number(const json& obj, std::string_view where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(std::string(where) + ": missing \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(std::string(where) + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& obj, std::string_view where, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, where, key) : fallback;
}

Eigen::Index count(const json& obj, std::string_view where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(std::string(where) + ": missing \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(std::string(where) + "." + key + ": expected a non-negative integer");
    return static_cast<Eigen::Index>(v.get<long long>());
}

RadarParamsd parse_radar(const json& j) {
    reject_unknown(j, "radar",
                   {"fc_hz", "bandwidth_hz", "n_samples", "chirp_time_s", "max_range_m", "c_mps",
                    "tx_rx_separation_m"});
    RadarParamsd p;
    p.fc = number(j, "radar", "fc_hz");
    p.b = number(j, "radar", "bandwidth_hz");
    p.n_samples = count(j, "radar", "n_samples");
    p.chirp_time = number_or(j, "radar", "chirp_time_s", 0.0);
    p.c = number_or(j, "radar", "c_mps", kSpeedOfLight);
    p.max_range = number_or(j, "radar", "max_range_m", double(p.n_samples) * p.c / (2 * p.b));
    p.d = number_or(j, "radar", "tx_rx_separation_m", 0.0);
    p.validate();
    return p;
}

Apertured parse_aperture(const json& j) {
    reject_unknown(j, "aperture", {"radius_m", "theta_start_deg", "theta_step_deg", "n_angles"});
    auto ap = Apertured::make_uniform(number(j, "aperture", "radius_m"),
                                      deg2rad(number(j, "aperture", "theta_start_deg")),
                                      deg2rad(number(j, "aperture", "theta_step_deg")),
                                      count(j, "aperture", "n_angles"));
    ap.validate();
    return ap;
}

AntennaModeld parse_antenna(const json& j) {
    reject_unknown(j, "antenna", {"kind", "beamwidth_3db_deg", "boresight_offset_deg"});
    AntennaModeld a;
    const std::string kind = j.value("kind", std::string("isotropic"));
    if (kind == "isotropic") {
        a.kind = AntennaKind::Isotropic;
    } else if (kind == "gated_cosine") {
        a.kind = AntennaKind::GatedCosine;
    } else {
        throw ValidationError("antenna.kind: expected \"isotropic\" or \"gated_cosine\"");
    }
    a.beamwidth_3db = deg2rad(number_or(j, "antenna", "beamwidth_3db_deg", 100.0));
    a.boresight_offset = deg2rad(number_or(j, "antenna", "boresight_offset_deg", 0.0));
    a.validate();
    return a;
}

NoiseSpecd parse_noise(const json& j) {
    reject_unknown(j, "noise", {"snr_db", "seed", "reference_power"});
    NoiseSpecd n;
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) n.snr_db = number(j, "noise", "snr_db");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ValidationError("noise.seed: expected an unsigned integer");
        n.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("reference_power")) n.reference_power = number(j, "noise", "reference_power");
    return n;
}

PointTargetd parse_target(const json& j, std::size_t index) {
    const std::string where = "targets[" + std::to_string(index) + "]";
    reject_unknown(j, where, {"range_m", "azimuth_deg", "magnitude", "dbsm", "phase_deg", "label"});
    if (j.contains("magnitude") == j.contains("dbsm"))
        throw ValidationError(where + ": give exactly one of \"magnitude\" or \"dbsm\"");
    const double magnitude = j.contains("dbsm") ? std::pow(10.0, number(j, where, "dbsm") / 20.0)
                                                : number(j, where, "magnitude");
    if (!(magnitude >= 0)) throw ValidationError(where + ": magnitude must be >= 0");
    PointTargetd t;
    t.range = number(j, where, "range_m");
    t.azimuth = deg2rad(number(j, where, "azimuth_deg"));
    t.reflectivity = std::polar(magnitude, deg2rad(number_or(j, where, "phase_deg", 0.0)));
    return t;
}

PolarGridd parse_grid(const json& j) {
    reject_unknown(j, "grid", {"r_min_m", "r_max_m", "n_r", "theta_min_deg", "theta_max_deg", "n_theta"});
    PolarGridd g;
    g.r_min = number(j, "grid", "r_min_m");
    g.r_max = number(j, "grid", "r_max_m");
    g.n_r = count(j, "grid", "n_r");
    g.theta_min = deg2rad(number(j, "grid", "theta_min_deg"));
    g.theta_max = deg2rad(number(j, "grid", "theta_max_deg"));
    g.n_theta = count(j, "grid", "n_theta");
    g.validate();
    return g;
}

DesignInputs parse_design(const json& j) {
    reject_unknown(j, "design", {"reference_range_m", "exposure_deg", "alpha"});
    DesignInputs d;
    if (j.contains("reference_range_m")) d.reference_range = number(j, "design", "reference_range_m");
    if (j.contains("exposure_deg")) d.exposure = deg2rad(number(j, "design", "exposure_deg"));
    d.alpha = number_or(j, "design", "alpha", 1.0);
    if (!(d.alpha > 0)) throw ValidationError("design.alpha: must be > 0");
    if (d.reference_range && !(*d.reference_range > 0)) throw ValidationError("design.reference_range_m: must be > 0");
    if (d.exposure && !(*d.exposure > 0)) throw ValidationError("design.exposure_deg: must be > 0");
    return d;
}

} // namespace

double SceneConfig::reference_range() const {
    if (design.reference_range) return *design.reference_range;
    if (!scene.targets.empty() && scene.targets.front().range > 0) return scene.targets.front().range;
    return radar.max_range;
}

double SceneConfig::exposure() const {
    if (design.exposure) return *design.exposure;
    if (antenna.kind == AntennaKind::GatedCosine) return antenna.beamwidth_3db;
    const Eigen::Index m = aperture.size();
    return m > 1 ? std::abs(aperture.angles[m - 1] - aperture.angles[0]) + std::abs(aperture.angles[1] - aperture.angles[0])
                 : std::abs(aperture.uniform ? aperture.uniform->step : 0.0);
}

SceneConfig parse_scene_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(FormatErrorKind::Malformed, std::string("scene config: ") + e.what());
    }
    reject_unknown(j, "scene config",
                   {"description", "radar", "aperture", "antenna", "noise", "targets", "grid", "design"});
    if (!j.contains("radar")) throw ValidationError("scene config: missing \"radar\"");
    if (!j.contains("aperture")) throw ValidationError("scene config: missing \"aperture\"");

    SceneConfig cfg;
    if (j.contains("description")) {
        if (!j.at("description").is_string()) throw ValidationError("description: expected a string");
        cfg.description = j.at("description").get<std::string>();
    }
    cfg.radar = parse_radar(j.at("radar"));
    cfg.aperture = parse_aperture(j.at("aperture"));
    if (j.contains("antenna")) cfg.antenna = parse_antenna(j.at("antenna"));
    if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"));
    if (j.contains("targets")) {
        const auto& list = j.at("targets");
        if (!list.is_array()) throw ValidationError("targets: expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) cfg.scene.targets.push_back(parse_target(list[i], i));
    }
    cfg.scene.validate();
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    if (j.contains("design")) cfg.design = parse_design(j.at("design"));
    return cfg;
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scene_config(text.str());
}

PolarGridd parse_grid_spec(const std::string& spec) {
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw FormatError(FormatErrorKind::Malformed, "grid: cannot parse \"" + item + "\"");
        }
        if (used != item.size()) throw FormatError(FormatErrorKind::Malformed, "grid: cannot parse \"" + item + "\"");
        v.push_back(x);
    }
    if (v.size() != 6) throw FormatError(FormatErrorKind::Malformed, "grid: expected rmin,rmax,nr,tmin,tmax,nt");
    auto as_count = [](double x, const char* what) {
        if (!(x >= 1) || x != std::floor(x) || x > 1e9)
            throw ValidationError(std::string("grid: ") + what + " must be a positive integer");
        return static_cast<Eigen::Index>(x);
    };
    PolarGridd g;
    g.r_min = v[0];
    g.r_max = v[1];
    g.n_r = as_count(v[2], "nr");
    g.theta_min = deg2rad(v[3]);
    g.theta_max = deg2rad(v[4]);
    g.n_theta = as_count(v[5], "nt");
    g.validate();
    return g;
}

} // namespace csar::io
