#include "pnt/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace pnt {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void read_vec3(const json& j, const char* key, Vec3& out, const std::string& where) {
    if (!j.contains(key)) return;
    std::vector<double> v;
    read(j, key, v, where);
    if (v.size() != 3) throw ConfigError(where + "." + key + " must have three entries");
    out = Vec3(v[0], v[1], v[2]);
}

void read_grid(const json& j, const char* key, SquareGridConfig& g) {
    if (!j.contains(key)) return;
    const json& s = j.at(key);
    reject_unknown(s, key, {"n", "fov_m"});
    read(s, "n", g.n, key);
    read(s, "fov_m", g.fov, key);
}

json grid_json(const SquareGridConfig& g) { return {{"n", g.n}, {"fov_m", g.fov}}; }

}  // namespace

ScanGeometry RunConfig::default_scan() {
    ScanGeometry g;
    g.n_angles = 360;
    g.angle_start = 0.0;
    g.angle_step = kDeg;
    g.n_detectors = 270;
    g.detector_pitch = 0.04 / 180;
    return g;
}

void RunConfig::validate() const {
    try {
        phantom.coil.validate();
        if (!(phantom.peak_field > 0.0)) throw std::invalid_argument("phantom.peak_tesla must be positive");
        if (!std::isfinite(phantom.scale)) throw std::invalid_argument("phantom.scale must be finite");
        simulation_grid.spec().validate();
        recon_grid.spec().validate();
        scan.validate();
        physics.validate();
        if (scan.neutron_speed != physics.neutron_speed) {
            throw std::invalid_argument("scan and physics disagree on the neutron speed");
        }
        if (!(noise_level >= 0.0)) throw std::invalid_argument("noise.level must be >= 0");
        if (rebin_factor < 1) throw std::invalid_argument("rebin_factor must be >= 1");
        if (scan.n_angles % rebin_factor != 0 || scan.n_detectors % rebin_factor != 0) {
            throw std::invalid_argument("rebin_factor must divide n_angles and n_detectors");
        }
        mnkm.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

VectorField2D build_phantom(const RunConfig& cfg) {
    const VectorField2D field =
        sample_field(solenoid_wire(cfg.phantom.coil), cfg.simulation_grid.spec(), cfg.phantom.plane_height);
    return scale_field(normalize_peak(field, cfg.phantom.peak_field), cfg.phantom.scale);
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    RunConfig cfg;
    reject_unknown(root, "config",
                   {"phantom", "simulation_grid", "scan", "physics", "noise", "rebin_factor", "recon_grid", "mnkm"});

    if (root.contains("phantom")) {
        const json& p = root.at("phantom");
        reject_unknown(p, "phantom",
                       {"radius_m", "pitch_m", "n_turns", "segments_per_turn", "axis", "center_m", "current_a",
                        "phase_rad", "plane_height_m", "peak_tesla", "scale"});
        SolenoidSpec& c = cfg.phantom.coil;
        read(p, "radius_m", c.radius, "phantom");
        read(p, "pitch_m", c.pitch, "phantom");
        read(p, "n_turns", c.n_turns, "phantom");
        read(p, "segments_per_turn", c.segments_per_turn, "phantom");
        read_vec3(p, "axis", c.axis, "phantom");
        read_vec3(p, "center_m", c.center, "phantom");
        read(p, "current_a", c.current, "phantom");
        read(p, "phase_rad", c.phase, "phantom");
        read(p, "plane_height_m", cfg.phantom.plane_height, "phantom");
        read(p, "peak_tesla", cfg.phantom.peak_field, "phantom");
        read(p, "scale", cfg.phantom.scale, "phantom");
    }
    read_grid(root, "simulation_grid", cfg.simulation_grid);
    read_grid(root, "recon_grid", cfg.recon_grid);
    // the default pitch follows the simulation voxel size unless given
    cfg.scan.detector_pitch = cfg.simulation_grid.fov / cfg.simulation_grid.n;  // checked in validate()

    if (root.contains("scan")) {
        const json& s = root.at("scan");
        reject_unknown(s, "scan", {"n_angles", "angle_start_deg", "angle_step_deg", "n_detectors", "detector_pitch_m"});
        double start = cfg.scan.angle_start / kDeg;
        double step = cfg.scan.angle_step / kDeg;
        read(s, "n_angles", cfg.scan.n_angles, "scan");
        read(s, "angle_start_deg", start, "scan");
        read(s, "angle_step_deg", step, "scan");
        read(s, "n_detectors", cfg.scan.n_detectors, "scan");
        read(s, "detector_pitch_m", cfg.scan.detector_pitch, "scan");
        cfg.scan.angle_start = start * kDeg;
        cfg.scan.angle_step = step * kDeg;
    }
    if (root.contains("physics")) {
        const json& p = root.at("physics");
        reject_unknown(p, "physics", {"gamma_n", "neutron_speed_mps"});
        read(p, "gamma_n", cfg.physics.gamma_n, "physics");
        read(p, "neutron_speed_mps", cfg.physics.neutron_speed, "physics");
    }
    cfg.scan.neutron_speed = cfg.physics.neutron_speed;
    if (root.contains("noise")) {
        const json& n = root.at("noise");
        reject_unknown(n, "noise", {"level", "model", "seed"});
        read(n, "level", cfg.noise_level, "noise");
        read(n, "seed", cfg.seed, "noise");
        std::string model = cfg.noise_model == NoiseModel::absolute ? "absolute" : "relative";
        read(n, "model", model, "noise");
        if (model == "absolute") {
            cfg.noise_model = NoiseModel::absolute;
        } else if (model == "relative") {
            cfg.noise_model = NoiseModel::relative;
        } else {
            throw ConfigError("noise.model must be 'absolute' or 'relative'");
        }
    }
    read(root, "rebin_factor", cfg.rebin_factor, "config");
    if (root.contains("mnkm")) {
        const json& m = root.at("mnkm");
        reject_unknown(m, "mnkm", {"tol", "max_iters", "line_search_alphas", "alpha_max", "backtrack", "fixed_alpha"});
        read(m, "tol", cfg.mnkm.tol, "mnkm");
        read(m, "max_iters", cfg.mnkm.max_iters, "mnkm");
        read(m, "line_search_alphas", cfg.mnkm.line_search_alphas, "mnkm");
        read(m, "alpha_max", cfg.mnkm.alpha_max, "mnkm");
        read(m, "backtrack", cfg.mnkm.backtrack, "mnkm");
        if (m.contains("fixed_alpha") && !m.at("fixed_alpha").is_null()) {
            double a = 0.0;
            read(m, "fixed_alpha", a, "mnkm");
            cfg.mnkm.fixed_alpha = a;
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str());
}

std::string dump_run_config(const RunConfig& cfg) {
    const SolenoidSpec& c = cfg.phantom.coil;
    json j;
    j["phantom"] = {{"radius_m", c.radius},
                    {"pitch_m", c.pitch},
                    {"n_turns", c.n_turns},
                    {"segments_per_turn", c.segments_per_turn},
                    {"axis", {c.axis.x(), c.axis.y(), c.axis.z()}},
                    {"center_m", {c.center.x(), c.center.y(), c.center.z()}},
                    {"current_a", c.current},
                    {"phase_rad", c.phase},
                    {"plane_height_m", cfg.phantom.plane_height},
                    {"peak_tesla", cfg.phantom.peak_field},
                    {"scale", cfg.phantom.scale}};
    j["simulation_grid"] = grid_json(cfg.simulation_grid);
    j["scan"] = {{"n_angles", cfg.scan.n_angles},
                 {"angle_start_deg", cfg.scan.angle_start / kDeg},
                 {"angle_step_deg", cfg.scan.angle_step / kDeg},
                 {"n_detectors", cfg.scan.n_detectors},
                 {"detector_pitch_m", cfg.scan.detector_pitch}};
    j["physics"] = {{"gamma_n", cfg.physics.gamma_n}, {"neutron_speed_mps", cfg.physics.neutron_speed}};
    j["noise"] = {{"level", cfg.noise_level},
                  {"model", cfg.noise_model == NoiseModel::absolute ? "absolute" : "relative"},
                  {"seed", cfg.seed}};
    j["rebin_factor"] = cfg.rebin_factor;
    j["recon_grid"] = grid_json(cfg.recon_grid);
    j["mnkm"] = {{"tol", cfg.mnkm.tol},
                 {"max_iters", cfg.mnkm.max_iters},
                 {"line_search_alphas", cfg.mnkm.line_search_alphas},
                 {"alpha_max", cfg.mnkm.alpha_max},
                 {"backtrack", cfg.mnkm.backtrack},
                 {"fixed_alpha", cfg.mnkm.fixed_alpha ? json(*cfg.mnkm.fixed_alpha) : json(nullptr)}};
    return j.dump(2);
}

}  // namespace pnt
