#include "mskflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mskflow/geometry.hpp"

namespace msk {

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must contain a JSON object");

    static const std::set<std::string> known = {
        "shape",      "n",           "alpha",        "dt_coeff",     "dt",
        "sigma_int",  "sigma_ext",   "steps",        "t_end",        "mode",
        "coupled_system", "area_min", "contact_dist", "neck_width",  "neighbor_trim",
        "out",        "snapshot_every", "svg_every"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError("unknown config key '" + it.key() + "'");
        }
    }

    RunConfig c;
    try {
        c.shape = j.value("shape", c.shape);
        c.n = j.value("n", c.n);
        c.alpha = j.value("alpha", c.alpha);
        c.dt_coeff = j.value("dt_coeff", c.dt_coeff);
        c.dt = j.value("dt", c.dt);
        c.sigma_int = j.value("sigma_int", c.sigma_int);
        c.sigma_ext = j.value("sigma_ext", c.sigma_ext);
        c.steps = j.value("steps", c.steps);
        c.t_end = j.value("t_end", c.t_end);
        c.mode = j.value("mode", c.mode);
        c.coupled_system = j.value("coupled_system", c.coupled_system);
        c.area_min = j.value("area_min", c.area_min);
        c.contact_dist = j.value("contact_dist", c.contact_dist);
        c.neck_width = j.value("neck_width", c.neck_width);
        c.neighbor_trim = j.value("neighbor_trim", c.neighbor_trim);
        c.out = j.value("out", c.out);
        c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
        c.svg_every = j.value("svg_every", c.svg_every);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config value has the wrong type: " + std::string(e.what()));
    }
    return c;
}

void validate_config(const RunConfig& config) {
    if (config.n < 3) throw ConfigError("n must be at least 3");
    if (config.mode != "plane" && config.mode != "halfplane") {
        throw ConfigError("mode must be 'plane' or 'halfplane', got '" + config.mode + "'");
    }
    if (config.steps <= 0 && config.t_end <= 0.0) {
        throw ConfigError("either steps or t_end must be positive");
    }
    if (config.sigma_int <= 0.0 || config.sigma_ext <= 0.0) {
        throw ConfigError("sigma_int and sigma_ext must be positive");
    }
    if (config.dt_coeff <= 0.0 && config.dt <= 0.0) {
        throw ConfigError("dt_coeff must be positive");
    }
    if (config.neighbor_trim < 0) throw ConfigError("neighbor_trim must be >= 0");
}

EventThresholds derive_thresholds(const RunConfig& config,
                                  const std::vector<CurveState>& curves) {
    double mean_area = 0.0;
    double mean_edge = 0.0;
    int edges = 0;
    for (const CurveState& c : curves) {
        mean_area += std::fabs(area(c.curve));
        mean_edge += length(c.curve);
        edges += c.curve.size();
    }
    if (!curves.empty()) mean_area /= static_cast<double>(curves.size());
    if (edges > 0) mean_edge /= static_cast<double>(edges);

    EventThresholds t;
    t.area_min = (config.area_min >= 0.0) ? config.area_min : 1e-3 * mean_area;
    t.contact_dist = (config.contact_dist >= 0.0) ? config.contact_dist : 2.0 * mean_edge;
    t.neck_width = (config.neck_width >= 0.0) ? config.neck_width : t.contact_dist;
    t.neighbor_trim = config.neighbor_trim;
    return t;
}

}  // namespace msk
