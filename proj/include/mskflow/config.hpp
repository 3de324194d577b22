#pragma once

#include <string>

#include "mskflow/topology.hpp"

namespace msk {

/// Everything one run needs; flat keys mirror the CLI flags. Threshold
/// values < 0 are derived from the initial curves at run start.
struct RunConfig {
    std::string shape = "circle";
    int n = 64;
    double alpha = 2.0;
    double dt_coeff = 0.1;
    double dt = 0.0;  // > 0 overrides the N^-alpha policy
    double sigma_int = 1.0;
    double sigma_ext = 1.0;
    long steps = 0;
    double t_end = 0.0;
    std::string mode = "plane";  // plane | halfplane
    bool coupled_system = true;
    double area_min = -1.0;
    double contact_dist = -1.0;
    double neck_width = -1.0;
    int neighbor_trim = 1;
    std::string out = "out";
    long snapshot_every = 0;
    long svg_every = 0;
};

/// Parses a flat JSON config file; unknown keys are rejected.
RunConfig load_config_file(const std::string& path);

/// Validates cross-field constraints (mode, positive counts, ...).
void validate_config(const RunConfig& config);

/// area_min = 1e-3 x initial mean particle area, contact_dist = 2 x mean
/// edge length, neck_width = contact_dist; explicit settings win.
EventThresholds derive_thresholds(const RunConfig& config,
                                  const std::vector<CurveState>& curves);

}  // namespace msk
