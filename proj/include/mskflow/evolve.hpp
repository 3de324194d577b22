#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mskflow/geometry.hpp"
#include "mskflow/topology.hpp"

namespace msk {

struct StepParams {
    double alpha = 2.0;    // dt = dt_coeff * N^-alpha
    double dt_coeff = 0.1;
    double dt_override = 0.0;  // > 0 pins dt regardless of N
    double sigma_i = 1.0;  // interior-phase diffusion weight
    double sigma_e = 1.0;  // exterior-phase diffusion weight
    double d_coeff = 1.0;  // charge offset d = d_coeff / sqrt(N_curve)
    double omega_factor = 10.0;  // redistribution stiffness omega = factor * N_curve
    bool monotone_length_guard = false;  // enforce alpha > 2
    bool coupled_system = true;          // one collocation system across all curves
    bool iterative_refinement = false;
};

/// dt = dt_coeff * N^-alpha. With the monotone-length guard on, alpha <= 2
/// is a rejected configuration.
double timestep(const StepParams& params, int n);

/// One diagnostics row per curve per recorded step.
struct MetricsRecord {
    long step = 0;
    double t = 0.0;
    int curve_id = 0;
    double L = 0.0;
    double A = 0.0;
    double kappa_min = 0.0;
    double kappa_max = 0.0;
    double maxQ_int = 0.0;
    double maxQ_ext = 0.0;
    double residual_int = 0.0;
    double residual_ext = 0.0;
    double Ldot = 0.0;
    double Adot = 0.0;
    double errA = 0.0;
};

struct SimulationState {
    std::vector<CurveState> curves;
    double time = 0.0;
    long step = 0;
    StepParams params;
    int next_id = 0;

    int total_vertices() const;
    void add_curve(PolygonalCurve curve);
};

/// Advances every curve by one explicit Euler step
/// X_k <- X_k + dt (V_k N_k + W_k T_k) and returns the per-curve metrics of
/// the state *before* the update. Errors are tagged with curve id and step.
std::vector<MetricsRecord> step(SimulationState& state);

struct RunHooks {
    std::function<void(const SimulationState&, const std::vector<MetricsRecord>&)> on_step;
    std::function<void(const SimulationState&, const TopologyEvent&)> on_event;
};

struct RunResult {
    std::vector<MetricsRecord> metrics;
    std::vector<TopologyEvent> events;
    bool failed = false;
    std::string error;
};

/// Repeats step() until t_end (if > 0), max_steps (if > 0), all curves
/// gone, or the first error; topology detection runs between steps when
/// thresholds are given. On error the state is left at the failing step for
/// post-mortem and the partial results carry the message.
RunResult run(SimulationState& state, double t_end, long max_steps,
              const std::optional<EventThresholds>& thresholds = std::nullopt,
              const RunHooks& hooks = {});

}  // namespace msk
