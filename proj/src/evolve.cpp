#include "mskflow/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "mskflow/mfs.hpp"
#include "mskflow/velocity.hpp"

namespace msk {

double timestep(const StepParams& params, int n) {
    if (params.monotone_length_guard && !(params.alpha > 2.0)) {
        throw ConfigError("monotone-length guarantee requires alpha > 2, got " +
                          std::to_string(params.alpha));
    }
    return params.dt_coeff * std::pow(static_cast<double>(n), -params.alpha);
}

int SimulationState::total_vertices() const {
    int n = 0;
    for (const CurveState& c : curves) n += c.curve.size();
    return n;
}

void SimulationState::add_curve(PolygonalCurve curve) {
    curves.push_back({next_id++, std::move(curve)});
}

namespace {

struct CurveWork {
    std::vector<EdgeFrame> frames;
    std::vector<VertexFrame> vframes;
    std::vector<double> kappa;
    int offset = 0;  // first edge index within the flattened system
};

struct SideSolution {
    ChargeSolution sol;
    std::vector<double> normal_deriv;  // grad U . n at every midpoint
};

// Solves one side over the flattened collocation set.
SideSolution solve_side(const std::vector<EdgeFrame>& all_frames,
                        const std::vector<double>& all_kappa,
                        const std::vector<PolygonalCurve>& curves, const StepParams& params,
                        ProblemSide side) {
    ChargePlacement placement = place_charges_coupled(curves, side, params.d_coeff);
    AssembledSystem sys = assemble(all_frames, placement, all_kappa);
    SideSolution out;
    out.sol = solve_charges(all_frames, placement, all_kappa, &sys,
                            params.iterative_refinement);
    out.normal_deriv = midpoint_normal_derivatives(out.sol, sys, all_frames);
    return out;
}

}  // namespace

std::vector<MetricsRecord> step(SimulationState& state) {
    if (state.curves.empty()) return {};
    const StepParams& p = state.params;
    double dt = (p.dt_override > 0.0) ? p.dt_override : timestep(p, state.total_vertices());

    std::vector<CurveWork> work(state.curves.size());
    int offset = 0;
    for (std::size_t c = 0; c < state.curves.size(); ++c) {
        const CurveState& cs = state.curves[c];
        try {
            validate_curve(cs.curve, /*check_simple=*/false);
            work[c].frames = edge_frames(cs.curve);
            work[c].vframes = vertex_frames(work[c].frames);
            work[c].kappa = discrete_curvature(work[c].frames);
        } catch (const Error& e) {
            throw Error("curve " + std::to_string(cs.id) + " at step " +
                        std::to_string(state.step) + ": " + e.what());
        }
        work[c].offset = offset;
        offset += static_cast<int>(work[c].frames.size());
    }

    // Group curves into collocation systems: one coupled system, or one per
    // curve when uncoupled.
    std::vector<std::vector<std::size_t>> groups;
    if (p.coupled_system || state.curves.size() == 1) {
        groups.emplace_back();
        for (std::size_t c = 0; c < state.curves.size(); ++c) groups.back().push_back(c);
    } else {
        for (std::size_t c = 0; c < state.curves.size(); ++c) groups.push_back({c});
    }

    std::vector<double> vp_all(static_cast<std::size_t>(offset));
    std::vector<double> vm_all(static_cast<std::size_t>(offset));
    std::vector<double> maxq_int(state.curves.size(), 0.0);
    std::vector<double> maxq_ext(state.curves.size(), 0.0);
    std::vector<double> res_int(state.curves.size(), 0.0);
    std::vector<double> res_ext(state.curves.size(), 0.0);

    for (const std::vector<std::size_t>& group : groups) {
        std::vector<EdgeFrame> frames;
        std::vector<double> kappa;
        std::vector<PolygonalCurve> gcurves;
        for (std::size_t c : group) {
            frames.insert(frames.end(), work[c].frames.begin(), work[c].frames.end());
            kappa.insert(kappa.end(), work[c].kappa.begin(), work[c].kappa.end());
            gcurves.push_back(state.curves[c].curve);
        }
        // The two sides share only read-only inputs; solve them concurrently.
        SideSolution interior, exterior;
        try {
            auto interior_future = std::async(std::launch::async, [&]() {
                return solve_side(frames, kappa, gcurves, p, ProblemSide::interior);
            });
            exterior = solve_side(frames, kappa, gcurves, p, ProblemSide::exterior);
            interior = interior_future.get();
        } catch (const Error& e) {
            throw Error("step " + std::to_string(state.step) + ": " + std::string(e.what()));
        }
        int local = 0;
        for (std::size_t c : group) {
            int n = static_cast<int>(work[c].frames.size());
            double mqi = 0.0, mqe = 0.0;
            for (int i = 0; i < n; ++i) {
                std::size_t gi = static_cast<std::size_t>(local + i);
                vp_all[static_cast<std::size_t>(work[c].offset + i)] =
                    -interior.normal_deriv[gi];
                vm_all[static_cast<std::size_t>(work[c].offset + i)] = exterior.normal_deriv[gi];
                mqi = std::max(mqi, std::fabs(interior.sol.q[gi]));
                mqe = std::max(mqe, std::fabs(exterior.sol.q[gi]));
            }
            maxq_int[c] = mqi;
            maxq_ext[c] = mqe;
            res_int[c] = interior.sol.residual;
            res_ext[c] = exterior.sol.residual;
            local += n;
        }
    }

    // Velocities, diagnostics and the explicit Euler update, curve by curve.
    std::vector<MetricsRecord> metrics;
    metrics.reserve(state.curves.size());
    for (std::size_t c = 0; c < state.curves.size(); ++c) {
        CurveState& cs = state.curves[c];
        int n = static_cast<int>(work[c].frames.size());
        std::vector<double> vp(vp_all.begin() + work[c].offset,
                               vp_all.begin() + work[c].offset + n);
        std::vector<double> vm(vm_all.begin() + work[c].offset,
                               vm_all.begin() + work[c].offset + n);
        std::vector<double> w = combined_edge_speed(vp, vm, p.sigma_i, p.sigma_e);
        std::vector<double> V;
        std::vector<double> W;
        try {
            V = vertex_normal_velocity(w, work[c].vframes);
            W = udm_tangential(work[c].kappa, w, V, work[c].frames, work[c].vframes,
                               p.omega_factor * n);
        } catch (const Error& e) {
            throw Error("curve " + std::to_string(cs.id) + " at step " +
                        std::to_string(state.step) + ": " + e.what());
        }

        MetricsRecord m;
        m.step = state.step;
        m.t = state.time;
        m.curve_id = cs.id;
        m.L = length(cs.curve);
        m.A = area(cs.curve);
        m.kappa_min = *std::min_element(work[c].kappa.begin(), work[c].kappa.end());
        m.kappa_max = *std::max_element(work[c].kappa.begin(), work[c].kappa.end());
        m.maxQ_int = maxq_int[c];
        m.maxQ_ext = maxq_ext[c];
        m.residual_int = res_int[c];
        m.residual_ext = res_ext[c];
        m.Ldot = length_derivative(work[c].kappa, w, work[c].frames);
        auto [adot, erra] = area_derivative(w, W, work[c].frames, work[c].vframes);
        m.Adot = adot;
        m.errA = erra;
        metrics.push_back(m);

        for (int k = 0; k < n; ++k) {
            const VertexFrame& vf = work[c].vframes[static_cast<std::size_t>(k)];
            Point2& x = cs.curve.vertices[static_cast<std::size_t>(k)];
            x += dt * (V[static_cast<std::size_t>(k)] * vf.N + W[static_cast<std::size_t>(k)] * vf.T);
            if (!x.finite()) {
                throw Error("curve " + std::to_string(cs.id) + " at step " +
                            std::to_string(state.step) + ": non-finite vertex " +
                            std::to_string(k) + " after update");
            }
        }
    }

    state.time += dt;
    state.step += 1;
    return metrics;
}

RunResult run(SimulationState& state, double t_end, long max_steps,
              const std::optional<EventThresholds>& thresholds, const RunHooks& hooks) {
    RunResult result;
    long steps_done = 0;
    const double t_eps = 1e-15;
    while (!state.curves.empty()) {
        if (t_end > 0.0 && state.time >= t_end - t_eps) break;
        if (max_steps > 0 && steps_done >= max_steps) break;
        std::vector<MetricsRecord> m;
        try {
            m = step(state);
        } catch (const Error& e) {
            result.failed = true;
            result.error = e.what();
            break;
        }
        ++steps_done;
        result.metrics.insert(result.metrics.end(), m.begin(), m.end());
        if (hooks.on_step) hooks.on_step(state, m);

        if (thresholds) {
            std::vector<TopologyEvent> events;
            try {
                for (int id : detect_disappearance(state.curves, *thresholds)) {
                    auto it = std::find_if(state.curves.begin(), state.curves.end(),
                                           [id](const CurveState& c) { return c.id == id; });
                    TopologyEvent ev;
                    ev.kind = EventKind::disappearance;
                    ev.step = state.step;
                    ev.time = state.time;
                    ev.curve_ids = {id};
                    ev.vertices_removed = it->curve.size();
                    state.curves.erase(it);
                    events.push_back(ev);
                }
                auto pinch = detect_and_apply_pinchoff(state.curves, state.next_id, *thresholds,
                                                       state.step, state.time);
                events.insert(events.end(), pinch.begin(), pinch.end());
                auto plans = detect_coalescence(state.curves, *thresholds);
                if (!plans.empty()) {
                    // One merge per step; remaining pairs are re-detected next step.
                    events.push_back(apply_merge(state.curves, plans.front(), *thresholds,
                                                 state.step, state.time));
                }
            } catch (const Error& e) {
                result.failed = true;
                result.error = e.what();
                break;
            }
            for (const TopologyEvent& ev : events) {
                result.events.push_back(ev);
                if (hooks.on_event) hooks.on_event(state, ev);
            }
        }
    }
    return result;
}

}  // namespace msk
