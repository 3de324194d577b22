#include "mskflow/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mskflow/config.hpp"
#include "mskflow/evolve.hpp"
#include "mskflow/halfplane.hpp"
#include "mskflow/io.hpp"
#include "mskflow/shapes.hpp"

namespace msk {

namespace {

namespace fs = std::filesystem;

std::string frame_name(const std::string& dir, const char* prefix, long step, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%08ld.%s", prefix, step, ext);
    return dir + "/" + buf;
}

StepParams params_from(const RunConfig& cfg) {
    StepParams p;
    p.alpha = cfg.alpha;
    p.dt_coeff = cfg.dt_coeff;
    p.dt_override = cfg.dt;
    p.sigma_i = cfg.sigma_int;
    p.sigma_e = cfg.sigma_ext;
    p.coupled_system = cfg.coupled_system;
    return p;
}

int run_plane(const RunConfig& cfg) {
    SimulationState state;
    state.params = params_from(cfg);
    for (PolygonalCurve& c : generate_shape(cfg.shape, cfg.n)) state.add_curve(std::move(c));

    EventThresholds thresholds = derive_thresholds(cfg, state.curves);
    ViewBox box = viewbox_for(state.curves);

    std::ofstream metrics(cfg.out + "/metrics.csv");
    metrics << metrics_csv_header() << '\n';

    write_snapshot_csv(frame_name(cfg.out, "snap", 0, "csv"), state.curves);
    if (cfg.svg_every > 0) write_svg_frame(frame_name(cfg.out, "frame", 0, "svg"), state.curves, box);

    RunHooks hooks;
    hooks.on_step = [&](const SimulationState& s, const std::vector<MetricsRecord>& recs) {
        for (const MetricsRecord& m : recs) write_metrics_row(metrics, m);
        if (cfg.snapshot_every > 0 && s.step % cfg.snapshot_every == 0) {
            write_snapshot_csv(frame_name(cfg.out, "snap", s.step, "csv"), s.curves);
        }
        if (cfg.svg_every > 0 && s.step % cfg.svg_every == 0) {
            write_svg_frame(frame_name(cfg.out, "frame", s.step, "svg"), s.curves, box);
        }
    };

    RunResult result = run(state, cfg.t_end, cfg.steps, thresholds, hooks);
    write_events_json(cfg.out + "/events.json", result.events);
    write_snapshot_csv(cfg.out + "/snap_final.csv", state.curves);
    if (result.failed) {
        write_snapshot_csv(frame_name(cfg.out, "snap_fail", state.step, "csv"), state.curves);
        std::cerr << "numerical failure: " << result.error << "\n";
        return 2;
    }
    std::cout << "finished at t = " << state.time << " after " << state.step << " steps with "
              << state.curves.size() << " curve(s), " << result.events.size() << " event(s)\n";
    return 0;
}

int run_halfplane(const RunConfig& cfg) {
    std::vector<PolygonalCurve> curves = generate_shape(cfg.shape, cfg.n);
    if (curves.size() != 1 || curves.front().closed) {
        throw ConfigError("halfplane mode needs a single open curve (e.g. --shape lshape)");
    }
    HalfPlaneState state;
    state.curve = std::move(curves.front());
    state.params = params_from(cfg);
    validate_halfplane_curve(state.curve);

    auto as_curves = [&state]() { return std::vector<CurveState>{{0, state.curve}}; };
    ViewBox box = viewbox_for(as_curves());

    std::ofstream metrics(cfg.out + "/metrics.csv");
    metrics << metrics_csv_header() << '\n';
    write_snapshot_csv(frame_name(cfg.out, "snap", 0, "csv"), as_curves());
    if (cfg.svg_every > 0) {
        write_svg_frame(frame_name(cfg.out, "frame", 0, "svg"), as_curves(), box);
    }

    HpRunHooks hooks;
    hooks.on_step = [&](const HalfPlaneState& s, const MetricsRecord& m) {
        write_metrics_row(metrics, m);
        std::vector<CurveState> snap{{0, s.curve}};
        if (cfg.snapshot_every > 0 && s.step % cfg.snapshot_every == 0) {
            write_snapshot_csv(frame_name(cfg.out, "snap", s.step, "csv"), snap);
        }
        if (cfg.svg_every > 0 && s.step % cfg.svg_every == 0) {
            write_svg_frame(frame_name(cfg.out, "frame", s.step, "svg"), snap, box);
        }
    };

    RunResult result = hp_run(state, cfg.t_end, cfg.steps, hooks);
    write_events_json(cfg.out + "/events.json", result.events);
    write_snapshot_csv(cfg.out + "/snap_final.csv", as_curves());
    if (result.failed) {
        write_snapshot_csv(frame_name(cfg.out, "snap_fail", state.step, "csv"), as_curves());
        std::cerr << "numerical failure: " << result.error << "\n";
        return 2;
    }
    auto [right, left] = hp_contact_angles(state.curve);
    std::cout << "finished at t = " << state.time << " after " << state.step
              << " steps; contact angles " << right * 180.0 / M_PI << " / "
              << left * 180.0 / M_PI << " deg\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Polygon-based two-phase moving-interface simulator"};
    app.require_subcommand(1);

    CLI::App* cmd = app.add_subcommand("run", "run a simulation");
    RunConfig cfg;
    std::string config_path;
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    auto* o_shape = cmd->add_option("--shape", cfg.shape, "shape generator, e.g. circle:r=1");
    auto* o_n = cmd->add_option("--n", cfg.n, "total vertex count");
    auto* o_alpha = cmd->add_option("--alpha", cfg.alpha, "dt exponent");
    auto* o_dtc = cmd->add_option("--dt-coeff", cfg.dt_coeff, "dt prefactor");
    auto* o_dt = cmd->add_option("--dt", cfg.dt, "fixed dt (overrides dt-coeff * N^-alpha)");
    auto* o_si = cmd->add_option("--sigma-int", cfg.sigma_int, "interior diffusion weight");
    auto* o_se = cmd->add_option("--sigma-ext", cfg.sigma_ext, "exterior diffusion weight");
    auto* o_steps = cmd->add_option("--steps", cfg.steps, "step budget");
    auto* o_tend = cmd->add_option("--t-end", cfg.t_end, "time horizon");
    auto* o_mode = cmd->add_option("--mode", cfg.mode, "plane | halfplane");
    auto* o_cs = cmd->add_flag("--coupled-system,!--no-coupled-system", cfg.coupled_system,
                               "one collocation system across all curves");
    auto* o_am = cmd->add_option("--area-min", cfg.area_min, "disappearance threshold");
    auto* o_cd = cmd->add_option("--contact-dist", cfg.contact_dist, "coalescence threshold");
    auto* o_nw = cmd->add_option("--neck-width", cfg.neck_width, "pinch-off threshold");
    auto* o_out = cmd->add_option("--out", cfg.out, "output directory");
    auto* o_snap = cmd->add_option("--snapshot-every", cfg.snapshot_every, "snapshot stride");
    auto* o_svg = cmd->add_option("--svg-every", cfg.svg_every, "SVG frame stride");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) {
            RunConfig file_cfg = load_config_file(config_path);
            // Flags override the file: re-apply only values given on the line.
            if (!*o_shape) cfg.shape = file_cfg.shape;
            if (!*o_n) cfg.n = file_cfg.n;
            if (!*o_alpha) cfg.alpha = file_cfg.alpha;
            if (!*o_dtc) cfg.dt_coeff = file_cfg.dt_coeff;
            if (!*o_dt) cfg.dt = file_cfg.dt;
            if (!*o_si) cfg.sigma_int = file_cfg.sigma_int;
            if (!*o_se) cfg.sigma_ext = file_cfg.sigma_ext;
            if (!*o_steps) cfg.steps = file_cfg.steps;
            if (!*o_tend) cfg.t_end = file_cfg.t_end;
            if (!*o_mode) cfg.mode = file_cfg.mode;
            if (!*o_cs) cfg.coupled_system = file_cfg.coupled_system;
            if (!*o_am) cfg.area_min = file_cfg.area_min;
            if (!*o_cd) cfg.contact_dist = file_cfg.contact_dist;
            if (!*o_nw) cfg.neck_width = file_cfg.neck_width;
            if (!*o_out) cfg.out = file_cfg.out;
            if (!*o_snap) cfg.snapshot_every = file_cfg.snapshot_every;
            if (!*o_svg) cfg.svg_every = file_cfg.svg_every;
        }
        validate_config(cfg);
        fs::create_directories(cfg.out);
        return (cfg.mode == "halfplane") ? run_halfplane(cfg) : run_plane(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace msk
