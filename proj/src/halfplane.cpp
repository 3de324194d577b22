#include "mskflow/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "mskflow/velocity.hpp"

namespace msk {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kContactAngleMin = 1e-3;  // rad

Point2 reflect(Point2 p) { return {p.x, -p.y}; }

}  // namespace

void validate_halfplane_curve(const PolygonalCurve& curve) {
    if (curve.closed) {
        throw InvalidCurveError("half-plane curve must be open");
    }
    validate_curve(curve, /*check_simple=*/false);
    int n = curve.size();
    if (n < 2) {
        throw InvalidCurveError("half-plane curve needs at least 2 vertices");
    }
    if (curve.vertices.front().y != 0.0 || curve.vertices.back().y != 0.0) {
        throw InvalidCurveError("half-plane curve endpoints must lie on the x-axis");
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (!(curve.vertices[static_cast<std::size_t>(i)].y > 0.0)) {
            throw InvalidCurveError("half-plane curve interior vertex " + std::to_string(i) +
                                    " left the open upper half plane");
        }
    }
}

HalfPlaneGeometry hp_geometry(const PolygonalCurve& curve) {
    HalfPlaneGeometry g;
    g.frames = edge_frames(curve);
    int n = curve.size();
    int m = n - 1;  // edges
    g.sin_half.assign(static_cast<std::size_t>(n), 0.0);
    g.cos_half.assign(static_cast<std::size_t>(n), 1.0);
    g.tan_half.assign(static_cast<std::size_t>(n), 0.0);
    g.vertex_normal.assign(static_cast<std::size_t>(n), Point2{});
    g.vertex_tangent.assign(static_cast<std::size_t>(n), Point2{});

    for (int k = 1; k < n - 1; ++k) {
        const EdgeFrame& in = g.frames[static_cast<std::size_t>(k - 1)];
        const EdgeFrame& out = g.frames[static_cast<std::size_t>(k)];
        double dot = std::max(-1.0, std::min(1.0, in.t.dot(out.t)));
        double theta = std::acos(dot);
        if (theta >= M_PI - kSharpAngleEps) {
            throw SharpAngleError(k, "turning angle at vertex " + std::to_string(k) +
                                         " too close to pi");
        }
        double c = in.t.dot(out.t.perp());
        double sign = (c > 0.0) ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
        double phi = sign * theta;
        g.cos_half[static_cast<std::size_t>(k)] = std::cos(phi / 2.0);
        g.sin_half[static_cast<std::size_t>(k)] = std::sin(phi / 2.0);
        g.tan_half[static_cast<std::size_t>(k)] =
            g.sin_half[static_cast<std::size_t>(k)] / g.cos_half[static_cast<std::size_t>(k)];
        g.vertex_normal[static_cast<std::size_t>(k)] =
            (in.n + out.n) / (2.0 * g.cos_half[static_cast<std::size_t>(k)]);
        g.vertex_tangent[static_cast<std::size_t>(k)] =
            (in.t + out.t) / (2.0 * g.cos_half[static_cast<std::size_t>(k)]);
    }

    g.kappa.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double r = g.frames[static_cast<std::size_t>(j)].r;
        if (j == 0) {
            g.kappa[static_cast<std::size_t>(j)] = 2.0 * g.tan_half[1] / r;
        } else if (j == m - 1) {
            g.kappa[static_cast<std::size_t>(j)] =
                2.0 * g.tan_half[static_cast<std::size_t>(n - 2)] / r;
        } else {
            g.kappa[static_cast<std::size_t>(j)] =
                (g.tan_half[static_cast<std::size_t>(j)] +
                 g.tan_half[static_cast<std::size_t>(j + 1)]) /
                r;
        }
    }
    return g;
}

std::vector<double> hp_curvature(const PolygonalCurve& curve) {
    return hp_geometry(curve).kappa;
}

MirroredPlacement hp_place_charges(const std::vector<EdgeFrame>& frames, ProblemSide side,
                                   double d) {
    int m = static_cast<int>(frames.size());
    if (d <= 0.0) d = default_charge_offset(m);
    MirroredPlacement p;
    p.side = side;
    p.d = d;
    p.y.resize(static_cast<std::size_t>(m));
    p.z.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const EdgeFrame& f = frames[static_cast<std::size_t>(j)];
        if (side == ProblemSide::interior) {
            Point2 y = f.midpoint + d * f.n;
            p.y[static_cast<std::size_t>(j)] = y;
            p.z[static_cast<std::size_t>(j)] = 1000.0 * y;  // far dummy
        } else {
            p.y[static_cast<std::size_t>(j)] = f.midpoint - d * f.n;
            p.z[static_cast<std::size_t>(j)] = f.midpoint - (d / 2.0) * f.n;
        }
    }
    return p;
}

double hp_pair_potential(Point2 x, Point2 y, Point2 z) {
    return fundamental_solution(x - y) - fundamental_solution(x - z) +
           fundamental_solution(x - reflect(y)) - fundamental_solution(x - reflect(z));
}

Point2 hp_pair_gradient(Point2 x, Point2 y, Point2 z) {
    return fundamental_gradient(x - y) - fundamental_gradient(x - z) +
           fundamental_gradient(x - reflect(y)) - fundamental_gradient(x - reflect(z));
}

HpAssembledSystem hp_assemble(const std::vector<EdgeFrame>& frames,
                              const MirroredPlacement& placement,
                              const std::vector<double>& kappa) {
    int m = static_cast<int>(frames.size());
    if (static_cast<int>(kappa.size()) != m || static_cast<int>(placement.y.size()) != m) {
        throw Error("hp_assemble: size mismatch");
    }
    HpAssembledSystem sys;
    sys.A = DenseMatrix(m + 1, m + 1);
    sys.rhs.assign(static_cast<std::size_t>(m) + 1, 0.0);
    sys.grad.resize(static_cast<std::size_t>(m) * m);

    for (int i = 0; i < m; ++i) {
        Point2 mid = frames[static_cast<std::size_t>(i)].midpoint;
        sys.A(i + 1, 0) = 1.0;
        for (int j = 0; j < m; ++j) {
            sys.A(i + 1, j + 1) = hp_pair_potential(mid, placement.y[static_cast<std::size_t>(j)],
                                                    placement.z[static_cast<std::size_t>(j)]);
            sys.grad[static_cast<std::size_t>(i) * m + j] = hp_pair_gradient(
                mid, placement.y[static_cast<std::size_t>(j)],
                placement.z[static_cast<std::size_t>(j)]);
        }
        sys.rhs[static_cast<std::size_t>(i) + 1] = kappa[static_cast<std::size_t>(i)];
    }

    double row_sign = (placement.side == ProblemSide::interior) ? 1.0 : -1.0;
    for (int j = 0; j < m; ++j) {
        double h = 0.0;
        for (int i = 0; i < m; ++i) {
            const EdgeFrame& f = frames[static_cast<std::size_t>(i)];
            h -= sys.grad[static_cast<std::size_t>(i) * m + j].dot(f.n) * f.r;
        }
        sys.A(0, j + 1) = row_sign * h;
    }
    return sys;
}

ChargeSolution hp_solve(const std::vector<EdgeFrame>& frames, const MirroredPlacement& placement,
                        const std::vector<double>& kappa, const HpAssembledSystem* pre) {
    HpAssembledSystem local;
    const HpAssembledSystem* sys = pre;
    if (!sys) {
        local = hp_assemble(frames, placement, kappa);
        sys = &local;
    }
    int m = static_cast<int>(frames.size());
    std::vector<double> x = solve(sys->A, sys->rhs);

    ChargeSolution sol;
    sol.side = placement.side;
    sol.q0 = x[0];
    sol.q.assign(x.begin() + 1, x.end());
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i <= m; ++i) {
        double s = sys->rhs[static_cast<std::size_t>(i)];
        for (int j = 0; j <= m; ++j) s -= sys->A(i, j) * x[static_cast<std::size_t>(j)];
        rnorm = std::max(rnorm, std::fabs(s));
        bnorm = std::max(bnorm, std::fabs(sys->rhs[static_cast<std::size_t>(i)]));
    }
    sol.residual = rnorm / std::max(1.0, bnorm);
    return sol;
}

ChargeSolution hp_solve(const PolygonalCurve& curve, ProblemSide side) {
    validate_halfplane_curve(curve);
    HalfPlaneGeometry g = hp_geometry(curve);
    MirroredPlacement p = hp_place_charges(g.frames, side);
    return hp_solve(g.frames, p, g.kappa);
}

double hp_potential(const ChargeSolution& sol, const MirroredPlacement& placement, Point2 x) {
    double u = sol.q0;
    for (std::size_t j = 0; j < sol.q.size(); ++j) {
        u += sol.q[j] * hp_pair_potential(x, placement.y[j], placement.z[j]);
    }
    return u;
}

Point2 hp_gradient(const ChargeSolution& sol, const MirroredPlacement& placement, Point2 x) {
    Point2 g;
    for (std::size_t j = 0; j < sol.q.size(); ++j) {
        g += sol.q[j] * hp_pair_gradient(x, placement.y[j], placement.z[j]);
    }
    return g;
}

std::pair<double, double> hp_endpoint_velocity(double v_first_edge, double v_last_edge,
                                               const EdgeFrame& first_edge,
                                               const EdgeFrame& last_edge) {
    auto slide = [](double v, const EdgeFrame& e, const char* which) {
        double ty = e.t.y;
        if (std::fabs(ty) < std::sin(kContactAngleMin)) {
            throw TangentialContactError(std::string("contact angle at the ") + which +
                                         " endpoint below " + std::to_string(kContactAngleMin) +
                                         " rad");
        }
        return v / ty;
    };
    return {slide(v_first_edge, first_edge, "first"), slide(v_last_edge, last_edge, "last")};
}

std::pair<std::vector<double>, double> hp_udm(const HalfPlaneGeometry& geom,
                                              const std::vector<double>& w,
                                              const std::vector<double>& V, double omega) {
    int n = static_cast<int>(geom.sin_half.size());
    int m = n - 1;
    std::vector<double> W(static_cast<std::size_t>(n), 0.0);
    if (m < 2) return {W, 0.0};

    double L = 0.0, Ldot = 0.0;
    for (int j = 0; j < m; ++j) {
        L += geom.frames[static_cast<std::size_t>(j)].r;
        Ldot += geom.kappa[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)] *
                geom.frames[static_cast<std::size_t>(j)].r;
    }
    double md = static_cast<double>(m);

    // Forward sweep: each edge equation fixes the tangential speed at its
    // far vertex; W at both endpoints stays zero, so the last equation is
    // overdetermined and only its residual is reported.
    auto target = [&](int j) {
        return Ldot / md + (L / md - geom.frames[static_cast<std::size_t>(j)].r) * omega;
    };
    for (int j = 0; j + 1 < m; ++j) {
        double rhs = W[static_cast<std::size_t>(j)] * geom.cos_half[static_cast<std::size_t>(j)] +
                     target(j) - V[static_cast<std::size_t>(j + 1)] *
                                     geom.sin_half[static_cast<std::size_t>(j + 1)] -
                     V[static_cast<std::size_t>(j)] * geom.sin_half[static_cast<std::size_t>(j)];
        W[static_cast<std::size_t>(j + 1)] = rhs / geom.cos_half[static_cast<std::size_t>(j + 1)];
    }
    int j = m - 1;
    double residual =
        0.0 - (W[static_cast<std::size_t>(j)] * geom.cos_half[static_cast<std::size_t>(j)] +
               target(j) -
               V[static_cast<std::size_t>(j + 1)] * geom.sin_half[static_cast<std::size_t>(j + 1)] -
               V[static_cast<std::size_t>(j)] * geom.sin_half[static_cast<std::size_t>(j)]);
    return {W, residual};
}

std::pair<double, double> hp_contact_angles(const PolygonalCurve& curve) {
    std::vector<EdgeFrame> frames = edge_frames(curve);
    double right = std::acos(std::max(-1.0, std::min(1.0, frames.front().t.x)));
    double left = std::acos(std::max(-1.0, std::min(1.0, frames.back().t.x)));
    return {right, left};
}

double hp_neumann_residual(const ChargeSolution& sol, const MirroredPlacement& placement,
                           const PolygonalCurve& curve, int samples) {
    double xmin = curve.vertices.front().x, xmax = xmin;
    for (const Point2& p : curve.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
    }
    double span = xmax - xmin;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double x = xmin - 0.25 * span + 1.5 * span * (i + 0.5) / samples;
        Point2 g = hp_gradient(sol, placement, {x, 0.0});
        double scale = std::max(1e-30, g.norm());
        worst = std::max(worst, std::fabs(g.y) / scale);
    }
    return worst;
}

MetricsRecord hp_step(HalfPlaneState& state) {
    validate_halfplane_curve(state.curve);
    const StepParams& p = state.params;
    PolygonalCurve& curve = state.curve;
    int n = curve.size();
    int m = n - 1;
    double dt = (p.dt_override > 0.0) ? p.dt_override : timestep(p, n);

    HalfPlaneGeometry g = hp_geometry(curve);
    MirroredPlacement pl_int =
        hp_place_charges(g.frames, ProblemSide::interior, p.d_coeff * default_charge_offset(m));
    MirroredPlacement pl_ext =
        hp_place_charges(g.frames, ProblemSide::exterior, p.d_coeff * default_charge_offset(m));

    HpAssembledSystem sys_int, sys_ext;
    ChargeSolution sol_int, sol_ext;
    try {
        auto interior_future = std::async(std::launch::async, [&]() {
            HpAssembledSystem sys = hp_assemble(g.frames, pl_int, g.kappa);
            ChargeSolution sol = hp_solve(g.frames, pl_int, g.kappa, &sys);
            return std::make_pair(std::move(sys), std::move(sol));
        });
        sys_ext = hp_assemble(g.frames, pl_ext, g.kappa);
        sol_ext = hp_solve(g.frames, pl_ext, g.kappa, &sys_ext);
        std::tie(sys_int, sol_int) = interior_future.get();
    } catch (const Error& e) {
        throw Error("half-plane step " + std::to_string(state.step) + ": " +
                    std::string(e.what()));
    }

    // Edge speeds from the cached pair gradients.
    std::vector<double> w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const EdgeFrame& f = g.frames[static_cast<std::size_t>(i)];
        double gp = 0.0, ge = 0.0;
        for (int j = 0; j < m; ++j) {
            gp += sol_int.q[static_cast<std::size_t>(j)] *
                  sys_int.grad[static_cast<std::size_t>(i) * m + j].dot(f.n);
            ge += sol_ext.q[static_cast<std::size_t>(j)] *
                  sys_ext.grad[static_cast<std::size_t>(i) * m + j].dot(f.n);
        }
        w[static_cast<std::size_t>(i)] = p.sigma_i * (-gp) + p.sigma_e * ge;
    }

    // Vertex normal speeds at interior vertices.
    std::vector<double> V(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n - 1; ++k) {
        V[static_cast<std::size_t>(k)] =
            (w[static_cast<std::size_t>(k - 1)] + w[static_cast<std::size_t>(k)]) /
            (2.0 * g.cos_half[static_cast<std::size_t>(k)]);
    }
    auto [W, udm_residual] = hp_udm(g, w, V, p.omega_factor * n);
    auto [dx_first, dx_last] =
        hp_endpoint_velocity(w.front(), w.back(), g.frames.front(), g.frames.back());

    MetricsRecord rec;
    rec.step = state.step;
    rec.t = state.time;
    rec.curve_id = 0;
    rec.L = length(curve);
    {  // area enclosed with the axis: the closing edge lies on y = 0 and
       // contributes nothing to the shoelace sum
        double twice = 0.0;
        for (int i = 0; i < n; ++i) {
            twice += curve.vertex(i).cross(curve.vertex((i + 1) % n));
        }
        rec.A = 0.5 * twice;
    }
    rec.kappa_min = *std::min_element(g.kappa.begin(), g.kappa.end());
    rec.kappa_max = *std::max_element(g.kappa.begin(), g.kappa.end());
    for (double q : sol_int.q) rec.maxQ_int = std::max(rec.maxQ_int, std::fabs(q));
    for (double q : sol_ext.q) rec.maxQ_ext = std::max(rec.maxQ_ext, std::fabs(q));
    rec.residual_int = sol_int.residual;
    rec.residual_ext = sol_ext.residual;
    for (int j = 0; j < m; ++j) {
        rec.Ldot += g.kappa[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)] *
                    g.frames[static_cast<std::size_t>(j)].r;
        rec.Adot += w[static_cast<std::size_t>(j)] * g.frames[static_cast<std::size_t>(j)].r;
    }
    rec.errA = udm_residual;  // reported in place of the closed-curve term

    for (int k = 1; k < n - 1; ++k) {
        Point2& x = curve.vertices[static_cast<std::size_t>(k)];
        x += dt * (V[static_cast<std::size_t>(k)] * g.vertex_normal[static_cast<std::size_t>(k)] +
                   W[static_cast<std::size_t>(k)] * g.vertex_tangent[static_cast<std::size_t>(k)]);
        if (!x.finite()) {
            throw Error("half-plane step " + std::to_string(state.step) +
                        ": non-finite vertex " + std::to_string(k));
        }
    }
    curve.vertices.front().x += dt * dx_first;
    curve.vertices.back().x += dt * dx_last;
    curve.vertices.front().y = 0.0;
    curve.vertices.back().y = 0.0;

    for (int k = 1; k < n - 1; ++k) {
        if (!(curve.vertices[static_cast<std::size_t>(k)].y > 0.0)) {
            throw InvalidCurveError("half-plane step " + std::to_string(state.step) +
                                    ": interior vertex " + std::to_string(k) +
                                    " left the upper half plane");
        }
    }

    state.time += dt;
    state.step += 1;
    return rec;
}

RunResult hp_run(HalfPlaneState& state, double t_end, long max_steps, const HpRunHooks& hooks) {
    RunResult result;
    long steps_done = 0;
    while (true) {
        if (t_end > 0.0 && state.time >= t_end - 1e-15) break;
        if (max_steps > 0 && steps_done >= max_steps) break;
        MetricsRecord rec;
        try {
            rec = hp_step(state);
        } catch (const Error& e) {
            result.failed = true;
            result.error = e.what();
            break;
        }
        ++steps_done;
        result.metrics.push_back(rec);
        if (hooks.on_step) hooks.on_step(state, rec);
    }
    return result;
}

}  // namespace msk
