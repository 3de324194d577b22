#include "mskflow/mfs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace msk {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

}  // namespace

double fundamental_solution(Point2 x) {
    double n2 = x.norm2();
    if (n2 == 0.0) {
        throw SingularEvaluationError("fundamental solution evaluated at its singularity");
    }
    return 0.5 * std::log(n2) / kTwoPi;
}

Point2 fundamental_gradient(Point2 x) {
    double n2 = x.norm2();
    if (n2 == 0.0) {
        throw SingularEvaluationError("fundamental gradient evaluated at its singularity");
    }
    return x / (kTwoPi * n2);
}

double default_charge_offset(int n_edges) { return 1.0 / std::sqrt(static_cast<double>(n_edges)); }

ChargePlacement place_charges(const std::vector<EdgeFrame>& frames, ProblemSide side, double d) {
    int n = static_cast<int>(frames.size());
    if (d <= 0.0) d = default_charge_offset(n);
    double sign = (side == ProblemSide::interior) ? 1.0 : -1.0;
    ChargePlacement p;
    p.side = side;
    p.d = d;
    p.y.resize(static_cast<std::size_t>(n));
    p.z.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const EdgeFrame& f = frames[static_cast<std::size_t>(i)];
        p.y[static_cast<std::size_t>(i)] = f.midpoint + (sign * d) * f.n;
        p.z[static_cast<std::size_t>(i)] = f.midpoint + (sign * d * 0.5) * f.n;
    }
    return p;
}

void validate_placement(const ChargePlacement& placement,
                        const std::vector<PolygonalCurve>& curves) {
    // Total winding over all curves: 1 inside the material region, 0
    // outside (holes are clockwise and subtract).
    auto total_winding = [&curves](Point2 pt) {
        int w = 0;
        for (const PolygonalCurve& c : curves) w += winding_number(c, pt);
        return w;
    };
    int want = (placement.side == ProblemSide::interior) ? 0 : 1;
    for (std::size_t i = 0; i < placement.y.size(); ++i) {
        for (Point2 pt : {placement.y[i], placement.z[i]}) {
            if (total_winding(pt) != want) {
                std::ostringstream os;
                os << "charge point " << i << " at (" << pt.x << ", " << pt.y
                   << ") lies on the wrong side of the interface; try a smaller offset d (d = "
                   << placement.d << ")";
                throw PlacementError(os.str());
            }
        }
    }
    for (const Point2& pt : placement.log_points) {
        if (total_winding(pt) != want) {
            throw PlacementError("hole log source lies on the wrong side of the interface");
        }
    }
}

ChargePlacement place_charges(const PolygonalCurve& curve, ProblemSide side, double d) {
    ChargePlacement p = place_charges(edge_frames(curve), side, d);
    validate_placement(p, {curve});
    return p;
}

ChargePlacement place_charges_coupled(const std::vector<PolygonalCurve>& curves,
                                      ProblemSide side, double d_coeff) {
    ChargePlacement placement;
    placement.side = side;
    int offset = 0;
    for (const PolygonalCurve& curve : curves) {
        std::vector<EdgeFrame> frames = edge_frames(curve);
        int n = static_cast<int>(frames.size());
        double d = d_coeff * default_charge_offset(n);
        ChargePlacement pc = place_charges(frames, side, d);
        placement.y.insert(placement.y.end(), pc.y.begin(), pc.y.end());
        placement.z.insert(placement.z.end(), pc.z.begin(), pc.z.end());
        placement.d = std::max(placement.d, d);
        if (side == ProblemSide::interior && curve.closed && area(curve) < 0.0) {
            placement.log_points.push_back(centroid_of_vertices(curve));
            placement.hole_pairs.emplace_back(offset, offset + n);
        }
        offset += n;
    }
    validate_placement(placement, curves);
    return placement;
}

AssembledSystem assemble(const std::vector<EdgeFrame>& frames, const ChargePlacement& placement,
                         const std::vector<double>& kappa) {
    int n = static_cast<int>(frames.size());
    int holes = static_cast<int>(placement.log_points.size());
    if (static_cast<int>(kappa.size()) != n || static_cast<int>(placement.y.size()) != n) {
        throw Error("assemble: size mismatch between frames, placement and kappa");
    }
    int dim = n + 1 + holes;
    AssembledSystem sys;
    sys.A = DenseMatrix(dim, dim);
    sys.rhs.assign(static_cast<std::size_t>(dim), 0.0);
    sys.grad.resize(static_cast<std::size_t>(n) * n);
    sys.log_grad.resize(static_cast<std::size_t>(n) * holes);

    // Dirichlet rows: Q_0 + sum_j Q_j G_ij + sum_k S_k E(m_i - c_k) = kappa_i.
    for (int i = 0; i < n; ++i) {
        Point2 m = frames[static_cast<std::size_t>(i)].midpoint;
        sys.A(i + 1, 0) = 1.0;
        for (int j = 0; j < n; ++j) {
            Point2 dy = m - placement.y[static_cast<std::size_t>(j)];
            Point2 dz = m - placement.z[static_cast<std::size_t>(j)];
            double ry2 = dy.norm2();
            double rz2 = dz.norm2();
            if (ry2 == 0.0 || rz2 == 0.0) {
                throw SingularEvaluationError("collocation point coincides with a charge point");
            }
            sys.A(i + 1, j + 1) = 0.5 * std::log(ry2 / rz2) / kTwoPi;
            sys.grad[static_cast<std::size_t>(i) * n + j] =
                dy / (kTwoPi * ry2) - dz / (kTwoPi * rz2);
        }
        for (int k = 0; k < holes; ++k) {
            Point2 dc = m - placement.log_points[static_cast<std::size_t>(k)];
            sys.A(i + 1, n + 1 + k) = fundamental_solution(dc);
            sys.log_grad[static_cast<std::size_t>(i) * holes + k] = dc / (kTwoPi * dc.norm2());
        }
        sys.rhs[static_cast<std::size_t>(i) + 1] = kappa[static_cast<std::size_t>(i)];
    }

    // Constraint row: H_j = -sum_i grad_ij . n_i r_i (pairs and log sources
    // alike); the exterior system carries the opposite sign.
    double row_sign = (placement.side == ProblemSide::interior) ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
        double h = 0.0;
        for (int i = 0; i < n; ++i) {
            const EdgeFrame& f = frames[static_cast<std::size_t>(i)];
            h -= sys.grad[static_cast<std::size_t>(i) * n + j].dot(f.n) * f.r;
        }
        sys.A(0, j + 1) = row_sign * h;
    }
    for (int k = 0; k < holes; ++k) {
        double h = 0.0;
        for (int i = 0; i < n; ++i) {
            const EdgeFrame& f = frames[static_cast<std::size_t>(i)];
            h -= sys.log_grad[static_cast<std::size_t>(i) * holes + k].dot(f.n) * f.r;
        }
        sys.A(0, n + 1 + k) = row_sign * h;
    }

    // Charge neutrality over each hole's pairs; the hole's monopole content
    // lives entirely in its log source.
    for (int k = 0; k < holes; ++k) {
        auto [first, last] = placement.hole_pairs[static_cast<std::size_t>(k)];
        for (int j = first; j < last; ++j) sys.A(n + 1 + k, j + 1) = 1.0;
    }
    return sys;
}

ChargeSolution solve_charges(const std::vector<EdgeFrame>& frames,
                             const ChargePlacement& placement, const std::vector<double>& kappa,
                             const AssembledSystem* pre, bool iterative_refinement) {
    AssembledSystem local;
    const AssembledSystem* sys = pre;
    if (!sys) {
        local = assemble(frames, placement, kappa);
        sys = &local;
    }
    int n = static_cast<int>(frames.size());

    SolveOptions opts;
    opts.iterative_refinement = iterative_refinement;
    std::vector<double> x = solve(sys->A, sys->rhs, opts);

    ChargeSolution sol;
    sol.side = placement.side;
    sol.q0 = x[0];
    sol.q.assign(x.begin() + 1, x.begin() + 1 + n);
    sol.s.assign(x.begin() + 1 + n, x.end());

    int dim = sys->A.rows;
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < dim; ++i) {
        double s = sys->rhs[static_cast<std::size_t>(i)];
        for (int j = 0; j < dim; ++j) s -= sys->A(i, j) * x[static_cast<std::size_t>(j)];
        rnorm = std::max(rnorm, std::fabs(s));
        bnorm = std::max(bnorm, std::fabs(sys->rhs[static_cast<std::size_t>(i)]));
    }
    sol.residual = rnorm / std::max(1.0, bnorm);
    if (sol.residual > 1e-10) {
        std::ostringstream os;
        os << "collocation solve residual " << sol.residual << " above 1e-10";
        emit_diagnostic(os.str());
    }
    return sol;
}

double potential(const ChargeSolution& sol, const ChargePlacement& placement, Point2 x) {
    double u = sol.q0;
    for (std::size_t j = 0; j < sol.q.size(); ++j) {
        u += sol.q[j] * (fundamental_solution(x - placement.y[j]) -
                         fundamental_solution(x - placement.z[j]));
    }
    for (std::size_t k = 0; k < sol.s.size(); ++k) {
        u += sol.s[k] * fundamental_solution(x - placement.log_points[k]);
    }
    return u;
}

Point2 gradient(const ChargeSolution& sol, const ChargePlacement& placement, Point2 x) {
    Point2 g;
    for (std::size_t j = 0; j < sol.q.size(); ++j) {
        g += sol.q[j] * (fundamental_gradient(x - placement.y[j]) -
                         fundamental_gradient(x - placement.z[j]));
    }
    for (std::size_t k = 0; k < sol.s.size(); ++k) {
        g += sol.s[k] * fundamental_gradient(x - placement.log_points[k]);
    }
    return g;
}

std::vector<double> midpoint_normal_derivatives(const ChargeSolution& sol,
                                                const AssembledSystem& sys,
                                                const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    int holes = static_cast<int>(sol.s.size());
    std::vector<double> dn(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const Point2 ni = frames[static_cast<std::size_t>(i)].n;
        double s = 0.0;
        const Point2* row = &sys.grad[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) s += sol.q[static_cast<std::size_t>(j)] * row[j].dot(ni);
        for (int k = 0; k < holes; ++k) {
            s += sol.s[static_cast<std::size_t>(k)] *
                 sys.log_grad[static_cast<std::size_t>(i) * holes + k].dot(ni);
        }
        dn[static_cast<std::size_t>(i)] = s;
    }
    return dn;
}

std::pair<std::vector<double>, std::vector<double>> edge_velocities(
    const ChargeSolution& sol_int, const ChargePlacement& pl_int, const ChargeSolution& sol_ext,
    const ChargePlacement& pl_ext, const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    std::vector<double> vp(static_cast<std::size_t>(n)), vm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const EdgeFrame& f = frames[static_cast<std::size_t>(i)];
        vp[static_cast<std::size_t>(i)] = -gradient(sol_int, pl_int, f.midpoint).dot(f.n);
        vm[static_cast<std::size_t>(i)] = gradient(sol_ext, pl_ext, f.midpoint).dot(f.n);
    }
    return {vp, vm};
}

}  // namespace msk
