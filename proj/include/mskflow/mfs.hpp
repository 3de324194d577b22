#pragma once

#include <utility>
#include <vector>

#include "mskflow/geometry.hpp"
#include "mskflow/linsolve.hpp"

namespace msk {

enum class ProblemSide { interior, exterior };

/// Singular points y_j and dummy points z_j for one side of the interface.
/// Interior problem: both offset outward (y = m + d n, z = m + d/2 n);
/// exterior problem: both offset inward.
///
/// The pair kernel E(x-y) - E(x-z) carries no monopole, so when the
/// material region has holes (clockwise curves) the interior problem also
/// needs one plain log source per hole: without it no combination of pairs
/// can reproduce the log-growing potential between the boundary
/// components. Each log source is balanced by a charge-neutrality row over
/// that hole's pairs.
struct ChargePlacement {
    ProblemSide side = ProblemSide::interior;
    std::vector<Point2> y;
    std::vector<Point2> z;
    double d = 0.0;
    std::vector<Point2> log_points;              // one per hole, inside it
    std::vector<std::pair<int, int>> hole_pairs; // [first, last) pair range per hole
};

/// Solved charges Q_0, Q_1..Q_N of one collocation system, plus the hole
/// log strengths when the placement carries log sources.
struct ChargeSolution {
    ProblemSide side = ProblemSide::interior;
    double q0 = 0.0;
    std::vector<double> q;
    std::vector<double> s;  // log-source strengths, one per hole
    double residual = 0.0;  // ||Ax-b||_inf / max(1, ||b||_inf)
};

/// Collocation system plus the kernel gradients at the midpoints, reused
/// for the AP row and for the velocity evaluation after the solve.
struct AssembledSystem {
    DenseMatrix A;
    std::vector<double> rhs;
    std::vector<Point2> grad;      // grad[i*N + j] = grad of pair j at midpoint i
    std::vector<Point2> log_grad;  // grad[i*m + k] = grad of log source k at midpoint i
};

/// E(x) = log|x| / (2 pi). Throws SingularEvaluationError at x = 0.
double fundamental_solution(Point2 x);
/// grad E(x) = x / (2 pi |x|^2).
Point2 fundamental_gradient(Point2 x);

/// Default charge offset d = 1 / sqrt(N).
double default_charge_offset(int n_edges);

/// Places charges along the edge normals. Pass d <= 0 for the default
/// offset. No side validation; see validate_placement.
ChargePlacement place_charges(const std::vector<EdgeFrame>& frames, ProblemSide side,
                              double d = 0.0);

/// Checks by winding number that every charge lies on the correct side of
/// the interface (total winding 0 outside, 1 inside; holes wind clockwise).
/// Throws PlacementError suggesting a smaller d on violation.
void validate_placement(const ChargePlacement& placement,
                        const std::vector<PolygonalCurve>& curves);

/// Convenience: place + validate for a single curve.
ChargePlacement place_charges(const PolygonalCurve& curve, ProblemSide side, double d = 0.0);

/// Placement over several curves solved as one system: per-curve charges
/// (offset d_coeff / sqrt(N_curve) each) concatenated in order, plus the
/// per-hole log sources for the interior problem. Validates sides.
ChargePlacement place_charges_coupled(const std::vector<PolygonalCurve>& curves,
                                      ProblemSide side, double d_coeff = 1.0);

/// Builds the square collocation system: row 0 is the area-preserving
/// constraint sum_j Q_j H_j (+ sum_k S_k H_k) = 0, negated for the exterior
/// problem; rows 1..N enforce Q_0 + sum_j Q_j G_ij + sum_k S_k E_ik =
/// kappa_i at the midpoints; one charge-neutrality row per hole closes the
/// log-source columns.
AssembledSystem assemble(const std::vector<EdgeFrame>& frames, const ChargePlacement& placement,
                         const std::vector<double>& kappa);

/// Assembles (unless `pre` is given) and solves for the charges.
ChargeSolution solve_charges(const std::vector<EdgeFrame>& frames,
                             const ChargePlacement& placement, const std::vector<double>& kappa,
                             const AssembledSystem* pre = nullptr,
                             bool iterative_refinement = false);

/// U(x) = q0 + sum_j q_j (E(x - y_j) - E(x - z_j)).
double potential(const ChargeSolution& sol, const ChargePlacement& placement, Point2 x);
Point2 gradient(const ChargeSolution& sol, const ChargePlacement& placement, Point2 x);

/// Normal derivatives of U at the midpoints from the cached pair
/// gradients: result[i] = grad U(m_i) . n_i.
std::vector<double> midpoint_normal_derivatives(const ChargeSolution& sol,
                                                const AssembledSystem& sys,
                                                const std::vector<EdgeFrame>& frames);

/// Per-edge scalar speeds v_i^+ = -grad U^+(m_i) . n_i and
/// v_i^- = +grad U^-(m_i) . n_i.
std::pair<std::vector<double>, std::vector<double>> edge_velocities(
    const ChargeSolution& sol_int, const ChargePlacement& pl_int, const ChargeSolution& sol_ext,
    const ChargePlacement& pl_ext, const std::vector<EdgeFrame>& frames);

}  // namespace msk
