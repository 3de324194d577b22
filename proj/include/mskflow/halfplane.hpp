#pragma once

#include <utility>
#include <vector>

#include "mskflow/evolve.hpp"
#include "mskflow/mfs.hpp"

namespace msk {

/// Open curve in the upper half plane: endpoints pinned to the x-axis,
/// interior vertices strictly above it, numbered counterclockwise around
/// the enclosed region (first vertex is the right contact point).
void validate_halfplane_curve(const PolygonalCurve& curve);

/// Edge/vertex data of a half-plane curve. N vertices give N-1 edges;
/// vertex arrays are vertex-indexed with the endpoint entries zeroed
/// (endpoints carry no turning angle).
struct HalfPlaneGeometry {
    std::vector<EdgeFrame> frames;      // N-1 edges, frames[j] = v_j -> v_{j+1}
    std::vector<double> sin_half;       // N entries, per vertex
    std::vector<double> cos_half;       // N entries, 1 at the endpoints
    std::vector<double> tan_half;       // N entries
    std::vector<Point2> vertex_normal;  // N entries, zero at the endpoints
    std::vector<Point2> vertex_tangent; // N entries, zero at the endpoints
    std::vector<double> kappa;          // N-1 entries, per edge
};

HalfPlaneGeometry hp_geometry(const PolygonalCurve& curve);

/// Per-edge curvature: interior edges use the two-endpoint-angle formula,
/// the two boundary-adjacent edges double their single interior angle.
std::vector<double> hp_curvature(const PolygonalCurve& curve);

/// Charges for the mirrored (Neumann) kernel. Interior problem:
/// y = m + d n with the far dummy z = 1000 y; exterior problem:
/// y = m - d n, z = m - d/2 n. Reflections are taken inside the kernel.
struct MirroredPlacement {
    ProblemSide side = ProblemSide::interior;
    std::vector<Point2> y;
    std::vector<Point2> z;
    double d = 0.0;
};

MirroredPlacement hp_place_charges(const std::vector<EdgeFrame>& frames, ProblemSide side,
                                   double d = 0.0);

/// Four-term kernel E(x-y) - E(x-z) + E(x-ybar) - E(x-zbar); even in the
/// vertical coordinate, so dU/dy = 0 on the axis by construction.
double hp_pair_potential(Point2 x, Point2 y, Point2 z);
Point2 hp_pair_gradient(Point2 x, Point2 y, Point2 z);

struct HpAssembledSystem {
    DenseMatrix A;
    std::vector<double> rhs;
    std::vector<Point2> grad;
};

/// One AP row plus one Dirichlet row per edge midpoint; unknowns Q_0 and
/// one charge per edge.
HpAssembledSystem hp_assemble(const std::vector<EdgeFrame>& frames,
                              const MirroredPlacement& placement,
                              const std::vector<double>& kappa);

ChargeSolution hp_solve(const std::vector<EdgeFrame>& frames, const MirroredPlacement& placement,
                        const std::vector<double>& kappa,
                        const HpAssembledSystem* pre = nullptr);

/// Convenience: geometry + placement + solve for one side of a curve.
ChargeSolution hp_solve(const PolygonalCurve& curve, ProblemSide side);

double hp_potential(const ChargeSolution& sol, const MirroredPlacement& placement, Point2 x);
Point2 hp_gradient(const ChargeSolution& sol, const MirroredPlacement& placement, Point2 x);

/// Horizontal endpoint speeds from the adjacent edge speeds: the contact
/// point of an edge translating at speed v along its normal slides along
/// the axis at v / t_y (t_y = sin of the contact angle, signed by the
/// traversal direction). Throws TangentialContactError when the contact
/// angle drops below 1e-3 rad.
std::pair<double, double> hp_endpoint_velocity(double v_first_edge, double v_last_edge,
                                               const EdgeFrame& first_edge,
                                               const EdgeFrame& last_edge);

/// Tangential speeds with W_1 = W_N = 0, integrated forward from the first
/// endpoint; the leftover residual of the final (overdetermined) equation
/// is returned alongside.
std::pair<std::vector<double>, double> hp_udm(const HalfPlaneGeometry& geom,
                                              const std::vector<double>& w,
                                              const std::vector<double>& V, double omega);

/// Contact angles arccos(t . e1) at the right and left endpoints, radians.
std::pair<double, double> hp_contact_angles(const PolygonalCurve& curve);

/// Largest |dU/dy| over sample points on the axis spanning the curve's
/// footprint (the mirrored kernel makes this zero up to rounding).
double hp_neumann_residual(const ChargeSolution& sol, const MirroredPlacement& placement,
                           const PolygonalCurve& curve, int samples = 10);

struct HalfPlaneState {
    PolygonalCurve curve;
    double time = 0.0;
    long step = 0;
    StepParams params;
};

/// One explicit Euler step of the boundary-contact scheme; interior
/// vertices follow V N + W T, endpoints slide along the axis.
MetricsRecord hp_step(HalfPlaneState& state);

struct HpRunHooks {
    std::function<void(const HalfPlaneState&, const MetricsRecord&)> on_step;
};

RunResult hp_run(HalfPlaneState& state, double t_end, long max_steps,
                 const HpRunHooks& hooks = {});

}  // namespace msk
