#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mskflow/geometry.hpp"

namespace msk {

/// Concentric-circles reference state: inner radius R1, outer radius R2.
struct AnnulusState {
    double R1 = 1.0;
    double R2 = 3.0;
};

/// Exact potential of the concentric-circles solution: -1/R1 inside the
/// inner circle, 1/R2 outside the outer one, log interpolation between.
double annulus_potential(const AnnulusState& state, Point2 x);

/// Exact radius speeds (both negative; both circles shrink):
/// dR1/dt = -(1/R1 + 1/R2) / (R1 log(R2/R1)), dR2/dt likewise with R2.
std::pair<double, double> annulus_speeds(const AnnulusState& state);

struct AnnulusSample {
    double t = 0.0;
    double R1 = 0.0;
    double R2 = 0.0;
};

struct AnnulusTrajectory {
    std::vector<AnnulusSample> samples;
    bool vanished = false;
    double vanish_time = 0.0;  // first t with R1 <= 0
};

/// Forward Euler integration of annulus_speeds with step dt; stops at t_end
/// or when the inner radius reaches zero.
AnnulusTrajectory annulus_trajectory(const AnnulusState& state, double dt, double t_end);

/// 5-point Laplacian (U(x+h e1) + U(x-h e1) + U(x+h e2) + U(x-h e2)
/// - 4 U(x)) / h^2; the evaluator may throw SingularEvaluationError, which
/// is rethrown as StencilError.
double harmonic_residual(const std::function<double(Point2)>& potential, Point2 x, double h);

}  // namespace msk
