#include "mskflow/oracle.hpp"

#include <cmath>

namespace msk {

double annulus_potential(const AnnulusState& state, Point2 x) {
    double r = x.norm();
    if (r >= state.R2) return 1.0 / state.R2;
    if (r < state.R1) return -1.0 / state.R1;
    double coeff = (1.0 / state.R1 + 1.0 / state.R2) / std::log(state.R2 / state.R1);
    return -1.0 / state.R1 + coeff * std::log(r / state.R1);
}

std::pair<double, double> annulus_speeds(const AnnulusState& state) {
    double num = 1.0 / state.R1 + 1.0 / state.R2;
    double den = std::log(state.R2 / state.R1);
    return {-num / (state.R1 * den), -num / (state.R2 * den)};
}

AnnulusTrajectory annulus_trajectory(const AnnulusState& state, double dt, double t_end) {
    AnnulusTrajectory traj;
    AnnulusState s = state;
    double t = 0.0;
    traj.samples.push_back({t, s.R1, s.R2});
    while (t < t_end) {
        auto [d1, d2] = annulus_speeds(s);
        s.R1 += dt * d1;
        s.R2 += dt * d2;
        t += dt;
        if (s.R1 <= 0.0) {
            traj.vanished = true;
            traj.vanish_time = t;
            break;
        }
        traj.samples.push_back({t, s.R1, s.R2});
    }
    return traj;
}

double harmonic_residual(const std::function<double(Point2)>& potential, Point2 x, double h) {
    try {
        double s = potential({x.x + h, x.y}) + potential({x.x - h, x.y}) +
                   potential({x.x, x.y + h}) + potential({x.x, x.y - h}) - 4.0 * potential(x);
        return s / (h * h);
    } catch (const SingularEvaluationError& e) {
        throw StencilError(std::string("stencil crosses a singular point: ") + e.what());
    }
}

}  // namespace msk
