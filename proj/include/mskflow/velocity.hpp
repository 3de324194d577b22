#pragma once

#include <utility>
#include <vector>

#include "mskflow/geometry.hpp"

namespace msk {

/// Per-edge and per-vertex velocities of one curve for one step.
struct VelocityField {
    std::vector<double> v_plus;   // per edge, interior side
    std::vector<double> v_minus;  // per edge, exterior side
    std::vector<double> V;        // per vertex, normal speed
    std::vector<double> W;        // per vertex, tangential speed
};

/// Combined per-edge speed w_i = sigma_i v_i^+ + sigma_e v_i^-.
/// sigma_i = sigma_e = 1 reduces to the two-phase jump v^+ + v^-.
std::vector<double> combined_edge_speed(const std::vector<double>& v_plus,
                                        const std::vector<double>& v_minus, double sigma_i,
                                        double sigma_e);

/// V_k = (w_k + w_{k+1}) / (2 cos_k) at each vertex.
std::vector<double> vertex_normal_velocity(const std::vector<double>& w,
                                           const std::vector<VertexFrame>& vframes);

/// Uniform-distribution tangential speeds. psi_0 = 0,
/// psi_k = Ldot/N - V_k sin_k - V_{k-1} sin_{k-1} + (L/N - r_k) omega,
/// Psi = running sum, C recenters so that sum_k W_k = 0,
/// W_k = (Psi_k + C) / cos_k.
std::vector<double> udm_tangential(const std::vector<double>& kappa, const std::vector<double>& w,
                                   const std::vector<double>& V,
                                   const std::vector<EdgeFrame>& frames,
                                   const std::vector<VertexFrame>& vframes, double omega);

/// Ldot = sum_i kappa_i w_i r_i.
double length_derivative(const std::vector<double>& kappa, const std::vector<double>& w,
                         const std::vector<EdgeFrame>& frames);

/// Adot = sum_i w_i r_i + errA with
/// errA = sum_k (W_k sin_k - (w_{k+1} - w_k)/2) (r_{k+1} - r_k)/2.
/// Returns (Adot, errA).
std::pair<double, double> area_derivative(const std::vector<double>& w,
                                          const std::vector<double>& W,
                                          const std::vector<EdgeFrame>& frames,
                                          const std::vector<VertexFrame>& vframes);

}  // namespace msk
