#include "mskflow/velocity.hpp"

#include <cmath>

namespace msk {

std::vector<double> combined_edge_speed(const std::vector<double>& v_plus,
                                        const std::vector<double>& v_minus, double sigma_i,
                                        double sigma_e) {
    std::vector<double> w(v_plus.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = sigma_i * v_plus[i] + sigma_e * v_minus[i];
    }
    return w;
}

std::vector<double> vertex_normal_velocity(const std::vector<double>& w,
                                           const std::vector<VertexFrame>& vframes) {
    std::size_t n = w.size();
    std::vector<double> V(n);
    for (std::size_t k = 0; k < n; ++k) {
        V[k] = (w[k] + w[(k + 1) % n]) / (2.0 * vframes[k].cos_half);
    }
    return V;
}

std::vector<double> udm_tangential(const std::vector<double>& kappa, const std::vector<double>& w,
                                   const std::vector<double>& V,
                                   const std::vector<EdgeFrame>& frames,
                                   const std::vector<VertexFrame>& vframes, double omega) {
    std::size_t n = frames.size();
    double L = 0.0;
    double Ldot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        L += frames[i].r;
        Ldot += kappa[i] * w[i] * frames[i].r;
    }
    double nd = static_cast<double>(n);

    // psi[k] drives edge k toward the mean spacing; the k = 0 entry is an
    // arbitrary anchor absorbed by the recentering constant C.
    std::vector<double> Psi(n);
    double run = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t prev = k - 1;
        double psi = Ldot / nd - V[k] * vframes[k].sin_half - V[prev] * vframes[prev].sin_half +
                     (L / nd - frames[k].r) * omega;
        run += psi;
        Psi[k] = run;
    }
    Psi[0] = 0.0;

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        num += Psi[k] / vframes[k].cos_half;
        den += 1.0 / vframes[k].cos_half;
    }
    double C = -num / den;

    std::vector<double> W(n);
    for (std::size_t k = 0; k < n; ++k) {
        W[k] = (Psi[k] + C) / vframes[k].cos_half;
    }
    return W;
}

double length_derivative(const std::vector<double>& kappa, const std::vector<double>& w,
                         const std::vector<EdgeFrame>& frames) {
    double s = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) s += kappa[i] * w[i] * frames[i].r;
    return s;
}

std::pair<double, double> area_derivative(const std::vector<double>& w,
                                          const std::vector<double>& W,
                                          const std::vector<EdgeFrame>& frames,
                                          const std::vector<VertexFrame>& vframes) {
    std::size_t n = frames.size();
    double flux = 0.0, errA = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t next = (k + 1) % n;
        flux += w[k] * frames[k].r;
        errA += (W[k] * vframes[k].sin_half - 0.5 * (w[next] - w[k])) * 0.5 *
                (frames[next].r - frames[k].r);
    }
    return {flux + errA, errA};
}

}  // namespace msk
