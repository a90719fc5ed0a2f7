#pragma once

#include <Eigen/Dense>

#include "dirac/dispersion.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

// The three matrix weights of the free propagator integrand:
// Omega_{-1} = [[0,0],[-1,0]], Omega_1 = [[0,-1],[0,0]],
// Omega_0(theta) = [[m+g, 1],[1, -m+g]]; index shift j on e^{-i theta |n-k+j|}.
Eigen::Matrix2d omega_weight(int j, double theta, double m);

struct OmegaWeights {
    Eigen::Matrix2d minus_one;
    Eigen::Matrix2d zero;
    Eigen::Matrix2d plus_one;

    static OmegaWeights at(double theta, double m) {
        return {omega_weight(-1, theta, m), omega_weight(0, theta, m),
                omega_weight(1, theta, m)};
    }
    const Eigen::Matrix2d& shift(int j) const {
        return j < 0 ? minus_one : (j > 0 ? plus_one : zero);
    }
};

// Kernel of (-Delta_L - omega)^{-1}: e^{-i theta(omega)|n-k|} / (2i sin theta).
Complex free_laplacian_resolvent_entry(Complex omega, int n, int k);
Complex free_laplacian_resolvent_entry(double omega, Side side, int n, int k);

// Kernel block of (D_0 - lambda)^{-1} = (D_0 + lambda)(-Delta_L - omega)^{-1}:
// diagonal (m+lambda, -m+lambda) times the scalar kernel, off-diagonals the
// forward/backward differences of it in n.
Eigen::Matrix2cd free_dirac_resolvent_block(const SpectralPoint& point, int n, int k);

struct BlockResult {
    Eigen::Matrix2cd block;
    double quad_error = 0.0;
};

// [e^{-i t D_0}]_{n,k} as a theta-integral over both spectral bands.
// Throws NumericalError when the doubled-panel estimate exceeds the tolerance.
BlockResult free_propagator_block(double t, int n, int k, double m,
                                  const QuadratureSpec& quad = {});

// Batched evaluation over the relative index p = n - k (the free kernel is
// block-Toeplitz). Same quadrature contract as the single-block call.
std::vector<BlockResult> free_propagator_profile(double t, int p_min, int p_max, double m,
                                                 const QuadratureSpec& quad = {});

}  // namespace dirac
