#pragma once

#include <Eigen/Dense>

#include "dirac/dispersion.hpp"
#include "dirac/lattice.hpp"

namespace dirac {

enum class SpatialSide { Plus, Minus };

// Phase-stripped Jost data h_n = e^{+-i n theta} w_n on a window. Beyond the
// potential support on the matching side h_n equals the boundary vector
// exactly: (1, alpha_+-) on the plain branch, (alpha~_+-, 1) on the tilde one.
struct JostSolution {
    SpatialSide side;
    HalfPlane branch;
    SpectralPoint point;
    LatticeWindow window;
    std::vector<Eigen::Vector2cd> h;
    Eigen::Vector2cd boundary_vector;
    double tail_error = 0.0;

    const Eigen::Vector2cd& h_at(int n) const {
        return h[static_cast<size_t>(window.index_of(n))];
    }
    // w_n = e^{-+ i n theta} h_n; grows/decays like z^{+-n}, so keep windows
    // moderate for strongly complex theta
    Eigen::Vector2cd w_at(int n) const;
};

// Normalization vectors of the four families.
Eigen::Vector2cd jost_boundary_vector(SpatialSide side, const SpectralPoint& point);

// Volterra recursion from the matching infinity: one backward (plus side) or
// forward (minus side) pass is exact for finitely supported potentials. The
// branch is taken from point.half_plane.
JostSolution jost_solution(SpatialSide side, const SpectralPoint& point,
                           const MatrixPotential& Q, const LatticeWindow& window);

inline JostSolution jost_plus(const SpectralPoint& p, const MatrixPotential& Q,
                              const LatticeWindow& w) {
    return jost_solution(SpatialSide::Plus, p, Q, w);
}
inline JostSolution jost_minus(const SpectralPoint& p, const MatrixPotential& Q,
                               const LatticeWindow& w) {
    return jost_solution(SpatialSide::Minus, p, Q, w);
}
JostSolution jost_tilde(SpatialSide side, const SpectralPoint& point,
                        const MatrixPotential& Q, const LatticeWindow& window);

// Green's kernels of the recursion, exposed for validation. l >= 1 on the plus
// side, l <= -1 on the minus side; polynomials in z, regular at z = +-1.
Eigen::Matrix2cd jost_greens_kernel(SpatialSide side, int l, const SpectralPoint& point);

// max interior residual of D w - lambda w for the reconstructed solution
double jost_residual(const JostSolution& sol, const ModelParams& params,
                     const MatrixPotential& Q);

// Finite-difference theta-derivatives of h_n against the growth envelope
// max((-+n)|n|^{p-1}, 1). Bounded ratios realize the derivative estimates.
struct DerivativeGrowthReport {
    int order;
    double max_ratio;
    double grid_step;
};
DerivativeGrowthReport check_derivative_growth(SpatialSide side, const MatrixPotential& Q,
                                               const std::vector<Complex>& theta_grid,
                                               const LatticeWindow& n_range, int order,
                                               double m);

}  // namespace dirac
