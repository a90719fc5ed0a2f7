#include "dirac/jost.hpp"

#include <cmath>

namespace dirac {

namespace {

constexpr Complex kImag{0.0, 1.0};

// Geometric sums entering the Green's kernel, evaluated through the closed
// form away from z^2 = 1 and through the explicit polynomial near it (which
// also provides the exact limit values at the band edges z = +-1):
//   S_l = z (1 - z^{2l}) / (1 - z^2) = z + z^3 + ... + z^{2l-1}
//   T_l = (1 + z^{2l+1}) / (1 + z)   = 1 - z + z^2 - ... + z^{2l}
//   U_l = (1 + z^{2l-1}) / (1 + z)   = 1 - z + ... + z^{2l-2}
Complex geom_S(const Complex& z, int l) {
    const Complex z2 = z * z;
    if (std::abs(1.0 - z2) > 1e-2) return z * (1.0 - std::pow(z2, l)) / (1.0 - z2);
    Complex acc = 0.0, zp = z;
    for (int j = 0; j < l; ++j) {
        acc += zp;
        zp *= z2;
    }
    return acc;
}

Complex alt_sum(const Complex& z, int terms) {  // 1 - z + z^2 - ... (terms summands)
    if (std::abs(1.0 + z) > 1e-2) {
        return (1.0 - std::pow(-z, terms)) / (1.0 + z);
    }
    Complex acc = 0.0, zp = 1.0;
    for (int j = 0; j < terms; ++j) {
        acc += zp;
        zp *= -z;
    }
    return acc;
}

Complex geom_T(const Complex& z, int l) { return alt_sum(z, 2 * l + 1); }
Complex geom_U(const Complex& z, int l) { return alt_sum(z, 2 * l - 1); }

// A_n of the plus-side recursion and its minus-side counterpart; both are
// invertible exactly when q21 != -1.
Eigen::Matrix2cd a_factor_inverse(SpatialSide side, const Eigen::Matrix2d& q) {
    const double piv = 1.0 + q(0, 1);
    if (std::abs(piv) < 1e-14)
        throw NumericalError("singular A_n factor: 1 + q12 vanishes");
    Eigen::Matrix2cd inv = Eigen::Matrix2cd::Identity();
    if (side == SpatialSide::Plus) {
        // A = [[1, 0], [q11, 1+q12]]
        inv(1, 0) = -q(0, 0) / piv;
        inv(1, 1) = 1.0 / piv;
    } else {
        // A = [[1+q21, q22], [0, 1]]
        inv(0, 0) = 1.0 / piv;
        inv(0, 1) = -q(1, 1) / piv;
    }
    return inv;
}

}  // namespace

Eigen::Vector2cd jost_boundary_vector(SpatialSide side, const SpectralPoint& point) {
    const Complex z = point.z;
    const Complex zinv = 1.0 / z;
    Eigen::Vector2cd e;
    if (point.half_plane == HalfPlane::Plain) {
        const Complex denom = point.mass + point.lambda;
        const Complex alpha = (side == SpatialSide::Plus) ? (1.0 - zinv) / denom
                                                          : (1.0 - z) / denom;
        e << 1.0, alpha;
    } else {
        const Complex denom = point.lambda - point.mass;
        const Complex alpha = (side == SpatialSide::Plus) ? (1.0 - z) / denom
                                                          : (1.0 - zinv) / denom;
        e << alpha, 1.0;
    }
    return e;
}

Eigen::Matrix2cd jost_greens_kernel(SpatialSide side, int l, const SpectralPoint& point) {
    const Complex z = point.z;
    const Complex mu_plus = point.mass + point.lambda;
    const Complex mu_minus = point.lambda - point.mass;
    Eigen::Matrix2cd g;
    if (side == SpatialSide::Plus) {
        if (l == 0) {
            g << 0.0, 0.0, -1.0, 0.0;
            return g;
        }
        if (l < 0) throw ValidationError("plus-side kernel needs l >= 0");
        g << mu_plus * geom_S(z, l), z * geom_U(z, l),
             -geom_T(z, l),          mu_minus * geom_S(z, l);
        return g;
    }
    if (l == 0) {
        g << 0.0, -1.0, 0.0, 0.0;
        return g;
    }
    if (l > 0) throw ValidationError("minus-side kernel needs l <= 0");
    const int la = -l;
    g << mu_plus * geom_S(z, la), -geom_T(z, la),
         z * geom_U(z, la),       mu_minus * geom_S(z, la);
    return g;
}

Eigen::Vector2cd JostSolution::w_at(int n) const {
    const Complex phase = (side == SpatialSide::Plus)
                              ? std::pow(point.z, n)
                              : std::pow(point.z, -n);
    return phase * h_at(n);
}

JostSolution jost_solution(SpatialSide side, const SpectralPoint& point,
                           const MatrixPotential& Q, const LatticeWindow& window) {
    JostSolution sol;
    sol.side = side;
    sol.branch = point.half_plane;
    sol.point = point;
    sol.window = window;
    sol.boundary_vector = jost_boundary_vector(side, point);
    sol.tail_error = Q.truncation_tail();

    if (Q.empty()) {
        sol.h.assign(static_cast<size_t>(window.size()), sol.boundary_vector);
        return sol;
    }

    const LatticeWindow supp = Q.support();
    if (side == SpatialSide::Plus) {
        // backward pass from above the support; the k-sum only sees already
        // computed sites, so one pass is exact
        const int top = std::max(window.n_max, supp.n_max);
        const int bottom = std::min(window.n_min, supp.n_min);
        const LatticeWindow full{bottom, top};
        std::vector<Eigen::Vector2cd> h(static_cast<size_t>(full.size()));
        std::vector<Eigen::Vector2cd> qh(static_cast<size_t>(full.size()),
                                         Eigen::Vector2cd::Zero());
        for (int n = top; n >= bottom; --n) {
            Eigen::Vector2cd rhs = sol.boundary_vector;
            for (const auto& [k, qk] : Q.entries()) {
                if (k <= n || k > top) continue;
                rhs += jost_greens_kernel(side, k - n, point) *
                       qh[static_cast<size_t>(full.index_of(k))];
            }
            Eigen::Vector2cd hn = (n >= supp.n_min && n <= supp.n_max)
                                      ? (a_factor_inverse(side, Q.at(n)) * rhs).eval()
                                      : rhs;
            h[static_cast<size_t>(full.index_of(n))] = hn;
            qh[static_cast<size_t>(full.index_of(n))] = Q.at(n) * hn;
        }
        sol.h.resize(static_cast<size_t>(window.size()));
        for (int n = window.n_min; n <= window.n_max; ++n)
            sol.h[static_cast<size_t>(window.index_of(n))] =
                h[static_cast<size_t>(full.index_of(n))];
    } else {
        const int top = std::max(window.n_max, supp.n_max);
        const int bottom = std::min(window.n_min, supp.n_min);
        const LatticeWindow full{bottom, top};
        std::vector<Eigen::Vector2cd> h(static_cast<size_t>(full.size()));
        std::vector<Eigen::Vector2cd> qh(static_cast<size_t>(full.size()),
                                         Eigen::Vector2cd::Zero());
        for (int n = bottom; n <= top; ++n) {
            Eigen::Vector2cd rhs = sol.boundary_vector;
            for (const auto& [k, qk] : Q.entries()) {
                if (k >= n || k < bottom) continue;
                rhs += jost_greens_kernel(side, k - n, point) *
                       qh[static_cast<size_t>(full.index_of(k))];
            }
            Eigen::Vector2cd hn = (n >= supp.n_min && n <= supp.n_max)
                                      ? (a_factor_inverse(side, Q.at(n)) * rhs).eval()
                                      : rhs;
            h[static_cast<size_t>(full.index_of(n))] = hn;
            qh[static_cast<size_t>(full.index_of(n))] = Q.at(n) * hn;
        }
        sol.h.resize(static_cast<size_t>(window.size()));
        for (int n = window.n_min; n <= window.n_max; ++n)
            sol.h[static_cast<size_t>(window.index_of(n))] =
                h[static_cast<size_t>(full.index_of(n))];
    }
    return sol;
}

JostSolution jost_tilde(SpatialSide side, const SpectralPoint& point,
                        const MatrixPotential& Q, const LatticeWindow& window) {
    if (point.half_plane != HalfPlane::Tilde)
        throw ValidationError("jost_tilde expects a tilde-branch spectral point");
    return jost_solution(side, point, Q, window);
}

double jost_residual(const JostSolution& sol, const ModelParams& params,
                     const MatrixPotential& Q) {
    if (sol.window.size() < 3) throw ValidationError("window too small for a residual check");
    // measure over the support window (plus a margin); further out the
    // reconstructed w grows like z^{-|n|} and rounding swamps an absolute test
    LatticeWindow probe = sol.window;
    if (!Q.empty()) {
        const LatticeWindow s = Q.support().grown(2);
        probe = LatticeWindow{std::max(probe.n_min, s.n_min), std::min(probe.n_max, s.n_max)};
    }
    SpinorSequence w(probe);
    for (int n = probe.n_min; n <= probe.n_max; ++n) w.at(n) = sol.w_at(n);
    const SpinorSequence dw = apply_dirac(params, Q, w);
    double worst = 0.0;
    for (int n = dw.window.n_min; n <= dw.window.n_max; ++n)
        worst = std::max(worst, (dw.at(n) - sol.point.lambda * w.at(n)).cwiseAbs().maxCoeff());
    return worst;
}

DerivativeGrowthReport check_derivative_growth(SpatialSide side, const MatrixPotential& Q,
                                               const std::vector<Complex>& theta_grid,
                                               const LatticeWindow& n_range, int order,
                                               double m) {
    if (order < 0 || order > 2)
        throw ValidationError("derivative growth check supports orders 0..2");
    const double step = 1e-4;
    DerivativeGrowthReport report{order, 0.0, step};

    const auto envelope = [&](int n) {
        const double signed_n = (side == SpatialSide::Plus) ? -double(n) : double(n);
        if (order == 0) return 1.0;
        return std::max(signed_n * std::pow(std::abs(n), order - 1), 1.0);
    };

    for (const Complex& theta : theta_grid) {
        // central finite-difference stencil in theta
        std::vector<std::vector<Eigen::Vector2cd>> rows;
        const int half = order;  // stencil points needed: order+1 values
        for (int s = -half; s <= half; ++s) {
            const SpectralPoint pt =
                SpectralPoint::from_theta(theta + double(s) * step, m, HalfPlane::Plain);
            rows.push_back(jost_solution(side, pt, Q, n_range).h);
        }
        for (int n = n_range.n_min; n <= n_range.n_max; ++n) {
            const size_t i = static_cast<size_t>(n_range.index_of(n));
            Eigen::Vector2cd d;
            if (order == 0) {
                d = rows[0][i];
            } else if (order == 1) {
                d = (rows[2][i] - rows[0][i]) / (2.0 * step);
            } else {
                d = (rows[3][i] - 2.0 * rows[2][i] + rows[1][i]) / (step * step);
            }
            report.max_ratio =
                std::max(report.max_ratio, d.cwiseAbs().maxCoeff() / envelope(n));
        }
    }
    return report;
}

}  // namespace dirac
