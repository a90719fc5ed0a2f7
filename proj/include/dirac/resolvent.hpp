#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dirac/jost.hpp"
#include "dirac/scattering.hpp"

namespace dirac {

// Dense (n,k)-indexed family of 2x2 complex blocks.
struct KernelBlockMatrix {
    enum class Kind { Resolvent, Propagator, Projector };
    Kind kind = Kind::Resolvent;
    Complex parameter;  // lambda for resolvents, t for propagators
    LatticeWindow n_range, k_range;
    Eigen::MatrixXcd data;  // 2|n| x 2|k|, row-block n, column-block k

    KernelBlockMatrix() = default;
    KernelBlockMatrix(Kind kind_, Complex param, const LatticeWindow& nr,
                      const LatticeWindow& kr)
        : kind(kind_), parameter(param), n_range(nr), k_range(kr),
          data(Eigen::MatrixXcd::Zero(2 * nr.size(), 2 * kr.size())) {}

    Eigen::Matrix2cd block(int n, int k) const {
        return data.block<2, 2>(2 * n_range.index_of(n), 2 * k_range.index_of(k));
    }
    void set_block(int n, int k, const Eigen::Matrix2cd& b) {
        data.block<2, 2>(2 * n_range.index_of(n), 2 * k_range.index_of(k)) = b;
    }
    double max_abs() const { return data.cwiseAbs().maxCoeff(); }
};

// Shifted outer product w1_k (x) w2_n of the resolvent representation:
// [[u1_k u2_n, v1_{k+1} u2_n], [u1_k v2_n, v1_{k+1} v2_n]].
Eigen::Matrix2cd tensor_block(const SpinorSequence& w1, int k, const SpinorSequence& w2,
                              int n);

// Pointwise kernel of (D - lambda)^{-1} built from the Jost pair of the
// branch selected by point.half_plane. Throws near poles (|W| ~ 0 off the
// bands, i.e. at bound states).
Eigen::Matrix2cd resolvent_block(const SpectralPoint& point, const MatrixPotential& Q,
                                 int n, int k);
KernelBlockMatrix resolvent_kernel(const SpectralPoint& point, const MatrixPotential& Q,
                                   const LatticeWindow& n_range,
                                   const LatticeWindow& k_range);

// Finite section of D on [-N, N] with zero exterior values: the brute-force
// ground truth for resolvents, projectors and propagators.
class TruncatedOperator {
public:
    TruncatedOperator(const ModelParams& params, const MatrixPotential& Q, int N);

    int half_width() const { return N_; }
    int dim() const { return 2 * (2 * N_ + 1); }
    const ModelParams& params() const { return params_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    void decompose() const;  // idempotent, called lazily by the users below
    const Eigen::VectorXd& eigenvalues() const;
    const Eigen::MatrixXd& eigenvectors() const;

    double edge_margin() const { return 10.0 / N_; }
    // eigenvalue indices farther than edge_margin from the closed bands
    const std::vector<int>& bound_indices() const;
    bool is_bound(int j) const;

    // I minus the bound-state projectors, restricted to the given block ranges
    KernelBlockMatrix pc_projector(const LatticeWindow& n_range,
                                   const LatticeWindow& k_range) const;

    // dense solve of (M - lambda) X = I restricted to the requested blocks
    KernelBlockMatrix resolvent(Complex lambda, const LatticeWindow& n_range,
                                const LatticeWindow& k_range) const;

    int row_of(int site, int component) const;  // component 0 = u, 1 = v

private:
    ModelParams params_;
    int N_;
    Eigen::MatrixXd matrix_;
    mutable bool decomposed_ = false;
    mutable Eigen::VectorXd eigenvalues_;
    mutable Eigen::MatrixXd eigenvectors_;
    mutable std::vector<int> bound_;
};

struct LapProbeRow {
    double eps;
    double distance;
};

struct LapProbeTable {
    std::vector<LapProbeRow> rows;
    bool monotone;  // strictly decreasing up to a 1e-12 noise floor
};

// Weighted Hilbert-Schmidt distance between R(lambda +- i eps) and the
// boundary kernel R(lambda +- i0), both from the Jost representation, over
// the interior blocks |n|,|k| <= interior_half_width. Distances are reported
// relative to the weighted HS norm of the boundary kernel (the raw distance
// is ~ eps * |d_lambda R| and scales with the potential's response). The
// dense finite section cannot follow eps below its level spacing, so the
// off-axis kernels are evaluated exactly; Jost-vs-dense agreement is checked
// separately at spectrally separated lambda.
LapProbeTable lap_probe(double lambda, Side side, const std::vector<double>& eps_list,
                        double sigma, const MatrixPotential& Q, double m,
                        int interior_half_width = 8);

}  // namespace dirac
