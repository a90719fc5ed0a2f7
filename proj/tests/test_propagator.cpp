#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac/free_dirac.hpp"
#include "dirac/propagator.hpp"

using namespace dirac;
using Complex = std::complex<double>;

namespace {

// Strong enough that the true bound states sit outside the finite-section
// classification margin 10/N; a weak site binds states a few 1e-2 from the
// band edges and the oracle P_c would silently keep them.
MatrixPotential generic_site() {
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    q(0, 0) = 0.8;
    q(1, 1) = -0.6;
    return MatrixPotential::from_entries({{0, q}});
}

MatrixPotential strong_site() {
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    q(0, 0) = 5.0;
    return MatrixPotential::from_entries({{0, q}});
}

}  // namespace

TEST_CASE("spectral propagator reproduces the free kernel at Q = 0") {
    const ModelParams params(1.0);
    const LatticeWindow probe{-6, 6};
    for (double t : {0.7, 5.0, 20.0}) {
        const PropagatorSnapshot snap = propagator_pc_spectral(
            t, MatrixPotential::zero(), params, probe, probe);
        for (int n = -6; n <= 6; n += 3)
            for (int k = -6; k <= 6; k += 2) {
                const BlockResult free_b = free_propagator_block(t, n, k, params.mass);
                CHECK((snap.kernel.block(n, k) - free_b.block).cwiseAbs().maxCoeff() < 1e-8);
            }
    }
}

TEST_CASE("oracle propagator basics: projector at t = 0, isometry, group law") {
    const ModelParams params(1.0);
    const TruncatedOperator op(params, strong_site(), 80);
    const LatticeWindow probe{-80, 80};

    const PropagatorSnapshot at0 = propagator_pc_oracle(0.0, op, probe, probe);
    const KernelBlockMatrix pc = op.pc_projector(probe, probe);
    CHECK((at0.kernel.data - pc.data).cwiseAbs().maxCoeff() < 1e-12);

    // norm preservation on the continuum subspace
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXcd x(pc.data.cols());
    for (int i = 0; i < x.size(); ++i) x(i) = Complex(dist(gen), dist(gen));
    const Eigen::VectorXcd pcx = pc.data * x;
    const PropagatorSnapshot at7 = propagator_pc_oracle(7.0, op, probe, probe);
    CHECK(std::abs((at7.kernel.data * x).norm() - pcx.norm()) < 1e-10 * pcx.norm());

    // group property: U(t1) U(t2) = U(t1 + t2) P_c
    const PropagatorSnapshot a = propagator_pc_oracle(3.0, op, probe, probe);
    const PropagatorSnapshot b = propagator_pc_oracle(4.0, op, probe, probe);
    const Eigen::MatrixXcd lhs = a.kernel.data * b.kernel.data;
    const Eigen::MatrixXcd rhs = at7.kernel.data * pc.data;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("two-method agreement for a compact potential") {
    const ModelParams params(1.0);
    const MatrixPotential Q = generic_site();
    const int N = 120;
    const TruncatedOperator op(params, Q, N);
    const LatticeWindow probe{-10, 10};
    for (double t : {0.0, 4.0, 10.0}) {
        const PropagatorSnapshot spectral =
            propagator_pc_spectral(t, Q, params, probe, probe);
        const PropagatorSnapshot oracle = propagator_pc_oracle(t, op, probe, probe);
        const double tol =
            std::max(1e-6, spectral.quad_error ? 10.0 * *spectral.quad_error : 0.0);
        CHECK((spectral.kernel.data - oracle.kernel.data).cwiseAbs().maxCoeff() < tol);
    }
}

TEST_CASE("spectral t = 0 kernel equals the continuum projector") {
    const ModelParams params(1.0);
    const MatrixPotential Q = strong_site();
    const TruncatedOperator op(params, Q, 150);
    REQUIRE(!op.bound_indices().empty());
    const LatticeWindow probe{-8, 8};
    const PropagatorSnapshot spectral = propagator_pc_spectral(0.0, Q, params, probe, probe);
    const KernelBlockMatrix pc = op.pc_projector(probe, probe);
    CHECK((spectral.kernel.data - pc.data).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("finite propagation cone") {
    const ModelParams params(1.0);
    const TruncatedOperator op(params, generic_site(), 140);
    const double t = 50.0;
    const LatticeWindow rows{95, 110};  // |n - k| > t + 40 for k near 0
    const LatticeWindow cols{-3, 3};
    const PropagatorSnapshot snap = propagator_pc_oracle(t, op, rows, cols);
    CHECK(snap.kernel.max_abs() < 1e-8);
}

TEST_CASE("kernel symmetry and reflection invariance") {
    const ModelParams params(1.0);

    // free kernel depends on n - k only: literal (n,k) -> (-k,-n) invariance
    const TruncatedOperator free_op(params, MatrixPotential::zero(), 100);
    const LatticeWindow probe{-9, 9};
    const PropagatorSnapshot free_snap = propagator_pc_oracle(6.0, free_op, probe, probe);
    for (int n = -9; n <= 9; ++n)
        for (int k = n; k <= 9; ++k)
            CHECK((free_snap.kernel.block(n, k) - free_snap.kernel.block(-k, -n))
                      .cwiseAbs()
                      .maxCoeff() < 1e-9);

    // reflection + component swap conjugates D to -D when q11 = -q22 and the
    // support is symmetric; on kernels: K(-k,-n) = C^{-1} K(n,k)^H C
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    q(0, 0) = 0.7;
    q(1, 1) = -0.7;
    const MatrixPotential Q = MatrixPotential::from_entries({{0, q}});
    const TruncatedOperator op(params, Q, 100);
    const PropagatorSnapshot snap = propagator_pc_oracle(6.0, op, probe, probe);
    Eigen::Matrix2cd C;
    C << 0.0, 1.0, -1.0, 0.0;
    const Eigen::Matrix2cd Cinv = C.inverse();
    for (int n = -9; n <= 9; ++n)
        for (int k = n; k <= 9; ++k) {
            // transpose symmetry (real symmetric generator)
            CHECK((snap.kernel.block(n, k) - snap.kernel.block(k, n).transpose())
                      .cwiseAbs()
                      .maxCoeff() < 1e-9);
            const Eigen::Matrix2cd lhs = snap.kernel.block(-k, -n);
            const Eigen::Matrix2cd rhs = Cinv * snap.kernel.block(n, k).adjoint() * C;
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
        }
}

TEST_CASE("hermitian time symmetry of snapshots") {
    const ModelParams params(1.0);
    const MatrixPotential Q = generic_site();
    const TruncatedOperator op(params, Q, 90);
    const LatticeWindow probe{-7, 7};
    const PropagatorSnapshot fwd = propagator_pc_oracle(5.0, op, probe, probe);
    const PropagatorSnapshot bwd = propagator_pc_oracle(-5.0, op, probe, probe);
    for (int n = -7; n <= 7; ++n)
        for (int k = -7; k <= 7; ++k)
            CHECK((fwd.kernel.block(n, k) - bwd.kernel.block(k, n).adjoint())
                      .cwiseAbs()
                      .maxCoeff() < 1e-9);
}

TEST_CASE("quadrature failure carries the estimate") {
    const ModelParams params(1.0);
    QuadratureSpec strict;
    strict.min_panels = 2;
    strict.panels_per_unit_time = 0.01;
    strict.tolerance = 1e-13;
    const LatticeWindow probe{-4, 4};
    try {
        propagator_pc_spectral(35.0, generic_site(), params, probe, probe, strict);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.estimate() > 1e-13);
    }
}

TEST_CASE("two-method agreement at scale (t = 30, wide probe)") {
    const ModelParams params(1.0);
    const MatrixPotential Q = generic_site();
    const TruncatedOperator op(params, Q, 300);
    const LatticeWindow probe{-40, 40};
    const double t = 30.0;
    const PropagatorSnapshot spectral = propagator_pc_spectral(t, Q, params, probe, probe);
    const PropagatorSnapshot oracle = propagator_pc_oracle(t, op, probe, probe);
    const double tol = std::max(1e-6, spectral.quad_error ? 10.0 * *spectral.quad_error : 0.0);
    CHECK((spectral.kernel.data - oracle.kernel.data).cwiseAbs().maxCoeff() < tol);
}
