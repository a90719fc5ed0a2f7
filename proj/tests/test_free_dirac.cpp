#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "dirac/free_dirac.hpp"
#include "dirac/propagator.hpp"
#include "dirac/resolvent.hpp"

using namespace dirac;
using Complex = std::complex<double>;

TEST_CASE("free Laplacian resolvent closed form at omega = -2") {
    // theta = -i arccosh 2, sin theta = -i sqrt(3), e^{-i theta} = 2 - sqrt(3)
    const Complex diag = free_laplacian_resolvent_entry(Complex(-2.0, 0.0), 7, 7);
    CHECK(std::abs(diag - Complex(1.0 / (2.0 * std::sqrt(3.0)), 0.0)) < 1e-15);
    CHECK(diag.real() == doctest::Approx(0.28867513459481287));

    const Complex off = free_laplacian_resolvent_entry(Complex(-2.0, 0.0), 3, 2);
    CHECK(off.real() == doctest::Approx((2.0 - std::sqrt(3.0)) / (2.0 * std::sqrt(3.0))));
    CHECK(off.real() == doctest::Approx(0.0773502691896258));

    // symmetry in |n-k|
    for (int d = 0; d < 5; ++d)
        CHECK(std::abs(free_laplacian_resolvent_entry(Complex(-2.0, 0.0), d, 0) -
                       free_laplacian_resolvent_entry(Complex(-2.0, 0.0), 0, d)) == 0.0);

    // brute force: solve (-Delta_L - omega) u = delta_0 on a 400-site window
    const int N = 200;
    const int dim = 2 * N + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        A(i, i) = 2.0 - (-2.0);
        if (i > 0) A(i, i - 1) = -1.0;
        if (i + 1 < dim) A(i, i + 1) = -1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs(N) = 1.0;
    const Eigen::VectorXd u = A.lu().solve(rhs);
    for (int d = 0; d <= 3; ++d)
        CHECK(std::abs(u(N + d) -
                       free_laplacian_resolvent_entry(Complex(-2.0, 0.0), d, 0).real()) <
              1e-12);

    CHECK_THROWS_AS(free_laplacian_resolvent_entry(Complex(0.0, 0.0), 0, 0),
                    NumericalError);
}

TEST_CASE("free Dirac resolvent against the dense inverse") {
    const double m = 1.0;
    const ModelParams params(m);

    // lambda in the gap: real symmetric kernel with the d/d* shift convention
    const SpectralPoint gap = SpectralPoint::from_lambda(Complex(0.5, 0.0), m);
    const Eigen::Matrix2cd b = free_dirac_resolvent_block(gap, 0, 0);
    CHECK(std::abs(b(0, 0).imag()) < 1e-14);
    CHECK(std::abs(b(1, 1).imag()) < 1e-14);
    const Eigen::Matrix2cd bt = free_dirac_resolvent_block(gap, 3, 5);
    const Eigen::Matrix2cd btr = free_dirac_resolvent_block(gap, 5, 3);
    CHECK((bt - btr.transpose()).cwiseAbs().maxCoeff() < 1e-13);

    // dense solve on [-200, 200]
    const TruncatedOperator op(params, MatrixPotential::zero(), 200);
    const LatticeWindow probe{-2, 2};
    const KernelBlockMatrix oracle = op.resolvent(Complex(0.5, 0.0), probe, probe);
    for (int n = -2; n <= 2; ++n)
        for (int k = -2; k <= 2; ++k)
            CHECK((free_dirac_resolvent_block(gap, n, k) - oracle.block(n, k))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);

    // residual check at lambda = 3i: (D0 - lambda) R column = delta column
    const SpectralPoint im3 = SpectralPoint::from_lambda(Complex(0.0, 3.0), m);
    const LatticeWindow w{-30, 30};
    for (int c = 0; c < 2; ++c) {
        SpinorSequence col(w);
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const Eigen::Matrix2cd blk = free_dirac_resolvent_block(im3, n, 0);
            col.at(n) << blk(0, c), blk(1, c);
        }
        const SpinorSequence d = apply_dirac(params, MatrixPotential::zero(), col);
        for (int n = d.window.n_min; n <= d.window.n_max; ++n) {
            Eigen::Vector2cd expect = Eigen::Vector2cd::Zero();
            if (n == 0) expect(c) = 1.0;
            CHECK((d.at(n) - im3.lambda * col.at(n) - expect).cwiseAbs().maxCoeff() <
                  1e-10);
        }
    }
}

TEST_CASE("free propagator is the identity at t = 0") {
    const QuadratureSpec quad;
    for (double m : {0.6, 1.0, 2.5}) {
        const auto prof = free_propagator_profile(0.0, -6, 6, m, quad);
        for (int p = -6; p <= 6; ++p) {
            Eigen::Matrix2cd expect = Eigen::Matrix2cd::Zero();
            if (p == 0) expect.setIdentity();
            CHECK((prof[static_cast<size_t>(p + 6)].block - expect).cwiseAbs().maxCoeff() <
                  1e-12);
        }
    }
}

TEST_CASE("free propagator matches the eigendecomposition oracle") {
    const double m = 1.0;
    const ModelParams params(m);
    const TruncatedOperator op(params, MatrixPotential::zero(), 100);
    CHECK(op.bound_indices().empty());  // no bound states -> oracle is e^{-itD0}
    const LatticeWindow probe{-3, 3};
    const PropagatorSnapshot oracle = propagator_pc_oracle(5.0, op, probe, probe);
    for (int n = -3; n <= 3; ++n)
        for (int k = -3; k <= 3; ++k) {
            const BlockResult spec = free_propagator_block(5.0, n, k, m);
            CHECK((spec.block - oracle.kernel.block(n, k)).cwiseAbs().maxCoeff() < 1e-8);
        }
}

TEST_CASE("free propagator unitarity row sums") {
    const double m = 1.0;
    const double t = 10.0;
    const auto prof = free_propagator_profile(t, -150, 150, m);
    for (int a = 0; a < 2; ++a) {
        double sum = 0.0;
        for (const auto& b : prof) sum += b.block.row(a).squaredNorm();
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
}

TEST_CASE("free propagator group property") {
    const double m = 1.0;
    const auto p3 = free_propagator_profile(3.0, -90, 90, m);
    const auto p6 = free_propagator_profile(6.0, -10, 10, m);
    const auto at3 = [&](int p) { return p3[static_cast<size_t>(p + 90)].block; };
    for (int n = -2; n <= 2; ++n)
        for (int k = -2; k <= 2; ++k) {
            Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
            for (int j = -80; j <= 80; ++j) acc += at3(n - j) * at3(j - k);
            CHECK((acc - p6[static_cast<size_t>(n - k + 10)].block).cwiseAbs().maxCoeff() <
                  1e-6);
        }
}

TEST_CASE("free propagator Hermitian time symmetry") {
    const double m = 1.4;
    const auto fwd = free_propagator_profile(7.0, -5, 5, m);
    const auto bwd = free_propagator_profile(-7.0, -5, 5, m);
    for (int p = -5; p <= 5; ++p) {
        const Eigen::Matrix2cd a = fwd[static_cast<size_t>(p + 5)].block;
        const Eigen::Matrix2cd b = bwd[static_cast<size_t>(-p + 5)].block;
        CHECK((a - b.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("free propagator cone at group speed v0") {
    const double m = 1.0;
    const double t = 50.0;
    const BlockResult far = free_propagator_block(t, 60, 0, m);
    CHECK(far.block.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("omega weights") {
    const double m = 1.0, th = 0.9;
    const double g = dispersion_g(th, m);
    const Eigen::Matrix2d w0 = omega_weight(0, th, m);
    CHECK(w0(0, 0) == doctest::Approx(m + g));
    CHECK(w0(1, 1) == doctest::Approx(-m + g));
    CHECK(w0(0, 1) == doctest::Approx(1.0));
    CHECK(omega_weight(-1, th, m)(1, 0) == doctest::Approx(-1.0));
    CHECK(omega_weight(1, th, m)(0, 1) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(omega_weight(2, th, m), ValidationError);
}

TEST_CASE("quadrature failure carries the estimate") {
    QuadratureSpec strict;
    strict.min_panels = 2;
    strict.panels_per_unit_time = 0.01;
    strict.tolerance = 1e-14;
    try {
        free_propagator_block(40.0, 0, 0, 1.0, strict);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.estimate() > 1e-14);
    }
}

TEST_CASE("OmegaWeights bundle matches the per-shift accessor") {
    const OmegaWeights w = OmegaWeights::at(0.7, 1.3);
    CHECK((w.shift(-1) - omega_weight(-1, 0.7, 1.3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((w.shift(0) - omega_weight(0, 0.7, 1.3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((w.shift(1) - omega_weight(1, 0.7, 1.3)).cwiseAbs().maxCoeff() == 0.0);
}
