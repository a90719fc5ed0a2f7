#include "dirac/propagator.hpp"

#include <cmath>

#include "dirac/parallel.hpp"

namespace dirac {

namespace {

constexpr Complex kImag{0.0, 1.0};

// One band term at a fixed panel count. Jost data is computed once per theta
// node and reused across every requested (n,k); that amortization dominates
// the runtime of this module.
Eigen::MatrixXcd band_pass(double t, const MatrixPotential& Q, const ModelParams& params,
                           const LatticeWindow& n_range, const LatticeWindow& k_range,
                           HalfPlane branch, int panels, int threads) {
    const auto nodes = composite_gauss_nodes(-M_PI, M_PI, panels);
    const int n_nodes = static_cast<int>(nodes.size());
    const int rows = 2 * n_range.size(), cols = 2 * k_range.size();

    const int workers = std::max(1, std::min(resolve_threads(threads), n_nodes));
    std::vector<Eigen::MatrixXcd> partial(static_cast<size_t>(workers));

    parallel_chunks(n_nodes, workers, [&](int chunk, int begin, int end) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, cols);
        for (int i = begin; i < end; ++i) {
            const double theta = nodes[static_cast<size_t>(i)].x;
            const double weight = nodes[static_cast<size_t>(i)].w;
            const SpectralPoint pt = SpectralPoint::from_theta(theta, params.mass, branch);
            const KernelBlockMatrix R = resolvent_kernel(pt, Q, n_range, k_range);
            const double g = dispersion_g(theta, params.mass);
            Complex scal;
            if (branch == HalfPlane::Plain)
                scal = -weight / (2.0 * M_PI) * std::exp(-kImag * (t * g)) / g *
                       std::sin(theta);
            else
                scal = weight / (2.0 * M_PI) * std::exp(kImag * (t * g)) / g *
                       std::sin(theta);
            acc += scal * R.data.imag().cast<Complex>();
        }
        partial[static_cast<size_t>(chunk)] = std::move(acc);
    });

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
    for (const auto& p : partial)
        if (p.size() > 0) out += p;
    return out;
}

}  // namespace

PropagatorSnapshot propagator_pc_spectral(double t, const MatrixPotential& Q,
                                          const ModelParams& params,
                                          const LatticeWindow& n_range,
                                          const LatticeWindow& k_range,
                                          const QuadratureSpec& quad) {
    // oscillation frequency grows with both t and the index spread of the
    // requested blocks
    const double spread = std::max(
        {std::abs(double(n_range.n_min) - k_range.n_max),
         std::abs(double(n_range.n_max) - k_range.n_min), 0.0});
    const int panels = quad.panels_for(std::abs(t) + spread);
    const auto full = [&](int p) {
        Eigen::MatrixXcd sum =
            band_pass(t, Q, params, n_range, k_range, HalfPlane::Plain, p, quad.threads);
        sum += band_pass(t, Q, params, n_range, k_range, HalfPlane::Tilde, p, quad.threads);
        return sum;
    };

    PropagatorSnapshot snap;
    snap.t = t;
    snap.method = PropagatorSnapshot::Method::Spectral;
    snap.kernel = KernelBlockMatrix(KernelBlockMatrix::Kind::Propagator, t, n_range, k_range);

    Eigen::MatrixXcd coarse = full(panels);
    if (!quad.estimate_error) {
        snap.kernel.data = std::move(coarse);
        return snap;
    }
    Eigen::MatrixXcd fine = full(2 * panels);
    const double err = (fine - coarse).cwiseAbs().maxCoeff();
    snap.kernel.data = std::move(fine);
    snap.quad_error = err;
    if (err > quad.tolerance)
        throw NumericalError("propagator quadrature did not converge", err);
    return snap;
}

PropagatorSnapshot propagator_pc_oracle(double t, const TruncatedOperator& op,
                                        const LatticeWindow& n_range,
                                        const LatticeWindow& k_range) {
    op.decompose();
    const Eigen::VectorXd& ev = op.eigenvalues();
    const Eigen::MatrixXd& V = op.eigenvectors();

    // e^{-it lambda} on the continuum, 0 on bound states
    Eigen::VectorXd cosv(ev.size()), sinv(ev.size());
    for (int j = 0; j < ev.size(); ++j) {
        if (op.is_bound(j)) {
            cosv(j) = sinv(j) = 0.0;
        } else {
            cosv(j) = std::cos(t * ev(j));
            sinv(j) = -std::sin(t * ev(j));
        }
    }

    // only the requested rows of V enter the products; probing a small block
    // range of a large window stays cheap
    const auto extract = [&](const LatticeWindow& r) {
        Eigen::MatrixXd rows(2 * r.size(), op.dim());
        for (int n = r.n_min; n <= r.n_max; ++n) {
            rows.row(2 * r.index_of(n)) = V.row(op.row_of(n, 0));
            rows.row(2 * r.index_of(n) + 1) = V.row(op.row_of(n, 1));
        }
        return rows;
    };
    const Eigen::MatrixXd Vn = extract(n_range);
    const Eigen::MatrixXd Vk = extract(k_range);
    const Eigen::MatrixXd re = Vn * (cosv.asDiagonal() * Vk.transpose());
    const Eigen::MatrixXd im = Vn * (sinv.asDiagonal() * Vk.transpose());

    PropagatorSnapshot snap;
    snap.t = t;
    snap.method = PropagatorSnapshot::Method::Oracle;
    snap.kernel = KernelBlockMatrix(KernelBlockMatrix::Kind::Propagator, t, n_range, k_range);
    snap.kernel.data = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    return snap;
}

}  // namespace dirac
