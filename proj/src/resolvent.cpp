#include "dirac/resolvent.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace dirac {

Eigen::Matrix2cd tensor_block(const SpinorSequence& w1, int k, const SpinorSequence& w2,
                              int n) {
    if (!w1.window.contains(k) || !w1.window.contains(k + 1) || !w2.window.contains(n))
        throw ValidationError("tensor_block: indices outside the sequence windows");
    const Complex u1 = w1.at(k)(0), v1 = w1.at(k + 1)(1);
    const Complex u2 = w2.at(n)(0), v2 = w2.at(n)(1);
    Eigen::Matrix2cd b;
    b << u1 * u2, v1 * u2,
         u1 * v2, v1 * v2;
    return b;
}

namespace {

struct JostPair {
    JostSolution plus;
    JostSolution minus;
    Complex W;
};

JostPair jost_pair(const SpectralPoint& point, const MatrixPotential& Q,
                   const LatticeWindow& cover) {
    JostPair pair{jost_solution(SpatialSide::Plus, point, Q, cover),
                  jost_solution(SpatialSide::Minus, point, Q, cover), 0.0};
    int n0 = cover.n_min + cover.size() / 2;
    if (!Q.empty()) {
        const LatticeWindow s = Q.support();
        n0 = s.n_min + (s.n_max - s.n_min) / 2;
    }
    if (n0 + 1 > cover.n_max) n0 = cover.n_max - 1;
    if (n0 < cover.n_min) n0 = cover.n_min;
    pair.W = wronskian(pair.plus, pair.minus, n0);
    double scale = std::max(pair.plus.h_at(n0).norm() * pair.minus.h_at(n0 + 1).norm(),
                            pair.minus.h_at(n0).norm() * pair.plus.h_at(n0 + 1).norm());
    scale = std::max(scale, 1e-300);
    if (std::abs(pair.W) < 1e-10 * scale)
        throw NumericalError("resolvent pole: Wronskian vanishes (bound state or resonance)");
    return pair;
}

// Ordinary kernel of (D - lambda)^{-1} assembled from phase-stripped data.
// Column 1 switches branch at k = n, column 2 at k = n + 1; the free case
// pins both seams, and the defect identity (D - lambda) R = I is enforced in
// the tests for perturbed potentials.
Eigen::Matrix2cd assemble_block(const JostPair& jp, const SpectralPoint& pt, int n, int k) {
    const Complex z = pt.z;
    const auto zpow = [&](int e) { return std::pow(z, e); };  // e >= 0 throughout
    Eigen::Matrix2cd b;
    const Eigen::Vector2cd& hp_n = jp.plus.h_at(n);
    const Eigen::Vector2cd& hm_n = jp.minus.h_at(n);
    // column 1: pairs u at k
    if (k <= n - 1) {
        const Complex f = zpow(n - k) * jp.minus.h_at(k)(0) / jp.W;
        b(0, 0) = hp_n(0) * f;
        b(1, 0) = hp_n(1) * f;
    } else {
        const Complex f = zpow(k - n) * jp.plus.h_at(k)(0) / jp.W;
        b(0, 0) = hm_n(0) * f;
        b(1, 0) = hm_n(1) * f;
    }
    // column 2: pairs v at k
    if (k <= n) {
        const Complex f = zpow(n - k) * jp.minus.h_at(k)(1) / jp.W;
        b(0, 1) = hp_n(0) * f;
        b(1, 1) = hp_n(1) * f;
    } else {
        const Complex f = zpow(k - n) * jp.plus.h_at(k)(1) / jp.W;
        b(0, 1) = hm_n(0) * f;
        b(1, 1) = hm_n(1) * f;
    }
    return b;
}

LatticeWindow cover_window(const MatrixPotential& Q, const LatticeWindow& n_range,
                           const LatticeWindow& k_range) {
    int lo = std::min(n_range.n_min, k_range.n_min) - 1;
    int hi = std::max(n_range.n_max, k_range.n_max) + 1;
    if (!Q.empty()) {
        lo = std::min(lo, Q.support().n_min - 1);
        hi = std::max(hi, Q.support().n_max + 1);
    }
    return {lo, hi};
}

}  // namespace

KernelBlockMatrix resolvent_kernel(const SpectralPoint& point, const MatrixPotential& Q,
                                   const LatticeWindow& n_range,
                                   const LatticeWindow& k_range) {
    const JostPair jp = jost_pair(point, Q, cover_window(Q, n_range, k_range));
    KernelBlockMatrix out(KernelBlockMatrix::Kind::Resolvent, point.lambda, n_range, k_range);
    for (int n = n_range.n_min; n <= n_range.n_max; ++n)
        for (int k = k_range.n_min; k <= k_range.n_max; ++k)
            out.set_block(n, k, assemble_block(jp, point, n, k));
    return out;
}

Eigen::Matrix2cd resolvent_block(const SpectralPoint& point, const MatrixPotential& Q,
                                 int n, int k) {
    const LatticeWindow nr{n, n}, kr{k, k};
    const JostPair jp = jost_pair(point, Q, cover_window(Q, nr, kr));
    return assemble_block(jp, point, n, k);
}

TruncatedOperator::TruncatedOperator(const ModelParams& params, const MatrixPotential& Q,
                                     int N)
    : params_(params), N_(N) {
    if (N < 2) throw ValidationError("truncation window too small");
    if (dim() > 12000)
        throw ValidationError(
            "truncation window " + std::to_string(N) + " gives a dense matrix of dimension " +
            std::to_string(dim()) + " > 12000; lower the window or use the spectral method");
    if (!Q.empty()) {
        const LatticeWindow s = Q.support();
        if (s.n_min < -N / 2 || s.n_max > N / 2)
            throw ValidationError("potential support must sit inside [-N/2, N/2]");
    }
    const double m = params.mass;
    matrix_ = Eigen::MatrixXd::Zero(dim(), dim());
    for (int n = -N; n <= N; ++n) {
        const int u = row_of(n, 0), v = row_of(n, 1);
        const Eigen::Matrix2d q = Q.at(n);
        matrix_(u, u) = m + q(0, 0);
        matrix_(u, v) = 1.0 + q(0, 1);
        matrix_(v, u) = 1.0 + q(1, 0);
        matrix_(v, v) = -m + q(1, 1);
        if (n + 1 <= N) matrix_(u, row_of(n + 1, 1)) = -1.0;
        if (n - 1 >= -N) matrix_(v, row_of(n - 1, 0)) = -1.0;
    }
}

int TruncatedOperator::row_of(int site, int component) const {
    if (site < -N_ || site > N_) throw ValidationError("site outside truncation window");
    return 2 * (site + N_) + component;
}

void TruncatedOperator::decompose() const {
    if (decomposed_) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_);
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense symmetric eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    bound_.clear();
    for (int j = 0; j < eigenvalues_.size(); ++j)
        if (params_.distance_to_bands(eigenvalues_(j)) > edge_margin())
            bound_.push_back(j);
    decomposed_ = true;
}

const Eigen::VectorXd& TruncatedOperator::eigenvalues() const {
    decompose();
    return eigenvalues_;
}

const Eigen::MatrixXd& TruncatedOperator::eigenvectors() const {
    decompose();
    return eigenvectors_;
}

const std::vector<int>& TruncatedOperator::bound_indices() const {
    decompose();
    return bound_;
}

bool TruncatedOperator::is_bound(int j) const {
    decompose();
    return std::find(bound_.begin(), bound_.end(), j) != bound_.end();
}

KernelBlockMatrix TruncatedOperator::pc_projector(const LatticeWindow& n_range,
                                                  const LatticeWindow& k_range) const {
    decompose();
    KernelBlockMatrix out(KernelBlockMatrix::Kind::Projector, 0.0, n_range, k_range);
    for (int n = n_range.n_min; n <= n_range.n_max; ++n)
        for (int k = k_range.n_min; k <= k_range.n_max; ++k) {
            Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
            if (n == k) b.setIdentity();
            for (int j : bound_) {
                const Eigen::VectorXd& psi = eigenvectors_.col(j);
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c)
                        b(a, c) -= psi(row_of(n, a)) * psi(row_of(k, c));
            }
            out.set_block(n, k, b);
        }
    return out;
}

KernelBlockMatrix TruncatedOperator::resolvent(Complex lambda, const LatticeWindow& n_range,
                                               const LatticeWindow& k_range) const {
    Eigen::MatrixXcd shifted = matrix_.cast<Complex>();
    shifted.diagonal().array() -= lambda;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    KernelBlockMatrix out(KernelBlockMatrix::Kind::Resolvent, lambda, n_range, k_range);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim());
    for (int k = k_range.n_min; k <= k_range.n_max; ++k)
        for (int c = 0; c < 2; ++c) {
            e.setZero();
            e(row_of(k, c)) = 1.0;
            const Eigen::VectorXcd col = lu.solve(e);
            for (int n = n_range.n_min; n <= n_range.n_max; ++n) {
                Eigen::Matrix2cd b = out.block(n, k);
                b(0, c) = col(row_of(n, 0));
                b(1, c) = col(row_of(n, 1));
                out.set_block(n, k, b);
            }
        }
    return out;
}

LapProbeTable lap_probe(double lambda, Side side, const std::vector<double>& eps_list,
                        double sigma, const MatrixPotential& Q, double m,
                        int interior_half_width) {
    const ModelParams params(m);
    if (params.distance_to_bands(lambda) > 0.0 ||
        std::min(std::abs(std::abs(lambda) - params.band_min()),
                 std::abs(std::abs(lambda) - params.band_max())) < 0.05)
        throw ValidationError("lap_probe needs lambda inside a band, away from the edges");
    if (sigma <= 0.5) throw ValidationError("lap_probe needs sigma > 1/2");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ValidationError("eps_list must strictly decrease");

    const LatticeWindow range{-interior_half_width, interior_half_width};
    const KernelBlockMatrix boundary =
        resolvent_kernel(SpectralPoint::boundary(lambda, side, m), Q, range, range);

    const auto weighted_distance = [&](const KernelBlockMatrix& a,
                                       const KernelBlockMatrix& b) {
        double sum = 0.0;
        for (int n = range.n_min; n <= range.n_max; ++n)
            for (int k = range.n_min; k <= range.n_max; ++k) {
                const double w = std::pow(1.0 + std::abs(n), -sigma) *
                                 std::pow(1.0 + std::abs(k), -sigma);
                sum += w * w * (a.block(n, k) - b.block(n, k)).squaredNorm();
            }
        return std::sqrt(sum);
    };

    const KernelBlockMatrix zero(KernelBlockMatrix::Kind::Resolvent, boundary.parameter,
                                 range, range);
    const double scale = weighted_distance(boundary, zero);

    LapProbeTable table;
    table.monotone = true;
    const double sgn = (side == Side::PlusI0) ? 1.0 : -1.0;
    for (double eps : eps_list) {
        const SpectralPoint pt = SpectralPoint::from_lambda(Complex(lambda, sgn * eps), m);
        const KernelBlockMatrix off_axis = resolvent_kernel(pt, Q, range, range);
        table.rows.push_back({eps, weighted_distance(off_axis, boundary) / scale});
    }
    for (size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].distance > table.rows[i - 1].distance + 1e-12)
            table.monotone = false;
    return table;
}

}  // namespace dirac
