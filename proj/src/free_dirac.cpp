#include "dirac/free_dirac.hpp"

#include <cmath>

#include "dirac/parallel.hpp"

namespace dirac {

namespace {
constexpr Complex kImag{0.0, 1.0};
}

Eigen::Matrix2d omega_weight(int j, double theta, double m) {
    Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
    switch (j) {
        case -1: w(1, 0) = -1.0; break;
        case 1: w(0, 1) = -1.0; break;
        case 0: {
            const double g = dispersion_g(theta, m);
            w << m + g, 1.0, 1.0, -m + g;
            break;
        }
        default: throw ValidationError("omega_weight: j must be in {-1, 0, 1}");
    }
    return w;
}

namespace {

Complex laplacian_entry(Complex theta, int n, int k) {
    const Complex s = std::sin(theta);
    if (std::abs(s) < 1e-14)
        throw NumericalError("free resolvent at a band edge (sin theta = 0)");
    return std::exp(-kImag * theta * static_cast<double>(std::abs(n - k))) / (2.0 * kImag * s);
}

}  // namespace

Complex free_laplacian_resolvent_entry(Complex omega, int n, int k) {
    return laplacian_entry(theta_from_omega(omega), n, k);
}

Complex free_laplacian_resolvent_entry(double omega, Side side, int n, int k) {
    return laplacian_entry(theta_from_omega(omega, side), n, k);
}

Eigen::Matrix2cd free_dirac_resolvent_block(const SpectralPoint& point, int n, int k) {
    const Complex s = std::sin(point.theta);
    if (std::abs(s) < 1e-14)
        throw NumericalError("free resolvent at a band edge (sin theta = 0)");
    const auto r = [&](int q) {
        return std::exp(-kImag * point.theta * static_cast<double>(std::abs(q))) /
               (2.0 * kImag * s);
    };
    const int p = n - k;
    const double m = point.mass;
    Eigen::Matrix2cd block;
    block(0, 0) = (m + point.lambda) * r(p);
    block(0, 1) = r(p) - r(p + 1);       // d acting on the row index
    block(1, 0) = r(p) - r(p - 1);       // d* acting on the row index
    block(1, 1) = (point.lambda - m) * r(p);
    return block;
}

namespace {

// One pass of the two-band integral at a fixed panel count. The positive band
// contributes (1/4pi) int e^{-itg}/g B+(theta,p) dtheta with
//   B+ = [[(m+g) c0, c0-c+],[c0-c-, (g-m) c0]],  c_j = cos(theta (p+j)),
// the negative band the conjugate of the same integral with the mass-flipped
// weights B- = [[(g-m) c0, c+-c0],[c--c0, (g+m) c0]].
std::vector<Eigen::Matrix2cd> profile_pass(double t, int p_min, int p_max, double m,
                                           int panels, int threads) {
    const auto nodes = composite_gauss_nodes(-M_PI, M_PI, panels);
    const int n_p = p_max - p_min + 1;
    const int n_nodes = static_cast<int>(nodes.size());

    const int workers = std::max(1, std::min(resolve_threads(threads), n_nodes));
    // per chunk: I+ and I- accumulators for every p
    std::vector<std::vector<Eigen::Matrix2cd>> plus(static_cast<size_t>(workers)),
        minus(static_cast<size_t>(workers));

    parallel_chunks(n_nodes, workers, [&](int chunk, int begin, int end) {
        auto& accp = plus[static_cast<size_t>(chunk)];
        auto& accm = minus[static_cast<size_t>(chunk)];
        accp.assign(static_cast<size_t>(n_p), Eigen::Matrix2cd::Zero());
        accm.assign(static_cast<size_t>(n_p), Eigen::Matrix2cd::Zero());
        for (int i = begin; i < end; ++i) {
            const double theta = nodes[static_cast<size_t>(i)].x;
            const double g = dispersion_g(theta, m);
            const Complex scal = nodes[static_cast<size_t>(i)].w *
                                 std::exp(-kImag * (t * g)) / g;
            // cos(theta q) by rotation, q = p-1 .. p+1 walking over the range
            const Complex rot = std::exp(-kImag * theta);
            Complex w = std::exp(-kImag * (theta * (p_min - 1)));
            double c_prev = w.real();
            w *= rot;
            double c_cur = w.real();
            for (int ip = 0; ip < n_p; ++ip) {
                w *= rot;
                const double c_next = w.real();
                const double d_fwd = c_cur - c_next;   // c0 - c(p+1)
                const double d_bwd = c_cur - c_prev;   // c0 - c(p-1)
                Eigen::Matrix2cd& bp = accp[static_cast<size_t>(ip)];
                bp(0, 0) += scal * ((m + g) * c_cur);
                bp(0, 1) += scal * d_fwd;
                bp(1, 0) += scal * d_bwd;
                bp(1, 1) += scal * ((g - m) * c_cur);
                Eigen::Matrix2cd& bm = accm[static_cast<size_t>(ip)];
                bm(0, 0) += scal * ((g - m) * c_cur);
                bm(0, 1) += scal * (-d_fwd);
                bm(1, 0) += scal * (-d_bwd);
                bm(1, 1) += scal * ((g + m) * c_cur);
                c_prev = c_cur;
                c_cur = c_next;
            }
        }
    });

    std::vector<Eigen::Matrix2cd> out(static_cast<size_t>(n_p), Eigen::Matrix2cd::Zero());
    for (int c = 0; c < workers; ++c) {
        if (plus[static_cast<size_t>(c)].empty()) continue;
        for (int ip = 0; ip < n_p; ++ip)
            out[static_cast<size_t>(ip)] +=
                plus[static_cast<size_t>(c)][static_cast<size_t>(ip)] +
                minus[static_cast<size_t>(c)][static_cast<size_t>(ip)].conjugate();
    }
    const double norm = 1.0 / (4.0 * M_PI);
    for (auto& b : out) b *= norm;
    return out;
}

}  // namespace

std::vector<BlockResult> free_propagator_profile(double t, int p_min, int p_max, double m,
                                                 const QuadratureSpec& quad) {
    if (p_min > p_max) throw ValidationError("free_propagator_profile: empty p range");
    // the phase t g(theta) + theta p oscillates with frequency <= v0 t + |p|
    const double spread = std::max(std::abs(p_min), std::abs(p_max));
    const int panels = quad.panels_for(std::abs(t) + spread);
    auto coarse = profile_pass(t, p_min, p_max, m, panels, quad.threads);
    std::vector<BlockResult> out(coarse.size());
    if (!quad.estimate_error) {
        for (size_t i = 0; i < coarse.size(); ++i) out[i] = {coarse[i], 0.0};
        return out;
    }
    auto fine = profile_pass(t, p_min, p_max, m, 2 * panels, quad.threads);
    double worst = 0.0;
    for (size_t i = 0; i < coarse.size(); ++i) {
        const double err = (fine[i] - coarse[i]).cwiseAbs().maxCoeff();
        out[i] = {fine[i], err};
        worst = std::max(worst, err);
    }
    if (worst > quad.tolerance)
        throw NumericalError("free propagator quadrature did not converge", worst);
    return out;
}

BlockResult free_propagator_block(double t, int n, int k, double m,
                                  const QuadratureSpec& quad) {
    return free_propagator_profile(t, n - k, n - k, m, quad).front();
}

}  // namespace dirac
