#include "dirac/scattering.hpp"

#include <cmath>

namespace dirac {

namespace {
constexpr Complex kImag{0.0, 1.0};

LatticeWindow coefficient_window(const MatrixPotential& Q) {
    if (Q.empty()) return {-2, 2};
    return Q.support().grown(2);
}

int evaluation_site(const MatrixPotential& Q) {
    if (Q.empty()) return 0;
    const LatticeWindow s = Q.support();
    return s.n_min + (s.n_max - s.n_min) / 2;  // midpoint; constancy makes it moot
}

}  // namespace

Complex wronskian(const SpinorSequence& w1, const SpinorSequence& w2, int n) {
    if (!w1.window.contains(n) || !w1.window.contains(n + 1) || !w2.window.contains(n) ||
        !w2.window.contains(n + 1))
        throw ValidationError("wronskian needs both sequences at n and n+1");
    return w1.at(n)(0) * w2.at(n + 1)(1) - w2.at(n)(0) * w1.at(n + 1)(1);
}

Complex wronskian(const JostSolution& plus, const JostSolution& minus, int n) {
    // u+_n v-_{n+1} - u-_n v+_{n+1} with the phases of the two sides combined
    // before anything large can appear: z^n z^{-(n+1)} = 1/z and its mirror.
    const Complex z = plus.point.z;
    return plus.h_at(n)(0) * minus.h_at(n + 1)(1) / z -
           minus.h_at(n)(0) * plus.h_at(n + 1)(1) * z;
}

ScatteringCoefficients scattering_coefficients(const SpectralPoint& point,
                                               const MatrixPotential& Q) {
    const double m = point.mass;
    ScatteringCoefficients sc;
    sc.point = point;

    const LatticeWindow win = coefficient_window(Q);
    const int n0 = evaluation_site(Q);

    const JostSolution jp = jost_plus(point, Q, win);
    const JostSolution jm = jost_minus(point, Q, win);
    sc.W = wronskian(jp, jm, n0);

    if (std::abs(point.theta.imag()) > 1e-12) {
        // complex theta: only W itself is defined here
        sc.W_plus = sc.W_minus = sc.a = sc.b_plus = sc.b_minus = sc.T = sc.R_plus =
            sc.R_minus = Complex(std::nan(""), std::nan(""));
        return sc;
    }

    const double theta = point.theta.real();
    const Complex sin_theta = std::sin(point.theta);
    if (std::abs(sin_theta) < 1e-12)
        throw ValidationError("scattering coefficients need theta away from 0, +-pi");

    const SpectralPoint reflected =
        SpectralPoint::from_theta(-point.theta, m, point.half_plane);
    const JostSolution jp_r = jost_plus(reflected, Q, win);
    const JostSolution jm_r = jost_minus(reflected, Q, win);

    // W+ = W(w-(theta), w+(-theta)), W- = W(w+(theta), w-(-theta)); mixed
    // phases z^{-n} z^{+(n+1)}-style combine to z^{+-1} factors again
    const Complex z = point.z;
    const auto mixed_wronskian = [&](const JostSolution& first, const JostSolution& second,
                                     int n) {
        const Complex zf = (first.side == SpatialSide::Plus) ? z : 1.0 / z;
        const Complex zs = (second.side == SpatialSide::Plus) ? 1.0 / z : z;
        // first at theta, second at -theta: phases z_f^n * conj-side z_s^{n+1};
        // for real theta the -theta family carries the inverse phase of its side
        const Complex phase_first_u = std::pow(zf, n);
        const Complex phase_second_v = std::pow(zs, n + 1);
        const Complex phase_second_u = std::pow(zs, n);
        const Complex phase_first_v = std::pow(zf, n + 1);
        return first.h_at(n)(0) * phase_first_u * second.h_at(n + 1)(1) * phase_second_v -
               second.h_at(n)(0) * phase_second_u * first.h_at(n + 1)(1) * phase_first_v;
    };
    sc.W_plus = mixed_wronskian(jm, jp_r, n0);
    sc.W_minus = mixed_wronskian(jp, jm_r, n0);

    const double scale =
        std::max({jp.h_at(n0).norm() * jm.h_at(n0 + 1).norm(),
                  jm.h_at(n0).norm() * jp.h_at(n0 + 1).norm(), 1e-300});
    if (std::abs(theta) > 1e-9 && std::abs(std::abs(theta) - M_PI) > 1e-9 &&
        std::abs(sc.W) < 1e-13 * scale)
        throw NumericalError(
            "Wronskian vanishes inside the open band; invalid potential or bug");

    const Complex factor = (m + point.lambda) / (2.0 * kImag * sin_theta);
    sc.a = sc.W * factor;
    sc.b_plus = sc.W_plus * factor;
    sc.b_minus = -sc.W_minus * factor;
    sc.T = 1.0 / sc.a;
    sc.R_plus = sc.W_plus / sc.W;
    sc.R_minus = -sc.W_minus / sc.W;
    return sc;
}

double wronskian_constancy_check(const SpinorSequence& w1, const SpinorSequence& w2,
                                 const LatticeWindow& window) {
    const int n0 = window.n_min;
    const Complex ref = wronskian(w1, w2, n0);
    const double denom = std::max(std::abs(ref), 1e-12);
    double worst = 0.0;
    for (int n = window.n_min; n < window.n_max; ++n)
        worst = std::max(worst, std::abs(wronskian(w1, w2, n) - ref));
    return std::abs(ref) > 1e-8 ? worst / denom : worst;
}

double scattering_relation_residual(double theta, const MatrixPotential& Q,
                                    const ModelParams& params) {
    const SpectralPoint pt = SpectralPoint::from_theta(theta, params.mass, HalfPlane::Plain);
    const ScatteringCoefficients sc = scattering_coefficients(pt, Q);
    const SpectralPoint rpt = SpectralPoint::from_theta(-theta, params.mass, HalfPlane::Plain);

    const LatticeWindow win = coefficient_window(Q);
    const JostSolution jp = jost_plus(pt, Q, win);
    const JostSolution jm = jost_minus(pt, Q, win);
    const JostSolution jp_r = jost_plus(rpt, Q, win);
    const JostSolution jm_r = jost_minus(rpt, Q, win);

    double worst = 0.0;
    for (int n = win.n_min; n <= win.n_max; ++n) {
        const Eigen::Vector2cd lhs_p = sc.T * jp.w_at(n);
        const Eigen::Vector2cd rhs_p = sc.R_minus * jm.w_at(n) + jm_r.w_at(n);
        const Eigen::Vector2cd lhs_m = sc.T * jm.w_at(n);
        const Eigen::Vector2cd rhs_m = sc.R_plus * jp.w_at(n) + jp_r.w_at(n);
        worst = std::max({worst, (lhs_p - rhs_p).cwiseAbs().maxCoeff(),
                          (lhs_m - rhs_m).cwiseAbs().maxCoeff()});
    }
    return worst;
}

ResonanceReport detect_resonances(const MatrixPotential& Q, double m,
                                  double threshold_rel) {
    const ModelParams params(m);
    ResonanceReport report;
    report.threshold_rel = threshold_rel;

    const LatticeWindow win = coefficient_window(Q);
    const int n0 = evaluation_site(Q);

    const std::array<std::pair<double, HalfPlane>, 4> edges = {{
        {0.0, HalfPlane::Plain},    // lambda = +m
        {M_PI, HalfPlane::Plain},   // lambda = +sqrt(m^2+4)
        {0.0, HalfPlane::Tilde},    // lambda = -m
        {M_PI, HalfPlane::Tilde},   // lambda = -sqrt(m^2+4)
    }};

    for (size_t i = 0; i < edges.size(); ++i) {
        const SpectralPoint pt =
            SpectralPoint::from_theta(edges[i].first, m, edges[i].second);
        const JostSolution jp = jost_solution(SpatialSide::Plus, pt, Q, win);
        const JostSolution jm = jost_solution(SpatialSide::Minus, pt, Q, win);
        const Complex w = wronskian(jp, jm, n0);
        double scale = 0.0;
        for (int n = win.n_min; n < win.n_max; ++n)
            scale = std::max(scale, std::max(jp.h_at(n).norm() * jm.h_at(n + 1).norm(),
                                             jm.h_at(n).norm() * jp.h_at(n + 1).norm()));
        scale = std::max(scale, 1e-300);
        report.edges[i] = {pt.lambda.real(), w, scale, std::abs(w) < threshold_rel * scale};
    }
    return report;
}

}  // namespace dirac
