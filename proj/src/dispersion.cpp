#include "dirac/dispersion.hpp"

#include <cmath>

namespace dirac {

namespace {
constexpr Complex kImag{0.0, 1.0};
}

Complex dispersion_g(Complex theta, double m) {
    return std::sqrt(2.0 - 2.0 * std::cos(theta) + m * m);
}

double dispersion_g(double theta, double m) {
    return std::sqrt(2.0 - 2.0 * std::cos(theta) + m * m);
}

// z = e^{-i theta} solves z^2 - (2 - omega) z + 1 = 0; the branch Im theta < 0
// is the root inside the unit disk. Both arccos and arccosh reduce to this one
// complex-log code path.
Complex theta_from_omega(Complex omega) {
    if (omega.imag() == 0.0 && omega.real() > 0.0 && omega.real() < 4.0)
        throw ValidationError(
            "theta_from_omega: real omega in (0,4) needs a boundary side tag");
    const Complex s = 2.0 - omega;
    Complex sq = std::sqrt(s * s - 4.0);
    if (std::real(std::conj(s) * sq) < 0.0) sq = -sq;  // keep the larger root stable
    const Complex z_big = 0.5 * (s + sq);
    const Complex z = 1.0 / z_big;
    return kImag * std::log(z);  // = -arg z + i ln|z|, so Im theta <= 0
}

Complex theta_from_omega(double omega, Side side) {
    if (omega < 0.0 || omega > 4.0) return theta_from_omega(Complex(omega, 0.0));
    const double s = 2.0 - omega;
    const double q = std::sqrt(std::max(0.0, 4.0 - s * s));
    // omega + i0 comes in through arg z in [0, pi], omega - i0 through [-pi, 0]
    const Complex z = (side == Side::PlusI0) ? Complex(0.5 * s, 0.5 * q)
                                             : Complex(0.5 * s, -0.5 * q);
    return Complex(-std::atan2(z.imag(), z.real()), 0.0);
}

SpectralPoint SpectralPoint::from_theta(Complex theta, double m, HalfPlane hp) {
    if (theta.imag() > 1e-12)
        throw ValidationError("spectral theta must satisfy Im theta <= 0");
    SpectralPoint p;
    p.theta = theta;
    p.omega = 2.0 - 2.0 * std::cos(theta);
    const Complex g = dispersion_g(theta, m);
    p.lambda = (hp == HalfPlane::Plain) ? g : -g;
    p.z = std::exp(-kImag * theta);
    p.half_plane = hp;
    p.mass = m;
    return p;
}

SpectralPoint SpectralPoint::from_lambda(Complex lambda, double m) {
    SpectralPoint p;
    p.lambda = lambda;
    p.omega = lambda * lambda - m * m;
    p.theta = theta_from_omega(p.omega);
    p.z = std::exp(-kImag * p.theta);
    p.half_plane = (lambda.real() >= 0.0) ? HalfPlane::Plain : HalfPlane::Tilde;
    p.mass = m;
    return p;
}

SpectralPoint SpectralPoint::boundary(double lambda, Side side, double m) {
    const ModelParams params(m);
    if (params.distance_to_bands(lambda) <= 0.0 &&
        (std::abs(std::abs(lambda) - params.band_min()) < 1e-14 ||
         std::abs(std::abs(lambda) - params.band_max()) < 1e-14))
        throw ValidationError("boundary point requested at a band edge");
    if (params.distance_to_bands(lambda) > 0.0)
        throw ValidationError("boundary point requested off the open bands");
    const double omega = lambda * lambda - m * m;
    // lambda < 0 flips the approach side in the omega plane
    Side omega_side = side;
    if (lambda < 0.0) omega_side = (side == Side::PlusI0) ? Side::MinusI0 : Side::PlusI0;
    SpectralPoint p;
    p.lambda = lambda;
    p.omega = omega;
    p.theta = theta_from_omega(omega, omega_side);
    p.z = std::exp(-kImag * p.theta);
    p.half_plane = (lambda >= 0.0) ? HalfPlane::Plain : HalfPlane::Tilde;
    p.mass = m;
    return p;
}

double SpectralPoint::consistency_error() const {
    const double scale = std::max(1.0, std::abs(omega));
    double err = std::abs(2.0 - 2.0 * std::cos(theta) - omega) / scale;
    err = std::max(err, std::abs(lambda * lambda - mass * mass - omega) / scale);
    err = std::max(err, std::abs(std::exp(-kImag * theta) - z));
    if (theta.imag() > 1e-12) err = std::max(err, theta.imag());
    const double re = lambda.real();
    if (half_plane == HalfPlane::Plain ? re < -1e-12 : re > 1e-12) err = std::max(err, 1.0);
    return err;
}

PhaseJet phase(double theta, double v, double m) {
    const double g = dispersion_g(theta, m);
    const double s = std::sin(theta), c = std::cos(theta);
    const double g3 = g * g * g, g5 = g3 * g * g;
    PhaseJet jet;
    jet.value = g + v * theta;
    jet.d1 = s / g + v;
    jet.d2 = c / g - s * s / g3;
    jet.d3 = -s / g - 3.0 * s * c / g3 + 3.0 * s * s * s / g5;
    return jet;
}

StationaryData StationaryData::compute(double m) {
    StationaryData d;
    d.kappa = 0.5 * (2.0 + m * m - std::sqrt(4.0 * m * m + m * m * m * m));
    d.v0 = std::sqrt(d.kappa);
    d.theta0 = -std::acos(d.kappa);
    // sup |g'''| by dense scan; only feeds the diagnostic splitting radius
    double G = 0.0;
    const int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        const double th = -M_PI + 2.0 * M_PI * i / grid;
        G = std::max(G, std::abs(phase(th, 0.0, m).d3));
    }
    d.g3_bound = G;
    d.nu = std::min(0.5, std::sqrt(2.0 * d.v0 / (3.0 * G * d.theta0 * d.theta0)));
    return d;
}

StationaryAnalysis stationary_points(double v, double m) {
    if (v < 0.0) throw ValidationError("stationary_points: v must be >= 0");
    StationaryAnalysis out;
    out.data = StationaryData::compute(m);

    const auto dphi = [&](double th) { return phase(th, v, m).d1; };

    std::vector<double> roots;
    // endpoints first: Phi' = sin(theta)/g + v vanishes at +-pi only when v = 0
    if (std::abs(dphi(-M_PI)) < 1e-14) roots.push_back(-M_PI);

    const int grid = 4000;
    double prev_th = -M_PI, prev_val = dphi(prev_th);
    for (int i = 1; i <= grid; ++i) {
        const double th = -M_PI + 2.0 * M_PI * i / grid;
        const double val = dphi(th);
        if (prev_val == 0.0 && prev_th != -M_PI) {
            roots.push_back(prev_th);
        } else if (prev_val * val < 0.0) {
            double lo = prev_th, hi = th, flo = prev_val;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = dphi(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (flo * fm < 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_th = th;
        prev_val = val;
    }
    if (std::abs(dphi(M_PI)) < 1e-14) roots.push_back(M_PI);

    // v = v0: the pair merges into a tangential double root the sign scan
    // cannot see
    if (std::abs(v - out.data.v0) < 1e-9) {
        roots.clear();
        roots.push_back(out.data.theta0);
    }

    for (double th : roots) {
        const double d2 = phase(th, v, m).d2;
        out.points.push_back({th, std::abs(d2) < 1e-6 ? 2 : 1});
    }
    return out;
}

}  // namespace dirac
