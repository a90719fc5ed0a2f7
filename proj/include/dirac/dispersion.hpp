#pragma once

#include <complex>
#include <vector>

#include "dirac/lattice.hpp"

namespace dirac {

// g(theta) = sqrt(2 - 2 cos theta + m^2), the dispersion relation of the
// positive band. Principal square root for complex theta; real-valued in
// [m, sqrt(m^2+4)] on the real line.
Complex dispersion_g(Complex theta, double m);
double dispersion_g(double theta, double m);

// Which side of the band the boundary value is taken from.
enum class Side { PlusI0, MinusI0 };

// Inverse of omega = 2 - 2 cos theta on Sigma = {-pi <= Re theta <= pi,
// Im theta < 0}. Real omega strictly inside (0, 4) is ambiguous without a
// side tag and throws; omega in {0, 4} maps to the edge values {0, -pi}.
Complex theta_from_omega(Complex omega);
// Boundary values: omega + i0 -> theta in [-pi, 0], omega - i0 -> [0, pi].
Complex theta_from_omega(double omega, Side side);

// Re lambda >= 0 carries the plain Jost family, Re lambda <= 0 the tilde one.
enum class HalfPlane { Plain, Tilde };

// Consistent bundle of the spectral coordinates: 2 - 2 cos theta = omega,
// lambda^2 - m^2 = omega, z = e^{-i theta}, lambda = +-g(theta).
struct SpectralPoint {
    Complex theta;
    Complex omega;
    Complex lambda;
    Complex z;
    HalfPlane half_plane = HalfPlane::Plain;
    double mass = 1.0;

    static SpectralPoint from_theta(Complex theta, double m,
                                    HalfPlane hp = HalfPlane::Plain);
    // lambda off the closed bands; Re lambda = 0 resolves to the plain branch.
    static SpectralPoint from_lambda(Complex lambda, double m);
    // lambda inside an open band, approached from the lambda +- i eps side.
    static SpectralPoint boundary(double lambda, Side side, double m);

    // max violation of the defining identities, used by tests
    double consistency_error() const;
};

// Phi_v(theta) = g(theta) + v theta with analytic derivatives up to order 3.
struct PhaseJet {
    double value;
    double d1;
    double d2;
    double d3;
};
PhaseJet phase(double theta, double v, double m);

// kappa = (2 + m^2 - sqrt(4 m^2 + m^4))/2, v0 = sqrt(kappa) the critical group
// speed, theta0 = -arccos(kappa) the degenerate stationary point of Phi_{v0},
// nu the splitting radius min(1/2, sqrt(2 v0 / (3 G theta0^2))), G = sup|g'''|.
struct StationaryData {
    double kappa;
    double v0;
    double theta0;
    double nu;
    double g3_bound;

    static StationaryData compute(double m);
};

struct StationaryPoint {
    double theta;
    int order;  // 1 non-degenerate, 2 degenerate
};

struct StationaryAnalysis {
    std::vector<StationaryPoint> points;  // roots of Phi_v' on [-pi, pi]
    StationaryData data;
};

StationaryAnalysis stationary_points(double v, double m);

}  // namespace dirac
