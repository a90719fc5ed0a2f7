#pragma once

#include <array>

#include "dirac/jost.hpp"

namespace dirac {

// Shifted Wronski determinant u1_n v2_{n+1} - u2_n v1_{n+1}; constant in n for
// solutions of D w = lambda w when q12 == q21.
Complex wronskian(const SpinorSequence& w1, const SpinorSequence& w2, int n);

// Same determinant straight from phase-stripped Jost data (overflow-safe).
Complex wronskian(const JostSolution& plus, const JostSolution& minus, int n);

struct ScatteringCoefficients {
    SpectralPoint point;
    Complex W;        // W(w+(theta), w-(theta))
    Complex W_plus;   // W(w-(theta), w+(-theta))
    Complex W_minus;  // W(w+(theta), w-(-theta))
    Complex a;
    Complex b_plus;
    Complex b_minus;
    Complex T;
    Complex R_plus;
    Complex R_minus;
};

// Needs real theta in the open band (away from 0, +-pi) for the full set;
// a vanishing W there indicates a bug or invalid potential and throws.
ScatteringCoefficients scattering_coefficients(const SpectralPoint& point,
                                               const MatrixPotential& Q);

// max_n |W(n) - W(n0)|, relative when |W(n0)| is not tiny
double wronskian_constancy_check(const SpinorSequence& w1, const SpinorSequence& w2,
                                 const LatticeWindow& window);

// max residual of T w^{+-} = R^{-+} w^{-+}(theta) + w^{-+}(-theta) over the
// support window, both relations and both spinor components
double scattering_relation_residual(double theta, const MatrixPotential& Q,
                                    const ModelParams& params);

struct EdgeResonance {
    double lambda;
    Complex wronskian;
    double scale;
    bool resonant;
};

struct ResonanceReport {
    std::array<EdgeResonance, 4> edges;  // +m, +sqrt(m^2+4), -m, -sqrt(m^2+4)
    double threshold_rel;
    bool any_resonant() const {
        for (const auto& e : edges)
            if (e.resonant) return true;
        return false;
    }
};

// Evaluates the four edge Wronskians (plain branch at z = +-1, tilde branch
// for the negative edges) and flags |W| < threshold_rel * scale.
ResonanceReport detect_resonances(const MatrixPotential& Q, double m,
                                  double threshold_rel = 1e-8);

}  // namespace dirac
