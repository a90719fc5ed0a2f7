#pragma once

#include <optional>

#include "dirac/quadrature.hpp"
#include "dirac/resolvent.hpp"

namespace dirac {

struct PropagatorSnapshot {
    enum class Method { Spectral, Oracle };
    double t = 0.0;
    Method method = Method::Spectral;
    KernelBlockMatrix kernel;
    std::optional<double> quad_error;
};

// e^{-itD} P_c as the jump integral of the Jost resolvent over both bands:
//   P_c^+ block = -(1/2pi) int e^{-itg}/g sin(theta) Im R_theta(n,k) dtheta,
//   P_c^- block = +(1/2pi) int e^{+itg}/g sin(theta) Im R~_theta(n,k) dtheta,
// where R_theta (R~_theta) is the plain (tilde) boundary kernel at real theta
// and Im is entrywise (the -theta boundary value is the conjugate kernel).
// The integrand extends continuously through theta in {0, +-pi}; nodes never
// land there.
PropagatorSnapshot propagator_pc_spectral(double t, const MatrixPotential& Q,
                                          const ModelParams& params,
                                          const LatticeWindow& n_range,
                                          const LatticeWindow& k_range,
                                          const QuadratureSpec& quad = {});

// Finite-section spectral calculus: sum over continuum-tagged eigenpairs of
// e^{-i t lambda_j} psi_j psi_j^T.
PropagatorSnapshot propagator_pc_oracle(double t, const TruncatedOperator& op,
                                        const LatticeWindow& n_range,
                                        const LatticeWindow& k_range);

}  // namespace dirac
