#pragma once

#include <cmath>
#include <vector>

namespace dirac {

// Composite Gauss-Legendre rule. Node counts scale with the oscillation
// frequency of e^{-i t g(theta)} integrands; panels are open (nodes never land
// on panel boundaries, in particular never on theta in {0, +-pi}).
struct QuadratureSpec {
    int min_panels = 64;
    double panels_per_unit_time = 8.0;
    double tolerance = 1e-8;       // accepted error estimate per entry
    bool estimate_error = true;    // doubled-panel Richardson check
    int threads = 0;               // 0 = hardware concurrency

    int panels_for(double t) const {
        const double p = panels_per_unit_time * std::abs(t);
        return std::max(min_panels, static_cast<int>(std::ceil(p)));
    }
};

struct QuadNode {
    double x;
    double w;
};

// 8-point Gauss-Legendre panels over [a, b].
std::vector<QuadNode> composite_gauss_nodes(double a, double b, int panels);

}  // namespace dirac
