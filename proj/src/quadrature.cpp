#include "dirac/quadrature.hpp"

namespace dirac {

namespace {
// 8-point Gauss-Legendre abscissas/weights on [-1, 1]
constexpr double kX[4] = {0.18343464249564980, 0.52553240991632899,
                          0.79666647741362674, 0.96028985649753623};
constexpr double kW[4] = {0.36268378337836198, 0.31370664587788729,
                          0.22238103445337447, 0.10122853629037626};
}  // namespace

std::vector<QuadNode> composite_gauss_nodes(double a, double b, int panels) {
    std::vector<QuadNode> nodes;
    nodes.reserve(static_cast<size_t>(panels) * 8);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int j = 3; j >= 0; --j) nodes.push_back({mid - half * kX[j], half * kW[j]});
        for (int j = 0; j < 4; ++j) nodes.push_back({mid + half * kX[j], half * kW[j]});
    }
    return nodes;
}

}  // namespace dirac
