#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dirac/errors.hpp"

namespace dirac {

using Complex = std::complex<double>;

// Mass parameter plus the derived geometry of the two spectral bands
// [-sqrt(m^2+4), -m] u [m, sqrt(m^2+4)].
struct ModelParams {
    double mass;

    explicit ModelParams(double m);

    double band_min() const { return mass; }
    double band_max() const;
    // ordered: -band_max, -band_min, band_min, band_max
    std::array<double, 4> gap_edges() const;
    // distance from lambda to the closed union of the two bands (0 inside)
    double distance_to_bands(double lambda) const;
};

// Inclusive site range [n_min, n_max] on the integer lattice.
struct LatticeWindow {
    int n_min = 0;
    int n_max = 0;

    LatticeWindow() = default;
    LatticeWindow(int lo, int hi);

    int size() const { return n_max - n_min + 1; }
    bool contains(int n) const { return n >= n_min && n <= n_max; }
    int index_of(int n) const;
    LatticeWindow grown(int margin) const { return {n_min - margin, n_max + margin}; }
};

// Two-component complex sequence on a window.
struct SpinorSequence {
    LatticeWindow window;
    std::vector<Eigen::Vector2cd> values;

    SpinorSequence() = default;
    explicit SpinorSequence(const LatticeWindow& w)
        : window(w), values(static_cast<size_t>(w.size()), Eigen::Vector2cd::Zero()) {}

    Eigen::Vector2cd& at(int n) { return values[static_cast<size_t>(window.index_of(n))]; }
    const Eigen::Vector2cd& at(int n) const {
        return values[static_cast<size_t>(window.index_of(n))];
    }
};

// Real 2x2 matrix potential with finite support. Ingestion enforces the
// structural constraints q12 == q21 (exact) and q21 != -1; everything
// downstream (Wronskian constancy, the A_n factors of the Jost recursion)
// silently breaks without them.
class MatrixPotential {
public:
    MatrixPotential() = default;  // zero potential, empty support

    static MatrixPotential zero() { return MatrixPotential(); }
    static MatrixPotential from_entries(const std::vector<std::pair<int, Eigen::Matrix2d>>& entries);
    // Test hook: skips the structural validation. Used by negative controls only.
    static MatrixPotential from_entries_unchecked(
        const std::vector<std::pair<int, Eigen::Matrix2d>>& entries);
    // One line per site: n q11 q12 q21 q22, '#' starts a comment.
    static MatrixPotential parse(std::istream& in);
    static MatrixPotential load(const std::string& path);

    bool empty() const { return entries_.empty(); }
    LatticeWindow support() const;  // throws if empty
    Eigen::Matrix2d at(int n) const;
    const std::vector<std::pair<int, Eigen::Matrix2d>>& entries() const { return entries_; }

    // sum over support of (1+|n|)^sigma * max-entry magnitude
    double weighted_l1(double sigma) const;

    // Bound on the weighted l^1_1 mass discarded when this potential was
    // produced by truncating a non-compact one. Zero for file/exact input.
    double truncation_tail() const { return truncation_tail_; }
    void set_truncation_tail(double t) { truncation_tail_ = t; }

private:
    std::vector<std::pair<int, Eigen::Matrix2d>> entries_;  // sorted by site
    double truncation_tail_ = 0.0;
};

enum class Lp { One, Two, Inf };

// (sum (1+|n|)^{p sigma} |u_n|^p)^{1/p}, or the weighted sup for p = inf.
// Empty windows give 0.
double weighted_norm(const LatticeWindow& window, std::span<const Complex> values, Lp p,
                     double sigma);

// (D w)_n = (m u_n + v_n - v_{n+1} + (Q w)_n^1,  u_n - u_{n-1} - m v_n + (Q w)_n^2).
// The result lives on the interior window shrunk by one site at each end.
SpinorSequence apply_dirac(const ModelParams& params, const MatrixPotential& Q,
                           const SpinorSequence& w);

}  // namespace dirac
