#include "dirac/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dirac {

ModelParams::ModelParams(double m) : mass(m) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw ValidationError("mass must be positive and finite");
}

double ModelParams::band_max() const { return std::sqrt(mass * mass + 4.0); }

std::array<double, 4> ModelParams::gap_edges() const {
    const double M = band_max();
    return {-M, -mass, mass, M};
}

double ModelParams::distance_to_bands(double lambda) const {
    const double a = std::abs(lambda);
    const double M = band_max();
    if (a < mass) return mass - a;
    if (a > M) return a - M;
    return 0.0;
}

LatticeWindow::LatticeWindow(int lo, int hi) : n_min(lo), n_max(hi) {
    if (lo > hi) throw ValidationError("lattice window requires n_min <= n_max");
}

int LatticeWindow::index_of(int n) const {
    if (!contains(n)) throw ValidationError("site outside lattice window");
    return n - n_min;
}

namespace {

void validate_entry(int n, const Eigen::Matrix2d& q, int line) {
    const auto where = [&]() -> std::string {
        if (line > 0) return "line " + std::to_string(line) + ": ";
        return "site " + std::to_string(n) + ": ";
    };
    if (!q.allFinite()) throw ValidationError(where() + "non-finite potential entry");
    if (q(0, 1) != q(1, 0))
        throw ValidationError(where() + "potential requires q12 == q21 exactly");
    if (q(1, 0) == -1.0)
        throw ValidationError(where() + "q21 = -1 makes the Jost factor A_n singular");
}

std::vector<std::pair<int, Eigen::Matrix2d>> sorted_nonzero(
    std::vector<std::pair<int, Eigen::Matrix2d>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < entries.size(); ++i)
        if (entries[i].first == entries[i - 1].first)
            throw ValidationError("duplicate potential site " + std::to_string(entries[i].first));
    std::erase_if(entries, [](const auto& e) { return e.second.isZero(0.0); });
    return entries;
}

}  // namespace

MatrixPotential MatrixPotential::from_entries(
    const std::vector<std::pair<int, Eigen::Matrix2d>>& entries) {
    for (const auto& [n, q] : entries) validate_entry(n, q, 0);
    MatrixPotential p;
    p.entries_ = sorted_nonzero(entries);
    return p;
}

MatrixPotential MatrixPotential::from_entries_unchecked(
    const std::vector<std::pair<int, Eigen::Matrix2d>>& entries) {
    MatrixPotential p;
    p.entries_ = sorted_nonzero(entries);
    return p;
}

MatrixPotential MatrixPotential::parse(std::istream& in) {
    std::vector<std::pair<int, Eigen::Matrix2d>> entries;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        long long n;
        if (!(fields >> n)) {
            std::string leftover;
            if (fields.clear(), fields >> leftover)
                throw ValidationError("line " + std::to_string(line) + ": expected integer site");
            continue;  // blank or comment-only line
        }
        double q11, q12, q21, q22;
        if (!(fields >> q11 >> q12 >> q21 >> q22))
            throw ValidationError("line " + std::to_string(line) +
                                  ": expected 'n q11 q12 q21 q22'");
        std::string extra;
        if (fields >> extra)
            throw ValidationError("line " + std::to_string(line) + ": trailing fields");
        Eigen::Matrix2d q;
        q << q11, q12, q21, q22;
        validate_entry(static_cast<int>(n), q, line);
        entries.emplace_back(static_cast<int>(n), q);
    }
    MatrixPotential p;
    try {
        p.entries_ = sorted_nonzero(entries);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("potential file: ") + e.what());
    }
    return p;
}

MatrixPotential MatrixPotential::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open potential file: " + path);
    return parse(in);
}

LatticeWindow MatrixPotential::support() const {
    if (entries_.empty()) throw ValidationError("zero potential has no support window");
    return {entries_.front().first, entries_.back().first};
}

Eigen::Matrix2d MatrixPotential::at(int n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const auto& e, int site) { return e.first < site; });
    if (it != entries_.end() && it->first == n) return it->second;
    return Eigen::Matrix2d::Zero();
}

double MatrixPotential::weighted_l1(double sigma) const {
    double sum = 0.0;
    for (const auto& [n, q] : entries_)
        sum += std::pow(1.0 + std::abs(n), sigma) * q.cwiseAbs().maxCoeff();
    return sum;
}

double weighted_norm(const LatticeWindow& window, std::span<const Complex> values, Lp p,
                     double sigma) {
    if (values.size() != static_cast<size_t>(window.size()))
        throw ValidationError("weighted_norm: length does not match window");
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (int n = window.n_min; n <= window.n_max; ++n) {
        const double weight = std::pow(1.0 + std::abs(n), sigma);
        const double a = std::abs(values[static_cast<size_t>(n - window.n_min)]);
        switch (p) {
            case Lp::One: acc += weight * a; break;
            case Lp::Two: acc += weight * weight * a * a; break;
            case Lp::Inf: acc = std::max(acc, weight * a); break;
        }
    }
    return p == Lp::Two ? std::sqrt(acc) : acc;
}

SpinorSequence apply_dirac(const ModelParams& params, const MatrixPotential& Q,
                           const SpinorSequence& w) {
    if (w.window.size() < 3)
        throw ValidationError("apply_dirac needs one extra site at each end of the window");
    SpinorSequence out(LatticeWindow{w.window.n_min + 1, w.window.n_max - 1});
    const double m = params.mass;
    for (int n = out.window.n_min; n <= out.window.n_max; ++n) {
        const Eigen::Vector2cd& wn = w.at(n);
        const Complex u = wn(0), v = wn(1);
        Complex row1 = m * u + v - w.at(n + 1)(1);
        Complex row2 = u - w.at(n - 1)(0) - m * v;
        if (!Q.empty()) {
            const Eigen::Matrix2d q = Q.at(n);
            row1 += q(0, 0) * u + q(0, 1) * v;
            row2 += q(1, 0) * u + q(1, 1) * v;
        }
        out.at(n) << row1, row2;
    }
    return out;
}

}  // namespace dirac
