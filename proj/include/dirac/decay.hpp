#pragma once

#include <memory>
#include <string>

#include "dirac/propagator.hpp"

namespace dirac {

// sup over (n,k) of the max-magnitude entry; bounds the l^1 -> l^inf norm
double norm_l1_to_linf(const KernelBlockMatrix& kernel);

// operator norm of (1+|n|)^{-sigma} K (1+|k|)^{-sigma}: largest singular value,
// or the Hilbert-Schmidt upper bound when hs is set
double norm_weighted_l2(const KernelBlockMatrix& kernel, double sigma, bool hs = false);

// sup over (n,k) of |block entry| / ((1+|n|)(1+|k|))^sigma
double norm_weighted_l1_linf(const KernelBlockMatrix& kernel, double sigma = 1.5);

struct IntervalSet {
    std::vector<std::pair<double, double>> intervals;
    double total_length() const {
        double s = 0.0;
        for (auto& [a, b] : intervals) s += b - a;
        return s;
    }
    bool contains(double x) const {
        for (auto& [a, b] : intervals)
            if (x >= a && x <= b) return true;
        return false;
    }
};

// J_+- = {|theta -+ theta0| <= nu |theta0|} and the complement J, the
// stationary-phase splitting of [-pi, pi].
struct SplitDomains {
    IntervalSet j_plus;   // centered at theta0 < 0
    IntervalSet j_minus;  // centered at -theta0
    IntervalSet j_rest;
    StationaryData data;
};
SplitDomains split_domains(double v, double m);

enum class NormKind { L1ToLinf, WeightedL2, WeightedSup };

struct DecaySeries {
    NormKind kind;
    double sigma = 0.0;
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<int> argmax_distance;  // |n-k| attaining sup norms, -1 for l2
    double fitted_slope = 0.0;
    double residual = 0.0;
    int fit_begin = 0;  // [fit_begin, fit_end) indices of the log-log fit
    int fit_end = 0;
};

struct DecayConfig {
    double mass = 1.0;
    MatrixPotential potential;
    NormKind norm = NormKind::L1ToLinf;
    double sigma = 0.0;
    bool hs = false;
    std::vector<double> times;  // increasing
    PropagatorSnapshot::Method method = PropagatorSnapshot::Method::Oracle;
    int window = 0;        // 0: auto via N >= v0 t_max + 100
    int probe_margin = 60;  // norms probed on |n|,|k| <= N - margin
    int probe_half_width = 0;  // explicit probe range override (0: use margin)
    double fit_fraction = 0.5;  // upper part of the grid used for the fit
    QuadratureSpec quad;
    int threads = 0;
    std::string csv_path;  // empty: no file
    // reuse one decomposition across experiments with the same operator
    std::shared_ptr<const TruncatedOperator> oracle;
};

std::vector<double> log_spaced(double a, double b, int points);

DecaySeries run_decay_experiment(const DecayConfig& config);

void write_decay_csv(const DecaySeries& series, const std::string& path);

}  // namespace dirac
