#include "dirac/decay.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dirac/free_dirac.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

double norm_l1_to_linf(const KernelBlockMatrix& kernel) {
    return kernel.data.cwiseAbs().maxCoeff();
}

namespace {

Eigen::VectorXd block_weights(const LatticeWindow& range, double sigma) {
    Eigen::VectorXd w(2 * range.size());
    for (int n = range.n_min; n <= range.n_max; ++n) {
        const double v = std::pow(1.0 + std::abs(n), -sigma);
        w(2 * range.index_of(n)) = v;
        w(2 * range.index_of(n) + 1) = v;
    }
    return w;
}

// Largest singular value by power iteration on K* K. Near-degenerate leading
// singular values converge to the right value anyway, just more slowly.
double operator_two_norm(const Eigen::MatrixXcd& K) {
    if (K.size() == 0) return 0.0;
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(K.cols());
    for (int i = 0; i < K.cols(); ++i)
        x(i) += Complex(0.0, 1.0 / (1.0 + i));  // break symmetry deterministically
    x.normalize();
    double sigma = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const Eigen::VectorXcd y = K * x;
        const double s = y.norm();
        if (s == 0.0) return 0.0;
        const Eigen::VectorXcd xn = K.adjoint() * y;
        const double nx = xn.norm();
        if (nx == 0.0) return s;
        x = xn / nx;
        if (it > 2 && std::abs(s - sigma) <= 1e-10 * s) return s;
        sigma = s;
    }
    return sigma;
}

// Weighted operator norm of the oracle propagator without materializing the
// kernel: K = V_c e^{-it Lambda} V_c^T is complex symmetric, so A = W K W is
// too and A^H x = conj(A conj(x)). Weights vanish outside the probed range,
// which is the exact block restriction.
double oracle_weighted_l2(const TruncatedOperator& op, double t, double sigma,
                          const LatticeWindow& probe) {
    op.decompose();
    const Eigen::MatrixXd& V = op.eigenvectors();
    const Eigen::VectorXd& ev = op.eigenvalues();
    const int dim = op.dim();

    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    for (int n = probe.n_min; n <= probe.n_max; ++n) {
        const double v = std::pow(1.0 + std::abs(n), -sigma);
        w(op.row_of(n, 0)) = v;
        w(op.row_of(n, 1)) = v;
    }
    Eigen::VectorXd cv(ev.size()), sv(ev.size());
    for (int j = 0; j < ev.size(); ++j) {
        if (op.is_bound(j)) {
            cv(j) = sv(j) = 0.0;
        } else {
            cv(j) = std::cos(t * ev(j));
            sv(j) = -std::sin(t * ev(j));
        }
    }
    const auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        const Eigen::VectorXcd wx = w.asDiagonal() * x;
        const Eigen::VectorXd ar = V.transpose() * wx.real().eval();
        const Eigen::VectorXd ai = V.transpose() * wx.imag().eval();
        const Eigen::VectorXd br = cv.cwiseProduct(ar) - sv.cwiseProduct(ai);
        const Eigen::VectorXd bi = sv.cwiseProduct(ar) + cv.cwiseProduct(ai);
        Eigen::VectorXcd out =
            (V * br).cast<Complex>() + Complex(0.0, 1.0) * (V * bi).cast<Complex>();
        return w.asDiagonal() * out;
    };

    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(dim);
    for (int i = 0; i < dim; ++i) x(i) += Complex(0.0, 1.0 / (1.0 + i));
    x.normalize();
    double sigma_est = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const Eigen::VectorXcd y = apply(x);
        const double s = y.norm();
        if (s == 0.0) return 0.0;
        const Eigen::VectorXcd xn = apply(y.conjugate()).conjugate();  // A^H y
        const double nx = xn.norm();
        if (nx == 0.0) return s;
        x = xn / nx;
        if (it > 3 && std::abs(s - sigma_est) <= 1e-10 * s) return s;
        sigma_est = s;
    }
    return sigma_est;
}

}  // namespace

double norm_weighted_l2(const KernelBlockMatrix& kernel, double sigma, bool hs) {
    if (sigma <= 0.5) throw ValidationError("weighted l2 norm needs sigma > 1/2");
    const Eigen::VectorXd wn = block_weights(kernel.n_range, sigma);
    const Eigen::VectorXd wk = block_weights(kernel.k_range, sigma);
    const Eigen::MatrixXcd weighted =
        wn.asDiagonal() * kernel.data * wk.asDiagonal();
    if (hs) return weighted.norm();
    return operator_two_norm(weighted);
}

double norm_weighted_l1_linf(const KernelBlockMatrix& kernel, double sigma) {
    if (sigma < 0.0) throw ValidationError("weighted sup norm needs sigma >= 0");
    double worst = 0.0;
    for (int n = kernel.n_range.n_min; n <= kernel.n_range.n_max; ++n)
        for (int k = kernel.k_range.n_min; k <= kernel.k_range.n_max; ++k) {
            const double w = std::pow((1.0 + std::abs(n)) * (1.0 + std::abs(k)), -sigma);
            worst = std::max(worst, kernel.block(n, k).cwiseAbs().maxCoeff() * w);
        }
    return worst;
}

SplitDomains split_domains(double v, double m) {
    (void)v;  // the radius nu depends on the mass only; v selects the phase
    SplitDomains out;
    out.data = StationaryData::compute(m);
    const double r = out.data.nu * std::abs(out.data.theta0);
    const double c_plus = out.data.theta0;
    const double c_minus = -out.data.theta0;
    out.j_plus.intervals = {{c_plus - r, c_plus + r}};
    out.j_minus.intervals = {{c_minus - r, c_minus + r}};
    out.j_rest.intervals = {{-M_PI, c_plus - r}, {c_plus + r, c_minus - r},
                            {c_minus + r, M_PI}};
    return out;
}

std::vector<double> log_spaced(double a, double b, int points) {
    if (!(a > 0.0) || !(b > a) || points < 2)
        throw ValidationError("log_spaced needs 0 < a < b and at least 2 points");
    std::vector<double> out(static_cast<size_t>(points));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < points; ++i)
        out[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (points - 1));
    return out;
}

namespace {

struct NormResult {
    double value;
    int argmax_distance;
};

NormResult evaluate_norm(const KernelBlockMatrix& kernel, const DecayConfig& config) {
    switch (config.norm) {
        case NormKind::L1ToLinf: {
            double worst = 0.0;
            int arg = 0;
            for (int n = kernel.n_range.n_min; n <= kernel.n_range.n_max; ++n)
                for (int k = kernel.k_range.n_min; k <= kernel.k_range.n_max; ++k) {
                    const double a = kernel.block(n, k).cwiseAbs().maxCoeff();
                    if (a > worst) {
                        worst = a;
                        arg = std::abs(n - k);
                    }
                }
            return {worst, arg};
        }
        case NormKind::WeightedL2:
            return {norm_weighted_l2(kernel, config.sigma, config.hs), -1};
        case NormKind::WeightedSup: {
            double worst = 0.0;
            int arg = 0;
            for (int n = kernel.n_range.n_min; n <= kernel.n_range.n_max; ++n)
                for (int k = kernel.k_range.n_min; k <= kernel.k_range.n_max; ++k) {
                    const double w =
                        std::pow((1.0 + std::abs(n)) * (1.0 + std::abs(k)), -config.sigma);
                    const double a = kernel.block(n, k).cwiseAbs().maxCoeff() * w;
                    if (a > worst) {
                        worst = a;
                        arg = std::abs(n - k);
                    }
                }
            return {worst, arg};
        }
    }
    throw ValidationError("unknown norm kind");
}

// block-Toeplitz fill from the free profile; the argmax bookkeeping works on
// the profile directly. Blocks beyond the propagation cone |p| > v0 t + 150
// are below 1e-10 and skipped: the quadrature cost scales with the p-spread.
NormResult free_spectral_norm(double t, const DecayConfig& config, int probe_half_width) {
    const double v0 = StationaryData::compute(config.mass).v0;
    const int cone = static_cast<int>(std::ceil(v0 * t)) + 150;
    const int p_max = std::min(2 * probe_half_width, cone);
    const auto profile =
        free_propagator_profile(t, -p_max, p_max, config.mass, config.quad);

    if (config.norm == NormKind::L1ToLinf) {
        double worst = 0.0;
        int arg = 0;
        for (int p = -p_max; p <= p_max; ++p) {
            const double a = profile[static_cast<size_t>(p + p_max)].block.cwiseAbs().maxCoeff();
            if (a > worst) {
                worst = a;
                arg = std::abs(p);
            }
        }
        return {worst, arg};
    }

    const LatticeWindow range{-probe_half_width, probe_half_width};
    KernelBlockMatrix kernel(KernelBlockMatrix::Kind::Propagator, t, range, range);
    for (int n = range.n_min; n <= range.n_max; ++n)
        for (int k = range.n_min; k <= range.n_max; ++k) {
            const int p = n - k;
            if (std::abs(p) > p_max) continue;  // stays zero
            kernel.set_block(n, k, profile[static_cast<size_t>(p + p_max)].block);
        }
    return evaluate_norm(kernel, config);
}

void fit_slope(DecaySeries& series, double fit_fraction) {
    const int n = static_cast<int>(series.times.size());
    series.fit_begin = std::min(n - 2, static_cast<int>(std::floor(n * (1.0 - fit_fraction))));
    series.fit_end = n;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = series.fit_end - series.fit_begin;
    for (int i = series.fit_begin; i < series.fit_end; ++i) {
        const double x = std::log(series.times[static_cast<size_t>(i)]);
        const double y = std::log(series.norms[static_cast<size_t>(i)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    series.fitted_slope = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - series.fitted_slope * sx) / count;
    double rss = 0.0;
    for (int i = series.fit_begin; i < series.fit_end; ++i) {
        const double x = std::log(series.times[static_cast<size_t>(i)]);
        const double y = std::log(series.norms[static_cast<size_t>(i)]);
        const double r = y - (intercept + series.fitted_slope * x);
        rss += r * r;
    }
    series.residual = std::sqrt(rss / count);
}

}  // namespace

DecaySeries run_decay_experiment(const DecayConfig& config) {
    if (config.times.size() < 3)
        throw ValidationError("decay experiment needs at least 3 times");
    for (size_t i = 1; i < config.times.size(); ++i)
        if (!(config.times[i] > config.times[i - 1]))
            throw ValidationError("times must strictly increase");
    if (!(config.times.front() > 0.0)) throw ValidationError("times must be positive");

    const ModelParams params(config.mass);
    const double t_max = config.times.back();
    const double v0 = StationaryData::compute(config.mass).v0;
    const int auto_n = static_cast<int>(std::ceil(v0 * t_max)) + 100;
    int N = std::max(config.window, auto_n);

    std::shared_ptr<const TruncatedOperator> op = config.oracle;
    if (op) {
        if (op->half_width() < auto_n)
            throw ValidationError("provided oracle window is too small for t_max");
        N = op->half_width();
    } else if (config.method == PropagatorSnapshot::Method::Oracle) {
        op = std::make_shared<TruncatedOperator>(params, config.potential, N);
    }
    if (op) op->decompose();

    const int probe = config.probe_half_width > 0 ? std::min(config.probe_half_width, N)
                                                  : N - config.probe_margin;
    if (probe < 10) throw ValidationError("probe window collapsed; increase the window");
    const LatticeWindow range{-probe, probe};

    DecaySeries series;
    series.kind = config.norm;
    series.sigma = config.sigma;
    series.times = config.times;

    const bool free_spectral =
        config.method == PropagatorSnapshot::Method::Spectral && config.potential.empty();

    for (double t : config.times) {
        NormResult r{};
        if (free_spectral) {
            r = free_spectral_norm(t, config, probe);
        } else if (config.method == PropagatorSnapshot::Method::Spectral) {
            const PropagatorSnapshot snap = propagator_pc_spectral(
                t, config.potential, params, range, range, config.quad);
            r = evaluate_norm(snap.kernel, config);
        } else if (config.norm == NormKind::WeightedL2 && !config.hs) {
            r = {oracle_weighted_l2(*op, t, config.sigma, range), -1};
        } else {
            const PropagatorSnapshot snap = propagator_pc_oracle(t, *op, range, range);
            r = evaluate_norm(snap.kernel, config);
        }
        series.norms.push_back(r.value);
        series.argmax_distance.push_back(r.argmax_distance);
    }

    fit_slope(series, config.fit_fraction);
    if (!config.csv_path.empty()) write_decay_csv(series, config.csv_path);
    return series;
}

void write_decay_csv(const DecaySeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << "t,norm\n";
    char buf[128];
    for (size_t i = 0; i < series.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", series.times[i], series.norms[i]);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "# slope=%.17g residual=%.17g fit_window=%d:%d\n",
                  series.fitted_slope, series.residual, series.fit_begin, series.fit_end);
    out << buf;
}

}  // namespace dirac
