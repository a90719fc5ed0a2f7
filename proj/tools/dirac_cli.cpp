// Command-line surface: ingestion, validation, computation commands, CSV
// emission. Exit codes: 0 success, 1 input/validation error, 2 numerical
// failure; machine-readable "ERROR <code>: <detail>" on stderr.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <Eigen/Core>

#include "dirac/decay.hpp"
#include "dirac/free_dirac.hpp"
#include "dirac/propagator.hpp"
#include "dirac/scattering.hpp"

using namespace dirac;

namespace {

struct PotentialOptions {
    std::string path;
    std::string builtin = "zero";
    int site = 0;
    double q11 = 0.0, q12 = 0.0, q22 = 0.0;
    double amplitude = 0.5, rate = 1.0;
    int half_width = 0;
    unsigned seed = 1;
    double envelope_rate = 0.5;
};

struct CommonOptions {
    double mass = 1.0;
    int window = 200;
    int threads = 0;
    std::string out_dir = ".";
    PotentialOptions pot;
};

MatrixPotential build_exp_decay(const PotentialOptions& o) {
    int hw = o.half_width;
    const auto site_scale = [&](int n) { return o.amplitude * std::exp(-o.rate * std::abs(n)); };
    const auto tail_mass = [&](int from) {
        double s = 0.0;
        for (int n = from; n < from + 4000; ++n) {
            const double t = 2.0 * (1.0 + n) * site_scale(n);
            s += t;
            if (t < 1e-18) break;
        }
        return s;
    };
    if (hw <= 0) {  // auto-size until the discarded weighted tail is negligible
        hw = 1;
        while (tail_mass(hw + 1) > 1e-12 && hw < 2000) ++hw;
    }
    std::vector<std::pair<int, Eigen::Matrix2d>> entries;
    for (int n = -hw; n <= hw; ++n) {
        const double s = site_scale(n);
        Eigen::Matrix2d q;
        q << s, 0.3 * s, 0.3 * s, -0.5 * s;
        entries.emplace_back(n, q);
    }
    MatrixPotential Q = MatrixPotential::from_entries(entries);
    Q.set_truncation_tail(tail_mass(hw + 1));
    return Q;
}

MatrixPotential build_seeded_random(const PotentialOptions& o) {
    std::mt19937 gen(o.seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<std::pair<int, Eigen::Matrix2d>> entries;
    for (int n = -o.half_width; n <= o.half_width; ++n) {
        const double env = std::exp(-o.envelope_rate * std::abs(n));
        Eigen::Matrix2d q;
        const double off = dist(gen) * env;
        q << dist(gen) * env, off, off, dist(gen) * env;
        entries.emplace_back(n, q);
    }
    return MatrixPotential::from_entries(entries);
}

MatrixPotential build_potential(const PotentialOptions& o) {
    if (!o.path.empty()) return MatrixPotential::load(o.path);
    if (o.builtin == "zero") return MatrixPotential::zero();
    if (o.builtin == "single_site") {
        Eigen::Matrix2d q;
        q << o.q11, o.q12, o.q12, o.q22;
        return MatrixPotential::from_entries({{o.site, q}});
    }
    if (o.builtin == "exp_decay") return build_exp_decay(o);
    if (o.builtin == "seeded_random") return build_seeded_random(o);
    throw ValidationError("unknown builtin potential: " + o.builtin);
}

std::vector<double> parse_grid(const std::string& spec) {
    // a:b:points[:log|lin]
    double a = 0.0, b = 0.0;
    int points = 0;
    char mode[8] = "log";
    const int got = std::sscanf(spec.c_str(), "%lf:%lf:%d:%7s", &a, &b, &points, mode);
    if (got < 3) throw ValidationError("grid spec must be a:b:points[:log|lin]");
    if (points < 2) throw ValidationError("grid needs at least 2 points");
    const std::string m(mode);
    if (m == "log") return log_spaced(a, b, points);
    if (m != "lin") throw ValidationError("grid mode must be log or lin");
    std::vector<double> out(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) out[static_cast<size_t>(i)] = a + (b - a) * i / (points - 1);
    return out;
}

std::ofstream open_output(const CommonOptions& common, const std::string& name) {
    std::filesystem::create_directories(common.out_dir);
    const auto path = std::filesystem::path(common.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    std::cout << "writing " << path.string() << "\n";
    return out;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--mass", common.mass, "mass m > 0");
    cmd->add_option("--window", common.window, "half-width N of the truncation window");
    cmd->add_option("--threads", common.threads, "worker thread cap (0 = hardware)");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--potential", common.pot.path, "potential file (n q11 q12 q21 q22)");
    cmd->add_option("--builtin", common.pot.builtin,
                    "builtin potential: zero|single_site|exp_decay|seeded_random");
    cmd->add_option("--site", common.pot.site, "single_site: site index");
    cmd->add_option("--q11", common.pot.q11, "single_site: q11");
    cmd->add_option("--q12", common.pot.q12, "single_site: q12 (= q21)");
    cmd->add_option("--q22", common.pot.q22, "single_site: q22");
    cmd->add_option("--amplitude", common.pot.amplitude, "exp_decay: amplitude");
    cmd->add_option("--rate", common.pot.rate, "exp_decay: decay rate");
    cmd->add_option("--half-width", common.pot.half_width,
                    "exp_decay/seeded_random: support half-width (0 = auto for exp_decay)");
    cmd->add_option("--seed", common.pot.seed, "seeded_random: seed");
    cmd->add_option("--envelope-rate", common.pot.envelope_rate,
                    "seeded_random: envelope decay rate");
}

void apply_threads(const CommonOptions& common) {
    if (common.threads > 0) Eigen::setNbThreads(common.threads);
}

char fmt_buf[256];
const char* fmt(double x) {
    std::snprintf(fmt_buf, sizeof(fmt_buf), "%.17g", x);
    return fmt_buf;
}

int run_spectrum(const CommonOptions& common) {
    apply_threads(common);
    const ModelParams params(common.mass);
    const MatrixPotential Q = build_potential(common.pot);
    const TruncatedOperator op(params, Q, common.window);
    const auto edges = params.gap_edges();
    std::cout << "gap edges: " << edges[0] << " " << edges[1] << " " << edges[2] << " "
              << edges[3] << "\n";
    auto out = open_output(common, "spectrum.csv");
    out << "index,eigenvalue,tag\n";
    const Eigen::VectorXd& ev = op.eigenvalues();
    int bound = 0;
    for (int j = 0; j < ev.size(); ++j) {
        const bool b = op.is_bound(j);
        bound += b ? 1 : 0;
        out << j << "," << fmt(ev(j)) << "," << (b ? "bound" : "continuum") << "\n";
    }
    std::cout << "eigenvalues: " << ev.size() << ", bound states: " << bound
              << " (edge margin " << op.edge_margin() << ")\n";
    return 0;
}

int run_scattering(const CommonOptions& common, const std::string& theta_grid,
                   double threshold) {
    apply_threads(common);
    const ModelParams params(common.mass);
    const MatrixPotential Q = build_potential(common.pot);
    const auto grid = parse_grid(theta_grid);
    for (double th : grid)
        if (std::abs(th) < 1e-6 || std::abs(std::abs(th) - M_PI) < 1e-6)
            throw ValidationError("theta grid must avoid 0 and +-pi");
    auto out = open_output(common, "scattering.csv");
    out << "theta,re_W,im_W,re_a,im_a,re_b_plus,im_b_plus,re_b_minus,im_b_minus,"
           "re_T,im_T,re_R_plus,im_R_plus,re_R_minus,im_R_minus,unitarity_residual\n";
    for (double th : grid) {
        const SpectralPoint pt = SpectralPoint::from_theta(th, common.mass);
        const ScatteringCoefficients sc = scattering_coefficients(pt, Q);
        const double unit = std::abs(std::norm(sc.a) - std::norm(sc.b_minus) - 1.0);
        out << fmt(th);
        for (const Complex v : {sc.W, sc.a, sc.b_plus, sc.b_minus, sc.T, sc.R_plus,
                                sc.R_minus}) {
            out << "," << fmt(v.real());
            out << "," << fmt(v.imag());
        }
        out << "," << fmt(unit) << "\n";
    }
    const ResonanceReport report = detect_resonances(Q, common.mass, threshold);
    for (const auto& e : report.edges)
        out << "# resonance edge=" << fmt(e.lambda) << " |W|=" << std::abs(e.wronskian)
            << " scale=" << e.scale << " resonant=" << (e.resonant ? 1 : 0) << "\n";
    return 0;
}

int run_resonances(const CommonOptions& common, double threshold) {
    const MatrixPotential Q = build_potential(common.pot);
    const ResonanceReport report = detect_resonances(Q, common.mass, threshold);
    for (const auto& e : report.edges)
        std::cout << "edge lambda=" << e.lambda << "  |W|=" << std::abs(e.wronskian)
                  << "  scale=" << e.scale << "  resonant=" << (e.resonant ? "yes" : "no")
                  << "\n";
    std::cout << (report.any_resonant() ? "resonant" : "non-resonant") << "\n";
    return 0;
}

int run_evolve(const CommonOptions& common, const std::string& t_grid,
               const std::string& method, int probe) {
    apply_threads(common);
    const ModelParams params(common.mass);
    const MatrixPotential Q = build_potential(common.pot);
    const auto times = parse_grid(t_grid);
    const LatticeWindow range{-probe, probe};
    QuadratureSpec quad;
    quad.threads = common.threads;

    std::shared_ptr<TruncatedOperator> op;
    if (method == "oracle" || method == "both")
        op = std::make_shared<TruncatedOperator>(params, Q, common.window);

    for (double t : times) {
        PropagatorSnapshot snap;
        if (method == "spectral") {
            snap = propagator_pc_spectral(t, Q, params, range, range, quad);
        } else if (method == "oracle") {
            snap = propagator_pc_oracle(t, *op, range, range);
        } else if (method == "both") {
            snap = propagator_pc_oracle(t, *op, range, range);
            const PropagatorSnapshot s2 =
                propagator_pc_spectral(t, Q, params, range, range, quad);
            std::cout << "t=" << t << " method-difference="
                      << (snap.kernel.data - s2.kernel.data).cwiseAbs().maxCoeff() << "\n";
        } else {
            throw ValidationError("method must be spectral, oracle or both");
        }
        std::snprintf(fmt_buf, sizeof(fmt_buf), "evolve_t%g.csv", t);
        auto out = open_output(common, fmt_buf);
        out << "n,k,re00,im00,re01,im01,re10,im10,re11,im11\n";
        for (int n = -probe; n <= probe; ++n)
            for (int k = -probe; k <= probe; ++k) {
                const Eigen::Matrix2cd b = snap.kernel.block(n, k);
                out << n << "," << k;
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) {
                        out << "," << fmt(b(a, c).real());
                        out << "," << fmt(b(a, c).imag());
                    }
                out << "\n";
            }
        if (snap.quad_error)
            std::cout << "t=" << t << " quadrature error estimate " << *snap.quad_error
                      << "\n";
        // propagation-cone diagnostic over the probed square
        double beyond_cone = 0.0;
        bool any = false;
        for (int n = -probe; n <= probe; ++n)
            for (int k = -probe; k <= probe; ++k) {
                if (std::abs(n - k) <= t + 40.0) continue;
                any = true;
                beyond_cone =
                    std::max(beyond_cone, snap.kernel.block(n, k).cwiseAbs().maxCoeff());
            }
        if (any)
            std::cout << "t=" << t << " max |block| beyond |n-k| > t+40: " << beyond_cone
                      << "\n";
    }
    return 0;
}

int run_decay(const CommonOptions& common, const std::string& t_grid,
              const std::string& norm, double sigma, const std::string& method) {
    apply_threads(common);
    DecayConfig config;
    config.mass = common.mass;
    config.potential = build_potential(common.pot);
    config.times = parse_grid(t_grid);
    config.sigma = sigma;
    config.threads = common.threads;
    config.quad.threads = common.threads;
    if (norm == "l1_linf") config.norm = NormKind::L1ToLinf;
    else if (norm == "l2w") config.norm = NormKind::WeightedL2;
    else if (norm == "l1w_linfw") config.norm = NormKind::WeightedSup;
    else throw ValidationError("norm must be l1_linf, l2w or l1w_linfw");
    if (method == "spectral") config.method = PropagatorSnapshot::Method::Spectral;
    else if (method == "oracle") config.method = PropagatorSnapshot::Method::Oracle;
    else throw ValidationError("method must be spectral or oracle");
    config.window = common.window;
    std::filesystem::create_directories(common.out_dir);
    config.csv_path = (std::filesystem::path(common.out_dir) / "decay.csv").string();

    const DecaySeries series = run_decay_experiment(config);
    std::cout << "writing " << config.csv_path << "\n";
    std::cout << "slope=" << series.fitted_slope << " residual=" << series.residual
              << " fit_window=" << series.fit_begin << ":" << series.fit_end << "\n";
    return 0;
}

int run_free_kernel(const CommonOptions& common, double t, int n, int k) {
    apply_threads(common);
    QuadratureSpec quad;
    quad.threads = common.threads;
    const BlockResult r = free_propagator_block(t, n, k, common.mass, quad);
    std::cout << "block t=" << t << " n=" << n << " k=" << k << "\n";
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            std::cout << "  [" << a << "][" << c << "] = " << fmt(r.block(a, c).real())
                      << (r.block(a, c).imag() < 0 ? " - " : " + ")
                      << std::abs(r.block(a, c).imag()) << "i\n";
    std::cout << "quadrature error estimate " << r.quad_error << "\n";
    return 0;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\"");
    const auto b = s.find_last_not_of(" \t\"\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// --config FILE expands "key = value" lines into --key value pairs inserted
// right after the subcommand token; flags given on the command line must not
// repeat keys from the file.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config file: " + config_path);
    size_t insert_at = args.size();
    for (size_t i = 1; i < args.size(); ++i)
        if (!args[i].empty() && args[i][0] != '-') {
            insert_at = i + 1;
            break;
        }
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        extra.push_back("--" + trim(line.substr(0, eq)));
        extra.push_back(trim(line.substr(eq + 1)));
    }
    args.insert(args.begin() + static_cast<long>(insert_at), extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattering and dispersive-decay toolkit for the 1d discrete Dirac operator"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string t_grid = "20:400:12:log";
    std::string theta_grid = "-3:3:61:lin";
    std::string norm = "l1_linf";
    std::string method = "oracle";
    double sigma = 1.0;
    double threshold = 1e-8;
    int probe = 20;
    double t_single = 1.0;
    int n_single = 0, k_single = 0;

    CLI::App* spectrum = app.add_subcommand("spectrum", "truncated eigenvalues and tags");
    add_common(spectrum, common);

    CLI::App* scattering =
        app.add_subcommand("scattering", "W, a, b, T, R over a theta grid");
    add_common(scattering, common);
    scattering->add_option("--theta-grid", theta_grid, "a:b:points[:log|lin]");
    scattering->add_option("--threshold", threshold, "relative resonance threshold");

    CLI::App* resonances = app.add_subcommand("resonances", "edge Wronskian report");
    add_common(resonances, common);
    resonances->add_option("--threshold", threshold, "relative resonance threshold");

    CLI::App* evolve = app.add_subcommand("evolve", "propagator kernel snapshots");
    add_common(evolve, common);
    evolve->add_option("--t-grid", t_grid, "a:b:points[:log|lin]");
    evolve->add_option("--method", method, "spectral|oracle|both");
    evolve->add_option("--probe", probe, "half-width of the probed block range");

    CLI::App* decay = app.add_subcommand("decay", "norm decay series and slope fit");
    add_common(decay, common);
    decay->add_option("--t-grid", t_grid, "a:b:points[:log|lin]");
    decay->add_option("--norm", norm, "l1_linf|l2w|l1w_linfw");
    decay->add_option("--sigma", sigma, "weight exponent");
    decay->add_option("--method", method, "spectral|oracle");

    CLI::App* free_kernel = app.add_subcommand("free-kernel", "single free propagator block");
    add_common(free_kernel, common);
    free_kernel->add_option("--t", t_single, "time");
    free_kernel->add_option("--n", n_single, "row site");
    free_kernel->add_option("--k", k_single, "column site");

    for (CLI::App* sub : app.get_subcommands({}))
        sub->add_option("--config", "read options from a key = value file")
            ->expected(1)
            ->type_name("FILE");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<char*> raw;
        raw.reserve(args.size());
        for (auto& a : args) raw.push_back(a.data());
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "ERROR 1: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "ERROR 1: " << e.what() << "\n";
        return 1;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(common);
        if (scattering->parsed()) return run_scattering(common, theta_grid, threshold);
        if (resonances->parsed()) return run_resonances(common, threshold);
        if (evolve->parsed()) return run_evolve(common, t_grid, method, probe);
        if (decay->parsed()) return run_decay(common, t_grid, norm, sigma, method);
        if (free_kernel->parsed())
            return run_free_kernel(common, t_single, n_single, k_single);
    } catch (const ValidationError& e) {
        std::cerr << "ERROR 1: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "ERROR 2: " << e.what() << " (estimate " << e.estimate() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR 2: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
