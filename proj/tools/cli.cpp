#include "cli.hpp"

#include "report.hpp"

#include "sgap/bounds.hpp"
#include "sgap/comparison_checks.hpp"
#include "sgap/discrete_spaces.hpp"
#include "sgap/errors.hpp"
#include "sgap/heat.hpp"
#include "sgap/model_ode.hpp"
#include "sgap/spectral.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sgap::cli {
namespace {

constexpr double kPi = std::numbers::pi;

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw NotFoundError("cannot write " + path);
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_check_csv(const std::string& path, const std::vector<CheckOutcome>& checks) {
    CsvWriter csv(path, {"check_name", "space_name", "applicable", "passed", "lhs", "rhs",
                         "slack_used", "worst_index", "worst_magnitude"});
    for (const auto& c : checks) {
        csv.row({c.check_name, c.space_name, c.applicable ? "true" : "false",
                 c.passed ? "true" : "false", csv_number(c.lhs), csv_number(c.rhs),
                 csv_number(c.slack_used), std::to_string(c.detail.vertex),
                 csv_number(c.detail.magnitude)});
    }
}

struct SpaceArgs {
    std::string space;
    std::optional<int> resolution;
    double c = kPi;
    double d = 2.0;
    double L = 2.0 * kPi;
    std::string mesh;
};

void add_space_options(CLI::App* cmd, SpaceArgs& a, const std::vector<std::string>& choices) {
    cmd->add_option("--space", a.space, "Fixture to build")
        ->required()
        ->check(CLI::IsMember(choices));
    cmd->add_option("--resolution", a.resolution,
                    "interval/circle: N; sphere: subdivisions (<= 7); football: N_r (N_theta = N_r / 2)");
    cmd->add_option("--c", a.c, "Football base circumference, in (0, 2π]");
    cmd->add_option("--d", a.d, "Interval length");
    cmd->add_option("--L", a.L, "Circle length");
    cmd->add_option("--mesh", a.mesh, "OFF file for --space mesh (metadata in <file>.meta.json)");
}

DiscreteSpace build_space(const SpaceArgs& a) {
    if (a.space == "interval") return build_interval(a.d, a.resolution.value_or(1000));
    if (a.space == "circle") return build_circle(a.L, a.resolution.value_or(2048));
    if (a.space == "sphere") {
        const int s = a.resolution.value_or(5);
        if (s < 0 || s > 7) {
            throw DomainError("resolution " + std::to_string(s) +
                              " exceeds the icosphere cap (0 to 7 subdivisions)");
        }
        return build_icosphere(s);
    }
    if (a.space == "football") {
        const int nr = a.resolution.value_or(128);
        return build_football(a.c, nr, std::max(8, nr / 2));
    }
    if (a.space == "mesh") {
        if (a.mesh.empty()) throw DomainError("--space mesh needs --mesh <path>");
        return load_mesh(a.mesh);
    }
    throw DomainError("unknown space " + a.space);
}

void record_space(nlohmann::json& p, const SpaceArgs& a, const DiscreteSpace& s) {
    p["space"] = a.space;
    if (a.resolution) p["resolution"] = *a.resolution;
    if (a.space == "football") p["c"] = a.c;
    if (a.space == "interval") p["d"] = a.d;
    if (a.space == "circle") p["L"] = a.L;
    if (a.space == "mesh") p["mesh"] = a.mesh;
    p["vertices"] = s.vertex_count();
    p["n_dim"] = s.n_dim;
    p["K"] = s.K;
    p["diameter"] = s.diameter;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
    double K = 0.0;
    int n = 2;
    double d = 1.0;
    bool model = false;
    std::optional<double> s;
    std::string csv;
};

int cmd_bound(const BoundArgs& a, RunReport& report) {
    auto& p = report.parameters();
    p["K"] = a.K;
    p["n"] = a.n;
    p["d"] = a.d;
    p["model"] = a.model;
    if (a.s) p["s"] = *a.s;

    const BoundReport b = best_lower_bound(a.K, a.n, a.d, a.model, a.s);
    for (const auto& e : b.entries) report.add_bound(e);
    report.add_value("best", b.best.value, "best");
    report.add_text("best_name", b.best.name);
    if (!a.csv.empty()) {
        CsvWriter csv(a.csv, {"name", "value", "applicable"});
        for (const auto& e : b.entries)
            csv.row({e.name, csv_number(e.value), e.applicable ? "true" : "false"});
    }
    return kExitOk;
}

struct ModelArgs {
    double R = 0.0;
    double l = 2.0;
    double lambda = 1.0;
    std::string emit;
};

int cmd_model(const ModelArgs& a, RunReport& report) {
    auto& p = report.parameters();
    p["R"] = a.R;
    p["l"] = a.l;
    p["lambda"] = a.lambda;
    if (!a.emit.empty()) p["emit_solution"] = a.emit;

    const ModelParams params(a.R, a.l);
    if (!(a.lambda > 0.0)) throw DomainError("lambda must be positive");
    const IvpSolution sol = model_extremum(params, a.lambda);
    const ModelDomain dom = model_domain(params);
    report.add_value("K", params.K());
    report.add_value("a", dom.a);
    report.add_value("right_limit", dom.right_limit, "value", std::isfinite(dom.right_limit));
    report.add_value("b", *sol.b);
    report.add_value("m", *sol.m);
    if (!a.emit.empty()) {
        CsvWriter csv(a.emit, {"x", "v", "v_prime"});
        for (std::size_t i = 0; i < sol.grid.size(); ++i)
            csv.row({csv_number(sol.grid[i]), csv_number(sol.v[i]), csv_number(sol.v_prime[i])});
    }
    return kExitOk;
}

struct VerifyArgs {
    SpaceArgs space;
    std::string checks = "all";
    std::string csv;
};

int finish_checks(RunReport& report, const std::string& csv) {
    if (!csv.empty()) write_check_csv(csv, report.checks());
    for (const auto& c : report.checks())
        if (c.applicable && !c.passed) return kExitCheckFailed;
    return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::uint64_t seed, RunReport& report) {
    const DiscreteSpace space = build_space(a.space);
    record_space(report.parameters(), a.space, space);
    report.parameters()["checks"] = a.checks;

    EigenOptions options;
    options.seed = seed;
    const EigenDecomposition dec = lowest_eigenpairs(space, 1, options);
    report.add_value("lambda1", dec.lambdas[1]);
    report.add_value("volume", space.volume());

    const bool all = a.checks == "all";
    if (all || a.checks == "eigen") report.add_check(check_eigenvalue_bound(space, spectral_gap(space, options)));
    if (all || a.checks == "max") report.add_check(check_max_comparison(space, dec));
    if (all || a.checks == "gradient") report.add_check(check_gradient_comparison(space, dec));
    return finish_checks(report, a.csv);
}

struct HeatArgs {
    SpaceArgs space;
    double tmin = 0.01;
    double tmax = 1.0;
    int tsteps = 20;
    std::size_t pairs = 100;
    double pair_tmin = 0.05;
    double pair_tmax = 0.5;
    int modes = 16;
    std::string csv;
};

// Wrapped Gaussian on the circle of length L centred at 0, i.e. the continuum
// heat kernel at time t0.
double wrapped_gaussian(double x, double t0, double L) {
    double s = 0.0;
    for (int k = -20; k <= 20; ++k) {
        const double y = x + L * k;
        s += std::exp(-y * y / (4.0 * t0));
    }
    return s / std::sqrt(4.0 * kPi * t0);
}

int cmd_heat(const HeatArgs& a, std::uint64_t seed, RunReport& report) {
    if (a.space.space == "interval")
        throw DomainError("space has boundary; the Li–Yau estimate requires ∂M = ∅");
    const DiscreteSpace space = build_space(a.space);
    auto& p = report.parameters();
    record_space(p, a.space, space);
    p["tmin"] = a.tmin;
    p["tmax"] = a.tmax;
    p["tsteps"] = a.tsteps;
    p["pairs"] = a.pairs;
    p["pair_tmin"] = a.pair_tmin;
    p["pair_tmax"] = a.pair_tmax;
    if (space.has_boundary) throw DomainError("space has boundary; the Li–Yau estimate requires ∂M = ∅");
    if (space.K < 0.0) throw DomainError("K < 0; the Li–Yau estimate requires Ric ≥ 0");

    EigenOptions options;
    options.seed = seed;
    const auto t_grid = log_grid(a.tmin, a.tmax, a.tsteps);
    const auto pairs = random_pairs(space, a.pairs, a.pair_tmin, a.pair_tmax, seed);

    SpectralHeatKernel kernel;
    Eigen::VectorXd f_li_yau;
    Eigen::VectorXd f_harnack;
    const auto n = static_cast<Eigen::Index>(space.vertex_count());
    if (space.kind == SpaceKind::Cycle) {
        kernel = make_heat_kernel_for(space, a.tmin, options);
        // near-delta at vertex 0 over a small positive floor
        f_li_yau = Eigen::VectorXd::Constant(n, 1e-8);
        f_li_yau[0] += 1.0 / space.mass[0];
        const double L = space.spacing * static_cast<double>(n);
        f_harnack.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            f_harnack[i] = wrapped_gaussian(space.positions[i].x(), 0.05, L) + 1e-6;
        p["initial_data"] = "near-delta (li_yau), wrapped Gaussian t0=0.05 (harnack)";
    } else {
        kernel = make_heat_kernel(space, std::min<int>(a.modes, static_cast<int>(n) - 1), options);
        const Eigen::VectorXd phi1 = kernel.decomposition.phi(1);
        double amp = a.space.space == "sphere" ? 0.5 : 0.3;
        // keep the data positive on arbitrary meshes
        amp = std::min(amp, 0.5 / phi1.cwiseAbs().maxCoeff());
        f_li_yau = Eigen::VectorXd::Ones(n) + amp * phi1;
        f_harnack = f_li_yau;
        p["initial_data"] = "1 + " + csv_number(amp) + " phi_1";
    }
    p["modes"] = kernel.modes();
    p["kernel_t_min"] = kernel.t_min;

    const CheckOutcome ly = check_li_yau(space, kernel, f_li_yau, t_grid);
    const CheckOutcome hk = check_harnack(space, kernel, f_harnack, pairs);
    report.add_value("worst_li_yau_ratio", ly.lhs);
    report.add_value("max_harnack_ratio", hk.lhs);
    report.add_check(ly);
    report.add_check(hk);
    return finish_checks(report, a.csv);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral-gap lower bounds, model ODE solver and discrete comparison checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "Seed for random starting vectors and pair sampling")
        ->capture_default_str();

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "Closed-form and model lower bounds for λ₁");
    bound->add_option("--K", ba.K, "Curvature parameter")->required();
    bound->add_option("--n", ba.n, "Dimension (>= 2)")->required();
    bound->add_option("--d", ba.d, "Diameter")->required();
    bound->add_flag("--model", ba.model, "Include the numerical model value λ₁(K,n,d)");
    bound->add_option("--s", ba.s, "Extra interpolation bound at this s in (0, 1)");
    bound->add_option("--csv", ba.csv, "Also write name,value,applicable rows here");

    ModelArgs ma;
    auto* model = app.add_subcommand("model", "Solve the model IVP and locate b and m");
    model->add_option("--R", ma.R, "Ricci lower bound")->required();
    model->add_option("--l", ma.l, "Dimension parameter (> 1)")->required();
    model->add_option("--lambda", ma.lambda, "Spectral parameter")->required();
    model->add_option("--emit-solution", ma.emit, "Write x,v,v_prime CSV here");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Eigenvalue, maximum and gradient comparison checks");
    add_space_options(verify, va.space, {"interval", "circle", "sphere", "football", "mesh"});
    verify->add_option("--checks", va.checks, "Which checks to run")
        ->check(CLI::IsMember({"all", "eigen", "gradient", "max"}));
    verify->add_option("--csv", va.csv, "Also write check outcomes as CSV here");

    HeatArgs ha;
    auto* heat = app.add_subcommand("heat", "Li–Yau and Harnack checks for the spectral heat flow");
    add_space_options(heat, ha.space, {"interval", "circle", "sphere", "football", "mesh"});
    heat->add_option("--tmin", ha.tmin, "Smallest time of the Li–Yau grid");
    heat->add_option("--tmax", ha.tmax, "Largest time of the Li–Yau grid");
    heat->add_option("--tsteps", ha.tsteps, "Number of log-spaced times");
    heat->add_option("--pairs", ha.pairs, "Number of random Harnack pairs");
    heat->add_option("--pair-tmin", ha.pair_tmin, "Lower end of Harnack pair times");
    heat->add_option("--pair-tmax", ha.pair_tmax, "Upper end of Harnack pair times");
    heat->add_option("--modes", ha.modes, "Eigenpairs kept on surfaces");
    heat->add_option("--csv", ha.csv, "Also write check outcomes as CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        std::string name = bound->parsed() ? "bound" : model->parsed() ? "model" : verify->parsed() ? "verify" : "heat";
        RunReport report(name, seed);
        int code = kExitOk;
        if (bound->parsed()) code = cmd_bound(ba, report);
        else if (model->parsed()) code = cmd_model(ma, report);
        else if (verify->parsed()) code = cmd_verify(va, seed, report);
        else code = cmd_heat(ha, seed, report);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out << report.to_json(wall).dump(2) << '\n';
        return code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

}  // namespace sgap::cli
