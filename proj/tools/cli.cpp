#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spillover/spillover.hpp"

namespace spillover::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kAgreementTolerance = 5e-3;

struct RunConfig {
    std::string config_path;
    std::size_t grid_n = 2000;
    std::optional<double> horizon;
    SolveMethod method = SolveMethod::matrix;
    std::optional<double> tol;
    std::string out_path;
    std::string format = "csv";
    // sweep
    std::string param;
    double from = 0.0;
    double to = 1.0;
    std::size_t steps = 33;
    std::string crossover;  ///< empty: the sweep's interpolated payoff crossover
    // multi
    std::vector<int> duo;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CheckFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path.string() + "'");
    file << text;
    if (!file) throw UsageError("failed writing '" + path.string() + "'");
}

/// Writes to --out when given, otherwise to stdout.
void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
    if (rc.out_path.empty()) {
        out << text;
    } else {
        write_file(rc.out_path, text);
    }
}

fs::path summary_path(const fs::path& out) {
    fs::path p = out;
    p.replace_extension();
    return p.string() + ".summary.json";
}

ContestSpec load_spec(const RunConfig& rc) {
    ContestSpec spec = make_contest(load_contest_config(rc.config_path));
    if (rc.horizon) spec = spec.with_horizon(*rc.horizon);
    return spec;
}

Grid make_grid(const RunConfig& rc, const ContestSpec& spec) {
    try {
        return Grid(rc.grid_n, choose_horizon(spec));
    } catch (const HorizonError&) {
        // an assumption violation is the more useful diagnosis when there is one
        const ValidationReport report = validate_assumptions(spec, Grid(rc.grid_n, 1.0));
        if (!report.ok()) throw AssumptionError("assumption check failed:\n" + report.summary());
        throw;
    }
}

void require_valid(const ContestSpec& spec, const Grid& grid) {
    const ValidationReport report = validate_assumptions(spec, grid);
    if (!report.ok()) throw AssumptionError("assumption check failed:\n" + report.summary());
}

PicardOptions picard_options(const RunConfig& rc) {
    PicardOptions opts;
    if (rc.tol) opts.tol = *rc.tol;
    return opts;
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& rc, std::ostream& out) {
    const ContestSpec spec = load_spec(rc);
    const Grid grid = make_grid(rc, spec);
    require_valid(spec, grid);
    const Equilibrium eq = assemble(spec, grid, rc.method, picard_options(rc));
    const std::string summary = equilibrium_summary_json(eq);
    if (rc.format == "json") {
        emit(rc, out, summary);
        return kOk;
    }
    std::ostringstream csv;
    write_equilibrium_csv(eq, csv);
    emit(rc, out, csv.str());
    if (!rc.out_path.empty()) write_file(summary_path(rc.out_path), summary);
    return kOk;
}

/// sup |G̃_a - G̃_b| over nodes in [0, upto] solved by both.
double raw_cdf_distance(const DensitySolution& a, const DensitySolution& b, double upto) {
    const std::size_t last =
        std::min({a.grid.floor_index(upto), a.solved_cells(), b.solved_cells()});
    double worst = 0.0;
    for (std::size_t k = 0; k <= last; ++k) worst = std::max(worst, std::abs(a.cumulative[k] - b.cumulative[k]));
    return worst;
}

double oracle_distance(const DensitySolution& sol, const ScalarFunc1& G, double upto) {
    const std::size_t last = std::min(sol.grid.floor_index(upto), sol.solved_cells());
    double worst = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
        worst = std::max(worst, std::abs(sol.cumulative[k] - G(sol.grid.node(k))));
    }
    return worst;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const ContestSpec spec = load_spec(rc);
    const Grid grid = make_grid(rc, spec);
    require_valid(spec, grid);
    const Equilibrium eq = assemble(spec, grid, rc.method, picard_options(rc));
    const VerificationReport report = verify(eq, rc.tol);
    bool passed = report.passed;

    json doc;
    doc["family"] = spec.config().family;
    doc["grid"] = {{"cells", grid.cells()}, {"horizon", grid.horizon()}};
    doc["s_bar"] = eq.s_bar;
    doc["atoms"] = {eq.atom(Player::one), eq.atom(Player::two)};
    doc["payoffs"] = {eq.payoffs[0], eq.payoffs[1]};
    doc["tolerance"] = report.tolerance;
    doc["max_residual"] = {report.max_residual[0], report.max_residual[1]};
    doc["max_deviation_gain"] = {report.max_deviation_gain[0], report.max_deviation_gain[1]};
    doc["best_deviation"] = {report.best_deviation[0], report.best_deviation[1]};
    doc["atom_term"] = {report.atom_term[0], report.atom_term[1]};
    doc["vie_residual"] = {vie_residual(spec, eq.raw[0]), vie_residual(spec, eq.raw[1])};

    // method agreement on the raw cumulatives over the common support
    json agreement = json::object();
    std::array<std::optional<DensitySolution>, 2> by_method[3];
    for (SolveMethod m : {SolveMethod::matrix, SolveMethod::picard, SolveMethod::cdf}) {
        for (Player p : kPlayers) {
            by_method[static_cast<int>(m)][index(p)] =
                m == rc.method ? eq.raw[index(p)] : solve_density(spec, p, grid, m, picard_options(rc));
        }
    }
    const std::pair<SolveMethod, SolveMethod> pairs[] = {{SolveMethod::matrix, SolveMethod::picard},
                                                         {SolveMethod::matrix, SolveMethod::cdf},
                                                         {SolveMethod::picard, SolveMethod::cdf}};
    for (const auto& [a, b] : pairs) {
        double worst = 0.0;
        for (Player p : kPlayers) {
            worst = std::max(worst, raw_cdf_distance(*by_method[static_cast<int>(a)][index(p)],
                                                     *by_method[static_cast<int>(b)][index(p)], eq.s_bar));
        }
        agreement[std::string(method_name(a)) + "_" + std::string(method_name(b))] = worst;
        passed = passed && worst <= kAgreementTolerance;
    }
    doc["method_agreement"] = agreement;
    doc["method_agreement_tolerance"] = kAgreementTolerance;

    // closed-form oracles where they apply
    json oracle = json::object();
    const ContestConfig& cfg = spec.config();
    const bool unscaled = cfg.value_scale[0] == 1.0 && cfg.value_scale[1] == 1.0;
    if (unscaled && has_application_solution(cfg.family)) {
        const ClosedFormSolution cf = application_solution(cfg.family, cfg.params);
        double worst = 0.0;
        for (Player p : kPlayers) {
            if (cf.raw_cdf[index(p)]) worst = std::max(worst, oracle_distance(eq.raw[index(p)], *cf.raw_cdf[index(p)], eq.s_bar));
        }
        oracle["application"] = worst;
        passed = passed && worst <= kAgreementTolerance;
    }
    try {
        double worst = 0.0;
        for (Player p : kPlayers) {
            const ClosedFormSolution cf = addsep_cdf(spec, p, grid);
            worst = std::max(worst, oracle_distance(eq.raw[index(p)], *cf.raw_cdf[index(p)], eq.s_bar));
        }
        oracle["additive_separable"] = worst;
        passed = passed && worst <= kAgreementTolerance;
    } catch (const SpecError&) {
        // not separable: no oracle
    }
    doc["oracle_agreement"] = oracle;
    doc["passed"] = passed;
    emit(rc, out, doc.dump(2) + "\n");
    if (!passed) {
        err << "verification failed: residual " << std::max(report.max_residual[0], report.max_residual[1])
            << ", deviation gain " << std::max(report.max_deviation_gain[0], report.max_deviation_gain[1])
            << ", tolerance " << report.tolerance << '\n';
        return kFailed;
    }
    return kOk;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out) {
    if (rc.param.empty()) throw UsageError("sweep needs --param");
    if (rc.steps < 2) throw UsageError("--steps must be at least 2");
    ContestConfig cfg = load_contest_config(rc.config_path);
    if (rc.horizon) cfg.horizon = rc.horizon;
    SweepOptions opts;
    opts.grid_cells = rc.grid_n;
    opts.method = rc.method;
    SweepResult result = sweep(cfg, rc.param, rc.from, rc.to, rc.steps, opts);
    if (!rc.crossover.empty()) {
        // refine by bisection on the requested metric
        const CrossoverMetric metric =
            rc.crossover == "win_prob" ? CrossoverMetric::win_probability_half : CrossoverMetric::payoff_difference;
        try {
            result.crossover = find_crossover(cfg, rc.param, rc.from, rc.to, metric, opts);
        } catch (const SolverError&) {
            result.crossover.reset();
        }
    }
    if (rc.format == "json") {
        emit(rc, out, sweep_summary_json(result));
        return kOk;
    }
    std::ostringstream csv;
    write_sweep_csv(result, csv);
    emit(rc, out, csv.str());
    if (!rc.out_path.empty()) write_file(summary_path(rc.out_path), sweep_summary_json(result));
    return kOk;
}

int cmd_multi(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    MultiContestConfig cfg = load_multi_config(rc.config_path);
    if (rc.horizon) cfg.horizon = rc.horizon;
    if (!rc.duo.empty()) {
        if (rc.duo.size() != 2) throw UsageError("--duo takes two player numbers");
        const int n = static_cast<int>(cfg.value_exprs.size());
        for (int d : rc.duo) {
            if (d < 1 || d > n) throw UsageError("--duo players must lie in 1.." + std::to_string(n));
        }
        if (rc.duo[0] == rc.duo[1]) throw UsageError("--duo players must differ");
        cfg.duo = std::pair<std::size_t, std::size_t>(rc.duo[0] - 1, rc.duo[1] - 1);
    }
    if (!cfg.duo) throw UsageError("multi needs a duo (config key \"duo\" or --duo i,j)");
    const MultiContestSpec multi = make_multi_contest(cfg);
    const ParticipationReport report =
        participation_check(multi, cfg.duo->first, cfg.duo->second, rc.grid_n, rc.tol.value_or(5e-3));
    emit(rc, out, participation_json(report));
    if (!report.certified) {
        err << "participation check failed: an outsider gains by entering\n";
        return kFailed;
    }
    return kOk;
}

int cmd_balance(const RunConfig& rc, std::ostream& out) {
    const ContestSpec spec = load_spec(rc);
    const Grid grid = make_grid(rc, spec);
    require_valid(spec, grid);
    const BalanceResult result = balance_prize(spec, grid);
    json doc;
    doc["gamma"] = result.gamma;
    doc["scaled_player"] = result.scaled_player ? json(number(*result.scaled_player)) : json(nullptr);
    doc["balanced_config"] = json::parse(to_json(result.balanced.config()));
    emit(rc, out, doc.dump(2) + "\n");
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibria of two-player all-pay contests with spillovers", "spillover-eq"};
    app.require_subcommand(1);
    RunConfig rc;

    const std::map<std::string, SolveMethod> methods{
        {"matrix", SolveMethod::matrix}, {"picard", SolveMethod::picard}, {"cdf", SolveMethod::cdf}};

    auto common = [&](CLI::App* sub, bool solver_flags) {
        sub->add_option("--config", rc.config_path, "Contest configuration (JSON)")->required();
        sub->add_option("--grid-n", rc.grid_n, "Grid cells N")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
        sub->add_option("--horizon", rc.horizon, "Grid horizon T (overrides the config)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol", rc.tol, "Tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", rc.out_path, "Output file (default: stdout)");
        if (solver_flags) {
            sub->add_option("--method", rc.method, "Density solver")
                ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve and write the equilibrium (CSV + JSON summary)");
    common(solve, true);
    solve->add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* verify_cmd = app.add_subcommand("verify", "Check equilibrium conditions, method and oracle agreement");
    common(verify_cmd, true);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve over a range of one parameter");
    common(sweep_cmd, true);
    sweep_cmd->add_option("--param", rc.param, "Parameter to vary")->required();
    sweep_cmd->add_option("--from", rc.from, "First value")->required();
    sweep_cmd->add_option("--to", rc.to, "Last value")->required();
    sweep_cmd->add_option("--steps", rc.steps, "Number of values (>= 2)");
    sweep_cmd->add_option("--crossover", rc.crossover, "Crossover metric")
        ->check(CLI::IsMember({"payoff", "win_prob"}));
    sweep_cmd->add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* multi = app.add_subcommand("multi", "Check that only a designated duo participates");
    common(multi, false);
    multi->add_option("--duo", rc.duo, "Participating players i,j (1-based)")->delimiter(',')->expected(2);

    CLI::App* balance = app.add_subcommand("balance", "Scale a prize so that no player keeps an atom");
    common(balance, false);

    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();  // program name
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(rc, out);
        if (verify_cmd->parsed()) return cmd_verify(rc, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(rc, out);
        if (multi->parsed()) return cmd_multi(rc, out, err);
        if (balance->parsed()) return cmd_balance(rc, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SpecError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const AssumptionError& e) {
        err << e.what();
        return kFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}

}  // namespace spillover::cli
