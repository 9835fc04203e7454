#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "propagator/config.hpp"
#include "propagator/csv.hpp"
#include "propagator/oracles.hpp"
#include "propagator/uzawa.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;

std::string git_describe() {
    FILE* pipe = popen("git describe --always --dirty 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[128] = {0};
    std::string out;
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out.empty() ? "unknown" : out;
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int run_scenario(const prop::ScenarioConfig& cfg) {
    const prop::TimeGrid grid = cfg.grid();
    const prop::DiscreteKernel dk = prop::build_discrete_kernel(cfg.kernel, grid);
    const prop::NystromOperator op(dk, grid, grid.n_steps <= 256);
    const prop::SignalEnsemble ens = prop::simulate(cfg.signal, grid, cfg.paths, cfg.seed);
    const prop::ConstraintEnsemble ce = prop::build_constraints(cfg.scenario, ens, grid);

    const prop::UzawaResult res = prop::run(ens, ce, op, grid, cfg.uzawa);

    std::filesystem::create_directories(cfg.out_dir);
    const auto out = [&](const std::string& f) { return cfg.out_dir + "/" + f; };

    {
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(cfg.paths) * (grid.n_steps + 1));
        for (int p = 0; p < cfg.paths; ++p)
            for (int i = 0; i <= grid.n_steps; ++i) {
                const bool has_u = i < grid.n_steps;
                rows.push_back({static_cast<double>(p), grid.node(i),
                                has_u ? res.controls(p, i) : 0.0, res.inventory(p, i),
                                has_u ? res.transient(p, i) : 0.0,
                                has_u ? ens.alpha(p, i) : 0.0, ens.S(p, i)});
            }
        prop::write_csv(out("controls.csv"), {"path", "time", "u", "X", "Z", "alpha", "S"}, rows);
    }
    {
        std::vector<std::vector<double>> rows;
        for (int p = 0; p < cfg.paths; ++p)
            for (int i = 0; i < grid.n_steps; ++i)
                rows.push_back({static_cast<double>(p), grid.node(i), res.multipliers.l1(p, i),
                                res.multipliers.l2(p, i), res.multipliers.l3(p, i),
                                res.multipliers.l4(p, i)});
        prop::write_csv(out("multipliers.csv"), {"path", "time", "l1", "l2", "l3", "l4"}, rows);
    }
    {
        std::vector<std::vector<double>> rows;
        for (const auto& r : res.diagnostics)
            rows.push_back({static_cast<double>(r.iter), r.slackness[0], r.slackness[1],
                            r.slackness[2], r.slackness[3], r.max_violation, r.mean_pnl,
                            static_cast<double>(r.regression_fallbacks)});
        prop::write_csv(out("diagnostics.csv"),
                        {"iter", "S1", "S2", "S3", "S4", "max_violation", "mean_pnl",
                         "regression_fallbacks"},
                        rows);
    }

    json summary;
    summary["config"] = json::parse(prop::serialize_config(cfg));
    summary["git_describe"] = git_describe();
    summary["seed"] = cfg.seed;
    summary["converged"] = res.converged;
    summary["iterations"] = res.multipliers.iteration;
    if (!res.diagnostics.empty()) {
        const auto& last = res.diagnostics.back();
        summary["slackness"] = {last.slackness[0], last.slackness[1], last.slackness[2],
                                last.slackness[3]};
        summary["max_violation"] = last.max_violation;
        summary["mean_pnl"] = last.mean_pnl;
    }
    summary["max_fredholm_residual"] = res.max_fredholm_residual;
    summary["x0_valuation"] = cfg.scenario.X0 * ens.S.col(grid.n_steps).mean();
    std::ofstream(out("summary.json")) << summary.dump(2) << "\n";

    std::cout << "run: " << (res.converged ? "converged" : "iteration budget exhausted") << " after "
              << res.multipliers.iteration << " iterations; outputs in " << cfg.out_dir << "\n";
    return 0;
}

int run_qp(const std::string& input, const std::string& out_dir, double X0, double T,
           bool terminal_equality) {
    const prop::CsvTable table = prop::read_csv(input);
    const int n = static_cast<int>(table.rows.size()) - 1;
    if (n < 1) throw std::runtime_error("qp: input must have N+1 rows (one per grid node)");
    prop::QPInstance inst;
    inst.forecast = table.col("S");
    const auto head = [&](const std::string& name, double dflt) {
        Eigen::VectorXd v;
        if (table.column(name) >= 0)
            v = table.col(name).head(n);
        else
            v = Eigen::VectorXd::Constant(n, dflt);
        return v;
    };
    inst.gamma = head("gamma", 1.0);
    inst.u_min = head("u_min", -1e12);
    inst.u_max = head("u_max", 1e12);
    inst.X_min = head("X_min", -1e12);
    inst.X_max = head("X_max", 1e12);
    inst.weights = Eigen::MatrixXd::Zero(n, n);
    inst.X0 = X0;
    inst.dt = T / n;
    inst.terminal_equality = terminal_equality;

    const prop::QPSolution sol = prop::solve_qp(inst);
    std::filesystem::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= n; ++i)
        rows.push_back({i * inst.dt, i < n ? sol.u(i) : 0.0, sol.X(i)});
    prop::write_csv(out_dir + "/solution.csv", {"time", "u", "X"}, rows);
    std::cout << "qp: objective " << prop::format_double(sol.objective) << ", KKT residual "
              << prop::format_double(sol.kkt_residual) << "\n";
    return 0;
}

bool report(const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    return ok;
}

int run_validate() {
    bool all = true;
    std::mt19937_64 rng(20240815);
    std::normal_distribution<double> gauss;

    {
        // Cross-solver agreement in the deterministic regime.
        const prop::TimeGrid grid(1.0, 20);
        const prop::DiscreteKernel dk =
            prop::build_discrete_kernel(prop::KernelSpec::exponential(5.0, 1.0), grid);
        const prop::NystromOperator op(dk, grid);
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::VectorXd rhs(20);
            for (int i = 0; i < 20; ++i) rhs(i) = gauss(rng);
            Eigen::MatrixXd RL = Eigen::MatrixXd::Zero(20, 20);
            for (int i = 0; i < 20; ++i) RL.row(i).tail(20 - i) =
                rhs.tail(20 - i).transpose();
            const Eigen::VectorXd a = op.solve_control(RL);
            const Eigen::VectorXd b = prop::dense_deterministic_solve(dk, rhs);
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff());
        }
        all &= report("nystrom vs dense deterministic solve (rel <= 1e-10)", worst <= 1e-10);
    }
    {
        // Refinement consistency of the closed-form interval integrals.
        const prop::TimeGrid g1(1.0, 25), g2(1.0, 50);
        const auto spec = prop::KernelSpec::power_law(2.0, 0.6);
        const auto dk1 = prop::build_discrete_kernel(spec, g1);
        const auto dk2 = prop::build_discrete_kernel(spec, g2);
        double worst = 0.0;
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < i; ++j)
                worst = std::max(worst, std::abs(dk2.lower(2 * i, 2 * j) +
                                                 dk2.lower(2 * i, 2 * j + 1) - dk1.lower(i, j)));
        all &= report("kernel integral refinement consistency (<= 1e-12)", worst <= 1e-12);
    }
    {
        // QP solver against exhaustive enumeration on a small random instance.
        const int n = 6;
        prop::QPInstance inst;
        inst.forecast.resize(n + 1);
        for (int i = 0; i <= n; ++i) inst.forecast(i) = 100.0 + gauss(rng);
        inst.gamma = Eigen::VectorXd::Constant(n, 1.0);
        inst.weights = Eigen::MatrixXd::Zero(n, n);
        inst.u_min = Eigen::VectorXd::Constant(n, -1.0);
        inst.u_max = Eigen::VectorXd::Constant(n, 1.0);
        inst.X_min = Eigen::VectorXd::Constant(n, -0.5);
        inst.X_max = Eigen::VectorXd::Constant(n, 0.5);
        inst.dt = 1.0 / n;
        const auto a = prop::solve_qp(inst);
        const auto b = prop::enumerate_qp(inst);
        const double rel = std::abs(a.objective - b.objective) / (1.0 + std::abs(b.objective));
        all &= report("qp solver vs active-set enumeration (rel <= 1e-6)", rel <= 1e-6);
        all &= report("qp solver KKT residual (<= 1e-8)", a.kkt_residual <= 1e-8);
    }
    {
        // Clip oracle on a small rate-constrained run without impact.
        prop::ScenarioConfig cfg;
        cfg.T = 1.0;
        cfg.N = 20;
        cfg.kernel = prop::KernelSpec::zero();
        cfg.signal.theta = -20.0;
        cfg.signal.phi = std::acos(-1.0) / 2.0;
        cfg.signal.kappa = 1.0;
        cfg.signal.xi = 4.0;
        cfg.signal.I0 = -2.0;
        cfg.paths = 200;
        const prop::TimeGrid grid = cfg.grid();
        prop::DiscreteKernel zero_dk;
        zero_dk.lower = Eigen::MatrixXd::Zero(cfg.N, cfg.N);
        zero_dk.upper = zero_dk.lower;
        const prop::NystromOperator op(zero_dk, grid);
        const auto ens = prop::simulate(cfg.signal, grid, cfg.paths, 7);
        prop::ScenarioSpec spec;
        spec.kind = prop::ScenarioKind::Custom;
        spec.a1 = Eigen::MatrixXd::Constant(cfg.paths, cfg.N, -1.0);
        spec.a2 = Eigen::MatrixXd::Constant(cfg.paths, cfg.N, 1.0);
        spec.a3 = Eigen::MatrixXd::Constant(cfg.paths, cfg.N, -1e16);
        spec.a4 = Eigen::MatrixXd::Constant(cfg.paths, cfg.N, 1e16);
        const auto ce = prop::build_constraints(spec, ens, grid);
        prop::UzawaConfig ucfg;
        // Keep the rate below 1: without impact the projected update is
        // undamped and rates above 1 amplify the first iterations.
        ucfg.delta = 0.8;
        ucfg.beta = 0.1;
        ucfg.max_iters = 120;
        ucfg.eps_bar = 1e-9;  // run the full budget
        const auto res = prop::run(ens, ce, op, grid, ucfg);
        Eigen::MatrixXd alpha(cfg.paths, cfg.N);
        for (int p = 0; p < cfg.paths; ++p)
            for (int i = 0; i < cfg.N; ++i) alpha(p, i) = ens.alpha(p, i);
        const Eigen::MatrixXd ref = prop::clip_oracle(alpha, spec.a1, spec.a2);
        const double rms = std::sqrt((res.controls - ref).array().square().mean());
        all &= report("uzawa vs clip oracle, K = 0 (RMS <= 1e-3)", rms <= 1e-3);
    }

    return all ? 0 : 3;
}

int run_dump(const prop::ScenarioConfig& cfg) {
    const prop::TimeGrid grid = cfg.grid();
    const auto dk = prop::build_discrete_kernel(cfg.kernel, grid);
    const prop::NystromOperator op(dk, grid);
    std::filesystem::create_directories(cfg.out_dir);
    prop::write_matrix_csv(cfg.out_dir + "/B.csv", op.B());
    prop::write_matrix_csv(cfg.out_dir + "/D0.csv", op.D0());
    std::cout << "dump-operator: wrote B.csv and D0.csv to " << cfg.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained optimal trading in a propagator model: stochastic Uzawa solver"};
    app.require_subcommand(1);

    std::string config_path, scenario_name, out_dir, slackness_mode;
    int paths = 0, steps = 0, iters = 0, threads = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Path to a JSON scenario config");
        cmd->add_option("--scenario", scenario_name, "Bundled scenario name");
        cmd->add_option("--paths", paths, "Override run.paths");
        cmd->add_option("--steps", steps, "Override grid.N");
        cmd->add_option("--iters", iters, "Override uzawa.max_iters");
        cmd->add_option("--seed", seed, "Override run.seed")->each([&](const std::string&) {
            have_seed = true;
        });
        cmd->add_option("--out-dir", out_dir, "Override run.out_dir");
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
        cmd->add_option("--slackness-mode", slackness_mode, "sum | max");
    };

    auto* cmd_run = app.add_subcommand("run", "Run a stochastic Uzawa scenario");
    add_common(cmd_run);
    auto* cmd_dump = app.add_subcommand("dump-operator", "Write B and D0 matrices to CSV");
    add_common(cmd_dump);

    auto* cmd_qp = app.add_subcommand("qp", "Solve a deterministic QP instance from CSV");
    std::string qp_input, qp_out = "out-qp";
    double qp_x0 = 0.0, qp_T = 1.0;
    bool qp_terminal = false;
    cmd_qp->add_option("--input", qp_input, "CSV with N+1 rows: S plus optional gamma/bounds")
        ->required();
    cmd_qp->add_option("--out-dir", qp_out, "Output directory");
    cmd_qp->add_option("--x0", qp_x0, "Initial inventory");
    cmd_qp->add_option("--horizon", qp_T, "Time horizon T");
    cmd_qp->add_flag("--terminal-equality", qp_terminal, "Require X_T = 0");

    auto* cmd_validate = app.add_subcommand("validate", "Run the oracle cross-check suite");
    cmd_validate->add_option("--threads", threads, "Worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);
    apply_threads(threads);

    try {
        if (cmd_validate->parsed()) return run_validate();
        if (cmd_qp->parsed()) return run_qp(qp_input, qp_out, qp_x0, qp_T, qp_terminal);

        prop::ScenarioConfig cfg;
        if (!config_path.empty())
            cfg = prop::load_config(config_path);
        else if (!scenario_name.empty())
            cfg = prop::bundled_scenario(scenario_name);
        else
            throw prop::ConfigError("provide --config or --scenario");
        if (paths > 0) cfg.paths = paths;
        if (steps > 0) cfg.N = steps;
        if (iters > 0) cfg.uzawa.max_iters = iters;
        if (have_seed) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        else if (const char* env = std::getenv("UZAWA_OUT_DIR")) cfg.out_dir = env;
        if (!slackness_mode.empty()) {
            if (slackness_mode == "sum") cfg.uzawa.slackness_mode = prop::SlacknessMode::Sum;
            else if (slackness_mode == "max") cfg.uzawa.slackness_mode = prop::SlacknessMode::Max;
            else throw prop::ConfigError("--slackness-mode must be 'sum' or 'max'");
        }
        if (cfg.paths < 100) throw prop::ConfigError("run.paths must be >= 100");
        if (cfg.N < 2) throw prop::ConfigError("grid.N must be >= 2");

        if (cmd_dump->parsed()) return run_dump(cfg);
        return run_scenario(cfg);
    } catch (const prop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const prop::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
