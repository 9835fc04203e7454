#include "propagator/uzawa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prop {

namespace {

double block_slackness(const Eigen::MatrixXd& gap, const Eigen::MatrixXd& lambda, double dt,
                       SlacknessMode mode) {
    if (mode == SlacknessMode::Sum)
        return dt * (gap.array() * lambda.array()).rowwise().sum().mean();
    return (gap.array() * lambda.array()).rowwise().maxCoeff().mean();
}

double max_positive_violation(const Violations& v) {
    double r = 0.0;
    r = std::max(r, v.rate_low.maxCoeff());
    r = std::max(r, v.rate_high.maxCoeff());
    r = std::max(r, v.inv_low.maxCoeff());
    r = std::max(r, v.inv_high.maxCoeff());
    return r;
}

}  // namespace

double learning_rate(const UzawaConfig& cfg, int n) {
    // delta / n^beta for n >= 1; the printed rate is undefined at n = 0, where
    // the base rate is used.
    return n <= 0 ? cfg.delta : cfg.delta / std::pow(static_cast<double>(n), cfg.beta);
}

MultiplierState step(const MultiplierState& state, const Eigen::MatrixXd& u,
                     const Eigen::MatrixXd& X, const ConstraintEnsemble& ce,
                     const UzawaConfig& cfg) {
    const Violations v = violation(u, X, ce);
    const double dn = learning_rate(cfg, state.iteration);
    MultiplierState next;
    next.l1 = (state.l1 + dn * v.rate_low).cwiseMax(0.0);
    next.l2 = (state.l2 + dn * v.rate_high).cwiseMax(0.0);
    next.l3 = (state.l3 + dn * v.inv_low).cwiseMax(0.0);
    next.l4 = (state.l4 + dn * v.inv_high).cwiseMax(0.0);
    next.iteration = state.iteration + 1;
    return next;
}

std::array<double, 4> slackness(const MultiplierState& state, const Eigen::MatrixXd& u,
                                const Eigen::MatrixXd& X, const ConstraintEnsemble& ce,
                                const TimeGrid& grid, SlacknessMode mode) {
    const Violations v = violation(u, X, ce);
    const double dt = grid.step();
    return {block_slackness(v.rate_low, state.l1, dt, mode),
            block_slackness(v.rate_high, state.l2, dt, mode),
            block_slackness(v.inv_low, state.l3, dt, mode),
            block_slackness(v.inv_high, state.l4, dt, mode)};
}

UzawaResult run(const SignalEnsemble& ensemble, const ConstraintEnsemble& ce,
                const NystromOperator& op, const TimeGrid& grid, const UzawaConfig& cfg) {
    const int m = ensemble.n_paths;
    const int n = grid.n_steps;

    UzawaResult res;
    res.controls.resize(m, n);
    res.inventory.resize(m, n + 1);
    res.transient.resize(m, n);
    Eigen::MatrixXd alpha(m, n);
    for (int p = 0; p < m; ++p)
        for (int i = 0; i < n; ++i) alpha(p, i) = ensemble.alpha(p, i);

    MultiplierState lambda = MultiplierState::zeros(m, n);
    AggregatedMultiplier agg;  // empty until the first dual update
    bool have_agg = false;

    auto solve_all = [&]() {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int p = 0; p < m; ++p) {
            Eigen::MatrixXd RL = ensemble.cond_exp_matrix(p);
            if (have_agg) agg.add_to(p, RL);
            const Eigen::VectorXd u = op.solve_control(RL);
            res.controls.row(p) = u.transpose();
            res.inventory.row(p) = inventory(u, grid, ce.X0).transpose();
            res.transient.row(p) = (op.L() * u).transpose();
        }
    };

    // Iteration 0: multipliers are zero, Lam = 0.
    solve_all();

    for (int it = 0; it < cfg.max_iters; ++it) {
        lambda = step(lambda, res.controls, res.inventory, ce, cfg);

        LsmcDiagnostics ld;
        agg = fit_predict_lambda(lambda.l1, lambda.l2, lambda.l3, lambda.l4, alpha, res.transient,
                                 res.inventory.leftCols(n), grid, cfg.lsmc, ld);
        have_agg = true;

        solve_all();

        IterationRecord rec;
        rec.iter = lambda.iteration;
        rec.slackness =
            slackness(lambda, res.controls, res.inventory, ce, grid, cfg.slackness_mode);
        const Violations v = violation(res.controls, res.inventory, ce);
        rec.max_violation = max_positive_violation(v);
        rec.regression_fallbacks = ld.fallback_count;
        double pnl_sum = 0.0;
        for (int p = 0; p < m; ++p)
            pnl_sum += pnl(res.controls.row(p).transpose(), alpha.row(p).transpose(),
                           res.transient.row(p).transpose(), grid);
        rec.mean_pnl = pnl_sum / m;
        res.diagnostics.push_back(rec);

        if (!res.controls.allFinite() || !std::isfinite(rec.max_violation) ||
            !std::isfinite(rec.mean_pnl))
            throw NumericalAbort("uzawa: non-finite values at iteration " +
                                 std::to_string(rec.iter) + " (divergent learning rate?)");

        const double scale = std::max(1.0, res.controls.cwiseAbs().maxCoeff());
        double max_slack = 0.0;
        for (double s : rec.slackness) max_slack = std::max(max_slack, std::abs(s));
        if (max_slack <= cfg.eps_bar &&
            rec.max_violation <= cfg.feasibility_factor * cfg.eps_bar * scale) {
            res.converged = true;
            break;
        }
    }

    res.multipliers = lambda;

    // Fredholm self-consistency on a subsample of paths at the final iterate.
    const int stride = std::max(1, m / 16);
    for (int p = 0; p < m; p += stride) {
        Eigen::MatrixXd RL = ensemble.cond_exp_matrix(p);
        if (have_agg) agg.add_to(p, RL);
        const Eigen::VectorXd r = op.residual(RL, res.controls.row(p).transpose());
        res.max_fredholm_residual =
            std::max(res.max_fredholm_residual, r.cwiseAbs().maxCoeff());
    }
    return res;
}

}  // namespace prop
