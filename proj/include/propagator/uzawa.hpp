#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <vector>

#include "propagator/constraints.hpp"
#include "propagator/fredholm.hpp"
#include "propagator/lsmc.hpp"
#include "propagator/signal.hpp"

namespace prop {

// Thrown when the dual ascent produces non-finite values (divergent rate).
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultiplierState {
    Eigen::MatrixXd l1, l2;  // M x N, at t_0..t_{N-1}
    Eigen::MatrixXd l3, l4;  // M x N, at t_1..t_N
    int iteration = 0;

    static MultiplierState zeros(int m, int n) {
        MultiplierState s;
        s.l1 = Eigen::MatrixXd::Zero(m, n);
        s.l2 = s.l1;
        s.l3 = s.l1;
        s.l4 = s.l1;
        return s;
    }
};

enum class SlacknessMode { Sum, Max };

struct UzawaConfig {
    double delta = 1.0;     // base learning rate
    double beta = 0.0;      // decay exponent; rate at iteration n >= 1 is delta / n^beta
    int max_iters = 100;
    double eps_bar = 1e-3;  // slackness tolerance
    double feasibility_factor = 10.0;  // violation tolerance = factor * eps_bar * control scale
    SlacknessMode slackness_mode = SlacknessMode::Sum;
    LsmcConfig lsmc;
};

struct IterationRecord {
    int iter = 0;
    std::array<double, 4> slackness{};
    double max_violation = 0.0;
    double mean_pnl = 0.0;
    int regression_fallbacks = 0;
};

struct UzawaResult {
    Eigen::MatrixXd controls;   // M x N
    Eigen::MatrixXd inventory;  // M x (N+1)
    Eigen::MatrixXd transient;  // M x N
    MultiplierState multipliers;
    std::vector<IterationRecord> diagnostics;
    bool converged = false;
    double max_fredholm_residual = 0.0;  // over a subsample of paths at the final iterate
};

double learning_rate(const UzawaConfig& cfg, int n);

// One projected dual-ascent update from the violations of (u, X).
MultiplierState step(const MultiplierState& state, const Eigen::MatrixXd& u,
                     const Eigen::MatrixXd& X, const ConstraintEnsemble& ce,
                     const UzawaConfig& cfg);

// Empirical slackness: per block, mean over paths of the dt-scaled time sum
// (or max over times) of gap * multiplier.
std::array<double, 4> slackness(const MultiplierState& state, const Eigen::MatrixXd& u,
                                const Eigen::MatrixXd& X, const ConstraintEnsemble& ce,
                                const TimeGrid& grid, SlacknessMode mode);

UzawaResult run(const SignalEnsemble& ensemble, const ConstraintEnsemble& ce,
                const NystromOperator& op, const TimeGrid& grid, const UzawaConfig& cfg);

}  // namespace prop
