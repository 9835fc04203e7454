#pragma once

#include <Eigen/Dense>

#include "propagator/signal.hpp"
#include "propagator/time_grid.hpp"

namespace prop {

// Per-path constraining processes.  Rate bounds a1 <= u <= a2 are indexed at
// t_0..t_{N-1}; inventory bounds a3 <= X <= a4 at t_1..t_N (column k holds the
// bound at t_{k+1}).
struct ConstraintEnsemble {
    Eigen::MatrixXd a1, a2;  // M x N
    Eigen::MatrixXd a3, a4;  // M x N
    double X0 = 0.0;
    double big_M = 1e16;
};

enum class ScenarioKind { Sanity, NoBuy, NoShort, StopTrading, Battery, Custom };

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Sanity;
    double X0 = 0.0;
    double big_M = 1e16;
    double big_M_prime = 7.5e15;
    double S_ref = 0.0;   // StopTrading: stop once S drops below this level
    double u_max = 0.0;   // Battery
    double X_max = 0.0;   // Battery
    // Custom: explicit arrays (M x N each)
    Eigen::MatrixXd a1, a2, a3, a4;
};

ConstraintEnsemble build_constraints(const ScenarioSpec& spec, const SignalEnsemble& ensemble,
                                     const TimeGrid& grid);

// Signed constraint gaps; positive entries are violations.
struct Violations {
    Eigen::MatrixXd rate_low;   // a1 - u
    Eigen::MatrixXd rate_high;  // u - a2
    Eigen::MatrixXd inv_low;    // a3 - X_{1..N}
    Eigen::MatrixXd inv_high;   // X_{1..N} - a4
};

Violations violation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& X,
                     const ConstraintEnsemble& ce);

// First grid index k with S(path, k) < S_ref, or N if the level is never hit.
int stop_index(const Eigen::MatrixXd& S, int path, double S_ref);

}  // namespace prop
