#pragma once

#include <Eigen/Dense>

#include "propagator/kernel.hpp"
#include "propagator/time_grid.hpp"

namespace prop {

// Closed-form control when K = 0 and only rate constraints can bind:
// u = clamp(alpha, a1, a2) elementwise.
Eigen::MatrixXd clip_oracle(const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& a1,
                            const Eigen::MatrixXd& a2);

// Deterministic quadratic program over trading rates:
//   minimize dt * sum_i [ (S_i - S_N) u_i + gamma_i u_i^2 / 2
//                         + u_i * sum_{j<i} W(i,j) u_j ]
//   subject to u_min <= u <= u_max,  X_min <= X <= X_max,
//   X_i = X0 + dt * sum_{j<i} u_j, and optionally X_N = 0.
struct QPInstance {
    Eigen::VectorXd forecast;  // length N+1: S_0..S_N
    Eigen::VectorXd gamma;     // length N, all > 0
    Eigen::MatrixXd weights;   // N x N, strictly lower triangular, >= 0
    Eigen::VectorXd u_min, u_max;  // length N
    Eigen::VectorXd X_min, X_max;  // length N, bounds on X_1..X_N
    double X0 = 0.0;
    bool terminal_equality = false;
    double dt = 1.0;
};

struct QPSolution {
    Eigen::VectorXd u;
    Eigen::VectorXd X;  // length N+1
    double objective = 0.0;     // minimized value
    double kkt_residual = 0.0;  // max of stationarity / feasibility / complementarity
    int iterations = 0;
};

struct QPInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QPSolution solve_qp(const QPInstance& inst, double tol = 1e-10, int max_iters = 200000);

// Exhaustive active-set enumeration; exact reference for small N (N <= 6).
QPSolution enumerate_qp(const QPInstance& inst);

double qp_objective(const QPInstance& inst, const Eigen::VectorXd& u);

// Dense solve of the deterministic first-order condition (I + L + U) u = rhs.
Eigen::VectorXd dense_deterministic_solve(const DiscreteKernel& dk, const Eigen::VectorXd& rhs);

}  // namespace prop
