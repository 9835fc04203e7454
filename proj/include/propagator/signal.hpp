#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "propagator/time_grid.hpp"

namespace prop {

// Level-seasonal Ornstein-Uhlenbeck drift signal I and exogenous price S:
//   dI_t = (theta * sin(w t + phi) - kappa * I_t) dt + xi dW_t
//   S_t  = S_0 + int_0^t I_s ds + sigma * B_t
struct SignalParams {
    double theta = 0.0;
    double w = 0.0;
    double phi = 0.0;
    double kappa = 1.0;
    double xi = 0.0;
    double I0 = 0.0;
    double S0 = 0.0;
    double sigma = 0.0;
};

// M simulated paths plus the closed-form conditional-expectation matrix
// R(i, j) = E_{t_i}[alpha_{t_j}] for i <= j.  R is affine in I_{t_i}, so it is
// stored as two deterministic factor matrices and materialized per path.
struct SignalEnsemble {
    int n_paths = 0;
    Eigen::MatrixXd I;  // M x (N+1)
    Eigen::MatrixXd S;  // M x (N+1)
    Eigen::MatrixXd cond_exp_slope;   // N x N, coefficient of I_{t_i}
    Eigen::MatrixXd cond_exp_offset;  // N x N, remaining deterministic term
    std::uint64_t seed = 0;

    Eigen::MatrixXd cond_exp_matrix(int path) const;
    // Realized alpha_{t_i} = R(i, i) for a given path.
    double alpha(int path, int i) const {
        return I(path, i) * cond_exp_slope(i, i) + cond_exp_offset(i, i);
    }
};

SignalEnsemble simulate(const SignalParams& params, const TimeGrid& grid, int n_paths,
                        std::uint64_t seed);

// Standalone closed-form evaluation for one drift path (N+1 values).
Eigen::MatrixXd cond_exp_matrix(const SignalParams& params, const TimeGrid& grid,
                                const Eigen::VectorXd& I_path);

// One-step exact transition of I: conditional mean and standard deviation of
// I_{t + dt} given I_t = x.
std::pair<double, double> ou_transition(const SignalParams& params, double t, double dt, double x);

}  // namespace prop
