#pragma once

#include <Eigen/Dense>
#include <vector>

#include "propagator/kernel.hpp"
#include "propagator/time_grid.hpp"

namespace prop {

// Nystrom discretization of the first-order condition.  Assembly is
// signal-independent and reused across paths and dual-ascent iterations.
//
//   D^{N,i} = I + L^{N,i} + U^{N,i}   (masked at index i)
//   B(i, j) = row_i(U) D^{N,i}^{-1} col_j(L) - L(i, j)   for j < i
//   a_i     = (R+Lam)(i, i) - row_i(U) D^{N,i}^{-1} v_i,
//             v_i(k) = (R+Lam)(i, k) for k >= i, else 0
//   u       = (I - B)^{-1} a   by forward substitution
class NystromOperator {
  public:
    NystromOperator(const DiscreteKernel& dk, const TimeGrid& grid,
                    bool cache_factorizations = true);

    const Eigen::MatrixXd& B() const { return B_; }
    const Eigen::MatrixXd& L() const { return L_; }
    const Eigen::MatrixXd& U() const { return U_; }
    int size() const { return n_; }

    // R_plus_Lam: upper triangular (incl. diagonal); row i holds the time-t_i
    // conditional expectations at columns j >= i.
    Eigen::VectorXd solve_control(const Eigen::MatrixXd& R_plus_Lam) const;

    // Residual of the discrete Fredholm equation at a candidate control,
    // reconstructing the conditional-expectation vector through D^{N,i}.
    Eigen::VectorXd residual(const Eigen::MatrixXd& R_plus_Lam, const Eigen::VectorXd& u) const;

    // Dense deterministic operator I + L + U (the i = 0 instance of D^{N,i}).
    Eigen::MatrixXd D0() const;

  private:
    // Solve D^{N,i} restricted to the trailing block, for a tail vector.
    Eigen::VectorXd solve_tail(int i, const Eigen::VectorXd& tail) const;

    int n_;
    Eigen::MatrixXd L_, U_, B_;
    // proj_(i, k) = (D^{N,i}^{-T} row_i(U))_k for k >= i, zero otherwise.
    Eigen::MatrixXd proj_;
    bool cached_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> tail_lu_;  // trailing blocks of D^{N,i}
};

// Discrete inventory X_{t_i} = X0 + dt * sum_{j<i} u_j.
Eigen::VectorXd inventory(const Eigen::VectorXd& u, const TimeGrid& grid, double X0);

// Transient impact state Z_i = <row_i(L), u>.
Eigen::VectorXd transient_state(const DiscreteKernel& dk, const Eigen::VectorXd& u);

// Realized objective for one path: sum_i (alpha_i - u_i / 2 - Z_i) u_i dt.
// The constant X0 * E[S_T] valuation term is reported separately by callers.
double pnl(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha, const Eigen::VectorXd& Z,
           const TimeGrid& grid);

}  // namespace prop
