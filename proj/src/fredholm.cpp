#include "propagator/fredholm.hpp"

#include <cmath>
#include <stdexcept>

namespace prop {

NystromOperator::NystromOperator(const DiscreteKernel& dk, const TimeGrid& grid,
                                 bool cache_factorizations)
    : n_(dk.size()), L_(dk.lower), U_(dk.upper), cached_(cache_factorizations) {
    if (grid.n_steps != n_) throw std::invalid_argument("NystromOperator: grid/kernel mismatch");

    proj_ = Eigen::MatrixXd::Zero(n_, n_);
    if (cached_) tail_lu_.reserve(n_);

    for (int i = 0; i < n_; ++i) {
        const int k = n_ - i;
        // Trailing block of D^{N,i}; leading block is the identity and the
        // off-diagonal blocks vanish under the index masks.
        Eigen::MatrixXd D = Eigen::MatrixXd::Identity(k, k) + L_.block(i, i, k, k) +
                            U_.block(i, i, k, k);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
        if (!lu.matrixLU().diagonal().array().isFinite().all() ||
            lu.matrixLU().diagonal().array().abs().minCoeff() < 1e-14)
            throw std::runtime_error("NystromOperator: D^{N,i} numerically singular");
        // proj row i solves D^T x = row_i(U) on the tail indices.
        Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(D.transpose());
        proj_.row(i).tail(k) = lu_t.solve(U_.row(i).tail(k).transpose()).transpose();
        if (cached_) tail_lu_.push_back(std::move(lu));
    }

    // B(i, j) = proj_i . col_j(L) - L(i, j), restricted to j < i.
    B_ = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 1; i < n_; ++i) {
        const int k = n_ - i;
        Eigen::RowVectorXd row = proj_.row(i).tail(k) * L_.block(i, 0, k, i);
        B_.row(i).head(i) = row - L_.row(i).head(i);
    }
}

Eigen::VectorXd NystromOperator::solve_tail(int i, const Eigen::VectorXd& tail) const {
    if (cached_) return tail_lu_[i].solve(tail);
    const int k = n_ - i;
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(k, k) + L_.block(i, i, k, k) +
                        U_.block(i, i, k, k);
    return D.partialPivLu().solve(tail);
}

Eigen::VectorXd NystromOperator::solve_control(const Eigen::MatrixXd& R_plus_Lam) const {
    if (R_plus_Lam.rows() != n_ || R_plus_Lam.cols() != n_)
        throw std::invalid_argument("solve_control: shape mismatch");
    Eigen::VectorXd a(n_);
    for (int i = 0; i < n_; ++i) {
        const int k = n_ - i;
        a(i) = R_plus_Lam(i, i) -
               proj_.row(i).tail(k).dot(R_plus_Lam.row(i).tail(k));
    }
    // (I - B) u = a, unit lower triangular: forward substitution.
    Eigen::VectorXd u(n_);
    for (int i = 0; i < n_; ++i) u(i) = a(i) + B_.row(i).head(i).dot(u.head(i));
    return u;
}

Eigen::VectorXd NystromOperator::residual(const Eigen::MatrixXd& R_plus_Lam,
                                          const Eigen::VectorXd& u) const {
    if (u.size() != n_) throw std::invalid_argument("residual: shape mismatch");
    Eigen::VectorXd res(n_);
    for (int i = 0; i < n_; ++i) {
        const int k = n_ - i;
        // Reconstruct the tail of conditional expectations of u implied by the
        // two-step scheme, then evaluate the Fredholm equation at index i.
        Eigen::VectorXd rhs = R_plus_Lam.row(i).tail(k).transpose();
        if (i > 0) rhs -= L_.block(i, 0, k, i) * u.head(i);
        Eigen::VectorXd m = solve_tail(i, rhs);
        res(i) = u(i) + L_.row(i).head(i).dot(u.head(i)) + U_.row(i).tail(k).dot(m) -
                 R_plus_Lam(i, i);
    }
    return res;
}

Eigen::MatrixXd NystromOperator::D0() const {
    return Eigen::MatrixXd::Identity(n_, n_) + L_ + U_;
}

Eigen::VectorXd inventory(const Eigen::VectorXd& u, const TimeGrid& grid, double X0) {
    const int n = static_cast<int>(u.size());
    Eigen::VectorXd X(n + 1);
    X(0) = X0;
    const double dt = grid.step();
    for (int i = 0; i < n; ++i) X(i + 1) = X(i) + dt * u(i);
    return X;
}

Eigen::VectorXd transient_state(const DiscreteKernel& dk, const Eigen::VectorXd& u) {
    return dk.lower * u;
}

double pnl(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha, const Eigen::VectorXd& Z,
           const TimeGrid& grid) {
    return grid.step() * (alpha - 0.5 * u - Z).dot(u);
}

}  // namespace prop
