#include "propagator/constraints.hpp"

#include <stdexcept>

namespace prop {

int stop_index(const Eigen::MatrixXd& S, int path, double S_ref) {
    const int n = static_cast<int>(S.cols()) - 1;
    for (int k = 0; k <= n; ++k)
        if (S(path, k) < S_ref) return k;
    return n;
}

ConstraintEnsemble build_constraints(const ScenarioSpec& spec, const SignalEnsemble& ensemble,
                                     const TimeGrid& grid) {
    const int m = ensemble.n_paths;
    const int n = grid.n_steps;
    const double M = spec.big_M;

    ConstraintEnsemble ce;
    ce.X0 = spec.X0;
    ce.big_M = M;
    ce.a1 = Eigen::MatrixXd::Constant(m, n, -M);
    ce.a2 = Eigen::MatrixXd::Constant(m, n, M);
    ce.a3 = Eigen::MatrixXd::Constant(m, n, -M);
    ce.a4 = Eigen::MatrixXd::Constant(m, n, M);

    switch (spec.kind) {
        case ScenarioKind::Sanity:
            // Full liquidation only: terminal inventory pinned to zero.
            ce.a3.col(n - 1).setZero();
            ce.a4.col(n - 1).setZero();
            break;
        case ScenarioKind::NoBuy:
            ce.a2.setZero();
            ce.a3.col(n - 1).setZero();
            ce.a4.col(n - 1).setZero();
            break;
        case ScenarioKind::NoShort:
            ce.a3.setZero();  // X >= 0 on [0, T); terminal column stays 0 via liquidation
            ce.a4.col(n - 1).setZero();
            break;
        case ScenarioKind::StopTrading: {
            if (!(spec.S_ref < ensemble.S(0, 0)))
                throw std::invalid_argument("StopTrading: S_ref must be below the initial price");
            const double Mp = spec.big_M_prime;
            ce.a3.setConstant(-Mp);
            ce.a4.setConstant(Mp);
            for (int p = 0; p < m; ++p) {
                const int tau = stop_index(ensemble.S, p, spec.S_ref);
                for (int i = 0; i < n; ++i) {
                    if (i > tau) {
                        ce.a1(p, i) = 0.0;  // trading stops strictly after tau
                        ce.a2(p, i) = 0.0;
                    }
                }
                if (tau == n) {
                    // Price never dropped: enforce full liquidation.
                    ce.a3(p, n - 1) = 0.0;
                    ce.a4(p, n - 1) = 0.0;
                }
            }
            break;
        }
        case ScenarioKind::Battery:
            if (!(spec.u_max > 0.0 && spec.X_max > 0.0))
                throw std::invalid_argument("Battery: u_max and X_max must be positive");
            if (spec.X0 < 0.0 || spec.X0 > spec.X_max)
                throw std::invalid_argument("Battery: X0 must lie in [0, X_max]");
            ce.a1.setConstant(-spec.u_max);
            ce.a2.setConstant(spec.u_max);
            ce.a3.setZero();
            ce.a4.setConstant(spec.X_max);
            break;
        case ScenarioKind::Custom:
            if (spec.a1.rows() != m || spec.a1.cols() != n || spec.a2.rows() != m ||
                spec.a2.cols() != n || spec.a3.rows() != m || spec.a3.cols() != n ||
                spec.a4.rows() != m || spec.a4.cols() != n)
                throw std::invalid_argument("Custom scenario: arrays must be M x N");
            if ((spec.a1.array() > spec.a2.array()).any() ||
                (spec.a3.array() > spec.a4.array()).any())
                throw std::invalid_argument("Custom scenario: bounds must be ordered");
            ce.a1 = spec.a1;
            ce.a2 = spec.a2;
            ce.a3 = spec.a3;
            ce.a4 = spec.a4;
            break;
    }
    return ce;
}

Violations violation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& X,
                     const ConstraintEnsemble& ce) {
    const int m = static_cast<int>(u.rows());
    const int n = static_cast<int>(u.cols());
    if (X.rows() != m || X.cols() != n + 1 || ce.a1.rows() != m || ce.a1.cols() != n)
        throw std::invalid_argument("violation: inconsistent shapes");
    Violations v;
    v.rate_low = ce.a1 - u;
    v.rate_high = u - ce.a2;
    const auto Xtail = X.rightCols(n);
    v.inv_low = ce.a3 - Xtail;
    v.inv_high = Xtail - ce.a4;
    return v;
}

}  // namespace prop
