#include "propagator/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace prop {

namespace {

void validate(const QPInstance& inst) {
    const int n = static_cast<int>(inst.gamma.size());
    if (n < 1) throw std::invalid_argument("QPInstance: empty");
    if (inst.forecast.size() != n + 1) throw std::invalid_argument("QPInstance: forecast must have N+1 entries");
    if (inst.weights.rows() != n || inst.weights.cols() != n)
        throw std::invalid_argument("QPInstance: weights must be N x N");
    if (inst.u_min.size() != n || inst.u_max.size() != n || inst.X_min.size() != n ||
        inst.X_max.size() != n)
        throw std::invalid_argument("QPInstance: bound vectors must have N entries");
    if (!(inst.dt > 0.0)) throw std::invalid_argument("QPInstance: dt must be positive");
    if ((inst.gamma.array() <= 0.0).any())
        throw std::invalid_argument("QPInstance: gamma must be strictly positive (LP case unsupported)");
    if ((inst.u_min.array() > inst.u_max.array()).any() ||
        (inst.X_min.array() > inst.X_max.array()).any())
        throw QPInfeasible("QPInstance: bounds are not ordered");
}

// Quadratic and linear coefficients: objective = 0.5 u' Q u + q' u.
void build_objective(const QPInstance& inst, Eigen::MatrixXd& Q, Eigen::VectorXd& q) {
    const int n = static_cast<int>(inst.gamma.size());
    Q = inst.dt * (Eigen::MatrixXd(inst.gamma.asDiagonal()) + inst.weights +
                   inst.weights.transpose());
    q.resize(n);
    const double SN = inst.forecast(n);
    for (int i = 0; i < n; ++i) q(i) = inst.dt * (inst.forecast(i) - SN);
}

// Stacked constraint rows: identity block for rates, cumulative block for
// inventory (row i: dt on columns 0..i).  Bounds shifted by X0 for inventory.
struct ConstraintStack {
    Eigen::MatrixXd A;  // 2N x N
    Eigen::VectorXd lo, hi;
};

ConstraintStack build_constraints(const QPInstance& inst) {
    const int n = static_cast<int>(inst.gamma.size());
    ConstraintStack cs;
    cs.A = Eigen::MatrixXd::Zero(2 * n, n);
    cs.A.topRows(n).setIdentity();
    for (int i = 0; i < n; ++i) cs.A.row(n + i).head(i + 1).setConstant(inst.dt);
    cs.lo.resize(2 * n);
    cs.hi.resize(2 * n);
    cs.lo.head(n) = inst.u_min;
    cs.hi.head(n) = inst.u_max;
    cs.lo.tail(n) = inst.X_min.array() - inst.X0;
    cs.hi.tail(n) = inst.X_max.array() - inst.X0;
    if (inst.terminal_equality) {
        cs.lo(2 * n - 1) = -inst.X0;
        cs.hi(2 * n - 1) = -inst.X0;
    }
    return cs;
}

// Uniform-rate feasibility test: the constant candidate rate must satisfy all
// the constraints, otherwise the instance is rejected as unverified.
void check_feasible(const QPInstance& inst, const ConstraintStack& cs) {
    const int n = static_cast<int>(inst.gamma.size());
    const double T = inst.dt * n;
    const double rate = inst.terminal_equality ? -inst.X0 / T : 0.0;
    const Eigen::VectorXd cand = Eigen::VectorXd::Constant(n, rate);
    const Eigen::VectorXd Ac = cs.A * cand;
    const double tol = 1e-9 * (1.0 + std::abs(rate) + std::abs(inst.X0));
    if (((Ac - cs.hi).array() > tol).any() || ((cs.lo - Ac).array() > tol).any())
        throw QPInfeasible("QPInstance: uniform-rate candidate violates the constraints");
}

double kkt_metrics(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q, const ConstraintStack& cs,
                   bool terminal_equality, const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
    const Eigen::Index nrows = cs.A.rows();
    const Eigen::VectorXd Au = cs.A * u;
    const double scale = 1.0 + q.cwiseAbs().maxCoeff() + (Q * u).cwiseAbs().maxCoeff();
    double stat = (Q * u + q + cs.A.transpose() * y).cwiseAbs().maxCoeff() / scale;
    double feas = 0.0, comp = 0.0;
    for (Eigen::Index r = 0; r < nrows; ++r) {
        feas = std::max(feas, std::max(Au(r) - cs.hi(r), cs.lo(r) - Au(r)));
        const bool equality = terminal_equality && r == nrows - 1;
        if (equality) continue;
        if (y(r) > 0.0) comp = std::max(comp, y(r) * std::abs(Au(r) - cs.hi(r)));
        if (y(r) < 0.0) comp = std::max(comp, -y(r) * std::abs(Au(r) - cs.lo(r)));
    }
    const double bscale = 1.0 + Au.cwiseAbs().maxCoeff();
    return std::max({stat, feas / bscale, comp / scale});
}

// Equality-constrained polish on a guessed active set; returns true when the
// polished point satisfies all KKT conditions.
bool polish(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q, const ConstraintStack& cs,
            bool terminal_equality, const std::vector<int>& active,
            const std::vector<int>& sign, Eigen::VectorXd& u, Eigen::VectorXd& y,
            double tol) {
    const int n = static_cast<int>(Q.rows());
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd rhs(n + k);
    KKT.topLeftCorner(n, n) = Q;
    rhs.head(n) = -q;
    for (int a = 0; a < k; ++a) {
        const int r = active[a];
        KKT.block(n + a, 0, 1, n) = cs.A.row(r);
        KKT.block(0, n + a, n, 1) = cs.A.row(r).transpose();
        rhs(n + a) = sign[a] > 0 ? cs.hi(r) : cs.lo(r);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(KKT);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd uc = sol.head(n);
    Eigen::VectorXd yc = Eigen::VectorXd::Zero(cs.A.rows());
    for (int a = 0; a < k; ++a) yc(active[a]) = sol(n + a);

    const Eigen::VectorXd Au = cs.A * uc;
    const double fscale = 1.0 + uc.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < cs.A.rows(); ++r) {
        if (Au(r) > cs.hi(r) + tol * fscale || Au(r) < cs.lo(r) - tol * fscale) return false;
    }
    for (int a = 0; a < k; ++a) {
        const int r = active[a];
        const bool equality = terminal_equality && r == cs.A.rows() - 1;
        if (equality) continue;
        if (sign[a] > 0 && yc(r) < -tol) return false;
        if (sign[a] < 0 && yc(r) > tol) return false;
    }
    u = uc;
    y = yc;
    return true;
}

}  // namespace

Eigen::MatrixXd clip_oracle(const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& a1,
                            const Eigen::MatrixXd& a2) {
    return alpha.cwiseMax(a1).cwiseMin(a2);
}

double qp_objective(const QPInstance& inst, const Eigen::VectorXd& u) {
    Eigen::MatrixXd Q;
    Eigen::VectorXd q;
    build_objective(inst, Q, q);
    return 0.5 * u.dot(Q * u) + q.dot(u);
}

QPSolution solve_qp(const QPInstance& inst, double tol, int max_iters) {
    validate(inst);
    const int n = static_cast<int>(inst.gamma.size());
    Eigen::MatrixXd Q;
    Eigen::VectorXd q;
    build_objective(inst, Q, q);
    const ConstraintStack cs = build_constraints(inst);
    check_feasible(inst, cs);

    // ADMM splitting: u-step solves (Q + rho A'A) u = -q + rho A'(z - w).
    const double rho = std::max(Q.trace() / n, 1e-12);
    const Eigen::MatrixXd AtA = cs.A.transpose() * cs.A;
    Eigen::LDLT<Eigen::MatrixXd> fac(Q + rho * AtA);
    if (fac.info() != Eigen::Success) throw std::runtime_error("solve_qp: factorization failed");

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * n);

    QPSolution best;
    best.kkt_residual = std::numeric_limits<double>::infinity();

    const double act_tol = 1e-7;
    int it = 0;
    for (; it < max_iters; ++it) {
        u = fac.solve(-q + rho * (cs.A.transpose() * (z - w)));
        const Eigen::VectorXd Au = cs.A * u;
        const Eigen::VectorXd z_prev = z;
        z = (Au + w).cwiseMax(cs.lo).cwiseMin(cs.hi);
        w += Au - z;

        if (it % 25 != 24) continue;
        const double uscale = 1.0 + u.cwiseAbs().maxCoeff();
        const double rp = (Au - z).cwiseAbs().maxCoeff();
        const double rd = rho * (cs.A.transpose() * (z - z_prev)).cwiseAbs().maxCoeff();
        if (rp > 1e-6 * uscale || rd > 1e-6 * uscale) continue;

        // Guess the active set from the slack variable and polish it exactly.
        y = rho * w;
        std::vector<int> active;
        std::vector<int> sign;
        for (int r = 0; r < 2 * n; ++r) {
            const bool equality = inst.terminal_equality && r == 2 * n - 1;
            const double span = 1.0 + std::abs(z(r));
            if (equality || (z(r) >= cs.hi(r) - act_tol * span && y(r) > -act_tol)) {
                active.push_back(r);
                sign.push_back(+1);
            } else if (z(r) <= cs.lo(r) + act_tol * span && y(r) < act_tol) {
                active.push_back(r);
                sign.push_back(-1);
            }
        }
        Eigen::VectorXd up = u, yp = y;
        if (polish(Q, q, cs, inst.terminal_equality, active, sign, up, yp, 1e-9)) {
            const double res = kkt_metrics(Q, q, cs, inst.terminal_equality, up, yp);
            if (res < best.kkt_residual) {
                best.u = up;
                best.kkt_residual = res;
                best.iterations = it + 1;
            }
            if (res <= tol) break;
        }
    }

    if (!best.u.size()) {
        // Polish never succeeded: report the raw ADMM iterate.
        best.u = u;
        best.kkt_residual = kkt_metrics(Q, q, cs, inst.terminal_equality, u, rho * w);
        best.iterations = it;
    }
    best.objective = 0.5 * best.u.dot(Q * best.u) + q.dot(best.u);
    best.X.resize(n + 1);
    best.X(0) = inst.X0;
    for (int i = 0; i < n; ++i) best.X(i + 1) = best.X(i) + inst.dt * best.u(i);
    return best;
}

QPSolution enumerate_qp(const QPInstance& inst) {
    validate(inst);
    const int n = static_cast<int>(inst.gamma.size());
    if (n > 6) throw std::invalid_argument("enumerate_qp: N must be <= 6");
    Eigen::MatrixXd Q;
    Eigen::VectorXd q;
    build_objective(inst, Q, q);
    const ConstraintStack cs = build_constraints(inst);

    // Per index: u status x X status, each in {free, low, high} => 9^N combos.
    QPSolution best;
    best.objective = std::numeric_limits<double>::infinity();
    bool found = false;

    long total = 1;
    for (int i = 0; i < n; ++i) total *= 9;
    for (long code = 0; code < total; ++code) {
        std::vector<int> active;
        std::vector<int> sign;
        long c = code;
        bool skip = false;
        for (int i = 0; i < n; ++i) {
            const int s = static_cast<int>(c % 9);
            c /= 9;
            const int us = s % 3, xs = s / 3;
            if (us == 1) { active.push_back(i); sign.push_back(-1); }
            if (us == 2) { active.push_back(i); sign.push_back(+1); }
            const bool terminal = inst.terminal_equality && i == n - 1;
            if (terminal && xs != 0) { skip = true; break; }  // equality row added below
            if (xs == 1) { active.push_back(n + i); sign.push_back(-1); }
            if (xs == 2) { active.push_back(n + i); sign.push_back(+1); }
        }
        if (skip) continue;
        if (inst.terminal_equality) {
            active.push_back(2 * n - 1);
            sign.push_back(+1);
        }
        Eigen::VectorXd u, y;
        if (!polish(Q, q, cs, inst.terminal_equality, active, sign, u, y, 1e-9)) continue;
        const double obj = 0.5 * u.dot(Q * u) + q.dot(u);
        if (!found || obj < best.objective) {
            found = true;
            best.u = u;
            best.objective = obj;
            best.kkt_residual = kkt_metrics(Q, q, cs, inst.terminal_equality, u, y);
        }
    }
    if (!found) throw QPInfeasible("enumerate_qp: no KKT-consistent active set found");
    best.X.resize(n + 1);
    best.X(0) = inst.X0;
    for (int i = 0; i < n; ++i) best.X(i + 1) = best.X(i) + inst.dt * best.u(i);
    return best;
}

Eigen::VectorXd dense_deterministic_solve(const DiscreteKernel& dk, const Eigen::VectorXd& rhs) {
    const int n = dk.size();
    if (rhs.size() != n) throw std::invalid_argument("dense_deterministic_solve: shape mismatch");
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n) + dk.lower + dk.upper;
    return D.partialPivLu().solve(rhs);
}

}  // namespace prop
