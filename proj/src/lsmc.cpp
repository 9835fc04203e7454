#include "propagator/lsmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prop {

namespace {

// Standard Laguerre polynomial values L_0..L_d at x.
void laguerre_values(int d, double x, double* out) {
    out[0] = 1.0;
    if (d >= 1) out[1] = 1.0 - x;
    for (int k = 1; k < d; ++k)
        out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
}

struct Standardizer {
    double mean = 0.0, scale = 1.0;
    double operator()(double x) const { return (x - mean) / scale; }
};

Standardizer make_standardizer(const Eigen::Ref<const Eigen::VectorXd>& col, bool enabled) {
    Standardizer s;
    if (!enabled) return s;
    s.mean = col.mean();
    const double var = (col.array() - s.mean).square().mean();
    const double sd = std::sqrt(var);
    s.scale = sd > 1e-120 ? sd : 1.0;
    return s;
}

}  // namespace

LaguerreBasis::LaguerreBasis(int degree) : degree_(degree) {
    if (degree < 0 || degree > 15)
        throw std::invalid_argument("LaguerreBasis: degree must be in [0, 15]");
    for (int p = 0; p <= degree; ++p)
        for (int q = 0; p + q <= degree; ++q)
            for (int r = 0; p + q + r <= degree; ++r)
                exponents_.push_back({p, q, r});
}

void LaguerreBasis::eval(double a, double z, double x, Eigen::Ref<Eigen::VectorXd> out) const {
    double la[16], lz[16], lx[16];
    laguerre_values(degree_, a, la);
    laguerre_values(degree_, z, lz);
    laguerre_values(degree_, x, lx);
    for (std::size_t k = 0; k < exponents_.size(); ++k) {
        const auto& e = exponents_[k];
        out(static_cast<Eigen::Index>(k)) = la[e[0]] * lz[e[1]] * lx[e[2]];
    }
}

void AggregatedMultiplier::add_to(int path, Eigen::MatrixXd& R_plus_Lam) const {
    const int n = static_cast<int>(diag_tail.cols());
    for (int i = 0; i < n; ++i) {
        R_plus_Lam(i, i) += (*l1)(path, i) - (*l2)(path, i) + diag_tail(path, i);
        const int w = n - 1 - i;
        if (w > 0) R_plus_Lam.row(i).segment(i + 1, w) += off[i].row(path);
    }
}

AggregatedMultiplier fit_predict_lambda(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& l2,
                                        const Eigen::MatrixXd& l3, const Eigen::MatrixXd& l4,
                                        const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& Z,
                                        const Eigen::MatrixXd& X, const TimeGrid& grid,
                                        const LsmcConfig& cfg, LsmcDiagnostics& diag) {
    const int m = static_cast<int>(l1.rows());
    const int n = static_cast<int>(l1.cols());
    if (grid.n_steps != n) throw std::invalid_argument("fit_predict_lambda: grid mismatch");
    const double dt = grid.step();

    // tail(:, j) = sum_{k >= j} (l3 - l4)(:, k); column k of l3/l4 sits at t_{k+1}.
    Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(m, n);
    tail.col(n - 1) = l3.col(n - 1) - l4.col(n - 1);
    for (int j = n - 2; j >= 0; --j) tail.col(j) = tail.col(j + 1) + l3.col(j) - l4.col(j);

    // Combined off-diagonal targets Y(:, j) = (l1 - l2)(:, j) + dt * tail(:, j);
    // the dt sits on the inventory-multiplier tail only.
    Eigen::MatrixXd Y = l1 - l2 + dt * tail;

    AggregatedMultiplier agg;
    agg.l1 = &l1;
    agg.l2 = &l2;
    agg.diag_tail.resize(m, n);
    agg.off.resize(n);

    // Time 0: the filtration is trivial, plain cross-path means.
    agg.diag_tail.col(0).setConstant(dt * tail.col(0).mean());
    agg.off[0].resize(m, n - 1);
    for (int j = 1; j < n; ++j) agg.off[0].col(j - 1).setConstant(Y.col(j).mean());

    const LaguerreBasis basis(cfg.degree);
    const int nb = basis.size();
    const double base_ridge = cfg.ridge;

    double max_cond = 0.0;
    int fallbacks = 0;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : fallbacks) reduction(max : max_cond)
#endif
    for (int i = 1; i < n; ++i) {
        const int w = n - 1 - i;
        agg.off[i].resize(m, w);

        const Standardizer sa = make_standardizer(alpha.col(i), cfg.standardize);
        const Standardizer sz = make_standardizer(Z.col(i), cfg.standardize);
        const Standardizer sx = make_standardizer(X.col(i), cfg.standardize);

        Eigen::MatrixXd A(m, nb);
        Eigen::VectorXd row(nb);
        for (int p = 0; p < m; ++p) {
            basis.eval(sa(alpha(p, i)), sz(Z(p, i)), sx(X(p, i)), row);
            A.row(p) = row;
        }

        Eigen::MatrixXd G = A.transpose() * A;
        const double ridge = base_ridge * std::max(G.trace() / nb, 1e-300);
        G.diagonal().array() += ridge;

        // Targets: tail for the diagonal, then Y columns j = i+1..n-1.
        Eigen::MatrixXd targets(m, 1 + w);
        targets.col(0) = tail.col(i);
        if (w > 0) targets.rightCols(w) = Y.middleCols(i + 1, w);

        Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
        bool ok = ldlt.info() == Eigen::Success;
        Eigen::MatrixXd pred;
        if (ok) {
            Eigen::MatrixXd coef = ldlt.solve(A.transpose() * targets);
            pred = A * coef;
            ok = pred.allFinite();
        }
        if (!ok) {
            // Rank-deficient even after ridge: fall back to plain means.
            pred.resize(m, 1 + w);
            for (int c = 0; c < 1 + w; ++c) pred.col(c).setConstant(targets.col(c).mean());
            ++fallbacks;
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            const double hi = es.eigenvalues().maxCoeff();
            const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
            max_cond = std::max(max_cond, cond);
        }

        agg.diag_tail.col(i) = dt * pred.col(0);
        if (w > 0) agg.off[i] = pred.rightCols(w);
    }

    diag.fallback_count += fallbacks;
    diag.max_condition = std::max(diag.max_condition, max_cond);
    return agg;
}

}  // namespace prop
