#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "propagator/time_grid.hpp"

namespace prop {

struct LsmcConfig {
    int degree = 2;        // maximum total polynomial degree d
    double ridge = 1e-8;   // ridge factor, scaled by trace of the Gram matrix
    bool standardize = true;
};

struct LsmcDiagnostics {
    int fallback_count = 0;    // regressions that fell back to the plain mean
    double max_condition = 0;  // worst Gram condition number across times
};

// Tensor Laguerre basis L_p(a) L_q(z) L_r(x), p + q + r <= d.
class LaguerreBasis {
  public:
    explicit LaguerreBasis(int degree);
    int size() const { return static_cast<int>(exponents_.size()); }
    int degree() const { return degree_; }
    void eval(double a, double z, double x, Eigen::Ref<Eigen::VectorXd> out) const;

  private:
    int degree_;
    std::vector<std::array<int, 3>> exponents_;
};

// Aggregated-multiplier matrix Lam in factored per-time form:
//   Lam(path; i, i) = l1(path, i) - l2(path, i) + diag_tail(path, i)
//   Lam(path; i, j) = off[i](path, j - i - 1)   for j > i
struct AggregatedMultiplier {
    Eigen::MatrixXd diag_tail;            // M x N, dt * E_i[tail sum] predictions
    std::vector<Eigen::MatrixXd> off;     // off[i]: M x (N-1-i)
    const Eigen::MatrixXd* l1 = nullptr;  // measurable diagonal terms, kept exact
    const Eigen::MatrixXd* l2 = nullptr;

    // Add Lam for one path onto an upper-triangular matrix in place.
    void add_to(int path, Eigen::MatrixXd& R_plus_Lam) const;
};

// Fit the conditional expectations of the multiplier aggregates by ridge
// least squares on the Laguerre features of (alpha, Z, X) at each t_i, and
// return per-path predictions.  l1..l4 are M x N; features are M x N values
// at t_0..t_{N-1} built from the previous iterate's control.
AggregatedMultiplier fit_predict_lambda(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& l2,
                                        const Eigen::MatrixXd& l3, const Eigen::MatrixXd& l4,
                                        const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& Z,
                                        const Eigen::MatrixXd& X, const TimeGrid& grid,
                                        const LsmcConfig& cfg, LsmcDiagnostics& diag);

}  // namespace prop
