#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

#include "propagator/time_grid.hpp"

namespace prop {

// Pointwise evaluation of an integrable kernel at a singular point.
struct SingularEvaluation : std::domain_error {
    using std::domain_error::domain_error;
};

enum class KernelType { Zero, Exponential, PowerLaw, SumExponential };

// Volterra propagator kernel K(t, s), zero for t <= s.
//   Exponential:    K(t, s) = c * exp(-rho * (t - s))
//   PowerLaw:       K(t, s) = c * (t - s)^(alpha - 1), alpha in (0, 1)
//   SumExponential: sum of two exponential terms
struct KernelSpec {
    KernelType type = KernelType::Zero;
    double c = 0.0;
    double rho = 0.0;
    double alpha = 0.0;
    double c2 = 0.0;
    double rho2 = 0.0;

    static KernelSpec zero();
    static KernelSpec exponential(double c, double rho);
    static KernelSpec power_law(double c, double alpha);
    static KernelSpec sum_exponential(double c1, double rho1, double c2, double rho2);
};

double eval_kernel(const KernelSpec& spec, double t, double s);

// Exact interval integrals of K on the grid:
//   lower(i, j) = int_{t_j}^{t_{j+1}} K(t_i, s) ds  for j < i, else 0
//   upper(i, j) = int_{t_j}^{t_{j+1}} K(s, t_i) ds  for i <= j, else 0
struct DiscreteKernel {
    Eigen::MatrixXd lower;
    Eigen::MatrixXd upper;
    int size() const { return static_cast<int>(lower.rows()); }
};

DiscreteKernel build_discrete_kernel(const KernelSpec& spec, const TimeGrid& grid);

// Zero out all rows and columns with index < i of both matrices.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> mask_kernel(const DiscreteKernel& dk, int i);

}  // namespace prop
