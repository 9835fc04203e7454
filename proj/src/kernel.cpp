#include "propagator/kernel.hpp"

#include <cmath>

namespace prop {

namespace {

void validate(const KernelSpec& spec) {
    switch (spec.type) {
        case KernelType::Zero:
            break;
        case KernelType::Exponential:
            if (!(spec.c > 0.0)) throw std::invalid_argument("kernel: c must be > 0");
            if (!(spec.rho > 0.0)) throw std::invalid_argument("kernel: rho must be > 0");
            break;
        case KernelType::PowerLaw:
            if (!(spec.c > 0.0)) throw std::invalid_argument("kernel: c must be > 0");
            if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
                throw std::invalid_argument("kernel: alpha must be in (0, 1)");
            break;
        case KernelType::SumExponential:
            if (!(spec.c > 0.0 && spec.c2 > 0.0)) throw std::invalid_argument("kernel: c must be > 0");
            if (!(spec.rho > 0.0 && spec.rho2 > 0.0)) throw std::invalid_argument("kernel: rho must be > 0");
            break;
    }
}

// int_a^b exp(-rho * (t - s)) ds for a <= b <= t
double exp_integral(double rho, double t, double a, double b) {
    return (std::exp(-rho * (t - b)) - std::exp(-rho * (t - a))) / rho;
}

// (x)^alpha with the convention 0^alpha = 0, x >= 0
double pow_zero(double x, double alpha) {
    return x > 0.0 ? std::pow(x, alpha) : 0.0;
}

}  // namespace

KernelSpec KernelSpec::zero() { return KernelSpec{}; }

KernelSpec KernelSpec::exponential(double c, double rho) {
    KernelSpec s;
    s.type = KernelType::Exponential;
    s.c = c;
    s.rho = rho;
    validate(s);
    return s;
}

KernelSpec KernelSpec::power_law(double c, double alpha) {
    KernelSpec s;
    s.type = KernelType::PowerLaw;
    s.c = c;
    s.alpha = alpha;
    validate(s);
    return s;
}

KernelSpec KernelSpec::sum_exponential(double c1, double rho1, double c2, double rho2) {
    KernelSpec s;
    s.type = KernelType::SumExponential;
    s.c = c1;
    s.rho = rho1;
    s.c2 = c2;
    s.rho2 = rho2;
    validate(s);
    return s;
}

double eval_kernel(const KernelSpec& spec, double t, double s) {
    if (spec.type == KernelType::PowerLaw && t == s)
        throw SingularEvaluation("power-law kernel is singular at t = s; use interval integrals");
    if (t <= s) return 0.0;
    switch (spec.type) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return spec.c * std::exp(-spec.rho * (t - s));
        case KernelType::PowerLaw:
            return spec.c * std::pow(t - s, spec.alpha - 1.0);
        case KernelType::SumExponential:
            return spec.c * std::exp(-spec.rho * (t - s)) + spec.c2 * std::exp(-spec.rho2 * (t - s));
    }
    return 0.0;
}

DiscreteKernel build_discrete_kernel(const KernelSpec& spec, const TimeGrid& grid) {
    validate(spec);
    const int n = grid.n_steps;
    if (n < 2) throw std::invalid_argument("build_discrete_kernel: N must be >= 2");

    DiscreteKernel dk;
    dk.lower = Eigen::MatrixXd::Zero(n, n);
    dk.upper = Eigen::MatrixXd::Zero(n, n);
    if (spec.type == KernelType::Zero) return dk;

    for (int i = 0; i < n; ++i) {
        const double ti = grid.node(i);
        for (int j = 0; j < i; ++j) {
            // int_{t_j}^{t_{j+1}} K(t_i, s) ds, closed form
            const double a = grid.node(j), b = grid.node(j + 1);
            switch (spec.type) {
                case KernelType::Exponential:
                    dk.lower(i, j) = spec.c * exp_integral(spec.rho, ti, a, b);
                    break;
                case KernelType::PowerLaw:
                    dk.lower(i, j) = spec.c / spec.alpha *
                                     (pow_zero(ti - a, spec.alpha) - pow_zero(ti - b, spec.alpha));
                    break;
                case KernelType::SumExponential:
                    dk.lower(i, j) = spec.c * exp_integral(spec.rho, ti, a, b) +
                                     spec.c2 * exp_integral(spec.rho2, ti, a, b);
                    break;
                default:
                    break;
            }
        }
        for (int j = i; j < n; ++j) {
            // int_{t_j}^{t_{j+1}} K(s, t_i) ds, closed form
            const double a = grid.node(j), b = grid.node(j + 1);
            switch (spec.type) {
                case KernelType::Exponential:
                    dk.upper(i, j) = spec.c / spec.rho *
                                     (std::exp(-spec.rho * (a - ti)) - std::exp(-spec.rho * (b - ti)));
                    break;
                case KernelType::PowerLaw:
                    dk.upper(i, j) = spec.c / spec.alpha *
                                     (pow_zero(b - ti, spec.alpha) - pow_zero(a - ti, spec.alpha));
                    break;
                case KernelType::SumExponential:
                    dk.upper(i, j) = spec.c / spec.rho *
                                         (std::exp(-spec.rho * (a - ti)) - std::exp(-spec.rho * (b - ti))) +
                                     spec.c2 / spec.rho2 *
                                         (std::exp(-spec.rho2 * (a - ti)) - std::exp(-spec.rho2 * (b - ti)));
                    break;
                default:
                    break;
            }
        }
    }
    return dk;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> mask_kernel(const DiscreteKernel& dk, int i) {
    const int n = dk.size();
    if (i < 0 || i >= n) throw std::out_of_range("mask_kernel: index out of range");
    Eigen::MatrixXd lm = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd um = Eigen::MatrixXd::Zero(n, n);
    lm.block(i, i, n - i, n - i) = dk.lower.block(i, i, n - i, n - i);
    um.block(i, i, n - i, n - i) = dk.upper.block(i, i, n - i, n - i);
    return {lm, um};
}

}  // namespace prop
