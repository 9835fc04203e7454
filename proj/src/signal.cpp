#include "propagator/signal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prop {

namespace {

// Antiderivative helper: d/ds [ e^{kappa s} H(s) ] = e^{kappa s} sin(w s + phi),
//   H(s) = (kappa sin(w s + phi) - w cos(w s + phi)) / (kappa^2 + w^2).
double seasonal_H(const SignalParams& p, double s) {
    if (p.w == 0.0) return std::sin(p.phi) / p.kappa;
    return (p.kappa * std::sin(p.w * s + p.phi) - p.w * std::cos(p.w * s + p.phi)) /
           (p.kappa * p.kappa + p.w * p.w);
}

// int_a^b H(s) ds
double seasonal_H_integral(const SignalParams& p, double a, double b) {
    if (p.w == 0.0) return std::sin(p.phi) / p.kappa * (b - a);
    const double denom = p.kappa * p.kappa + p.w * p.w;
    const double at_b = -(p.kappa / p.w) * std::cos(p.w * b + p.phi) - std::sin(p.w * b + p.phi);
    const double at_a = -(p.kappa / p.w) * std::cos(p.w * a + p.phi) - std::sin(p.w * a + p.phi);
    return (at_b - at_a) / denom;
}

void validate(const SignalParams& p) {
    if (!(p.kappa > 0.0)) throw std::invalid_argument("signal: kappa must be > 0");
    if (p.xi < 0.0) throw std::invalid_argument("signal: xi must be >= 0");
    if (p.sigma < 0.0) throw std::invalid_argument("signal: sigma must be >= 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Factor matrices of R(i, j) = slope(i, j) * I_{t_i} + offset(i, j).
void build_factors(const SignalParams& p, const TimeGrid& grid, Eigen::MatrixXd& slope,
                   Eigen::MatrixXd& offset) {
    const int n = grid.n_steps;
    const double T = grid.horizon;
    slope = Eigen::MatrixXd::Zero(n, n);
    offset = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double ti = grid.node(i);
        const double Hi = seasonal_H(p, ti);
        for (int j = i; j < n; ++j) {
            const double tj = grid.node(j);
            const double decay = (std::exp(-p.kappa * (tj - ti)) - std::exp(-p.kappa * (T - ti))) / p.kappa;
            slope(i, j) = decay;
            offset(i, j) = -p.theta * Hi * decay + p.theta * seasonal_H_integral(p, tj, T);
        }
    }
}

}  // namespace

std::pair<double, double> ou_transition(const SignalParams& p, double t, double dt, double x) {
    const double decay = std::exp(-p.kappa * dt);
    const double mean = x * decay + p.theta * (seasonal_H(p, t + dt) - decay * seasonal_H(p, t));
    const double var = p.xi * p.xi * (1.0 - std::exp(-2.0 * p.kappa * dt)) / (2.0 * p.kappa);
    return {mean, std::sqrt(var)};
}

Eigen::MatrixXd SignalEnsemble::cond_exp_matrix(int path) const {
    const int n = static_cast<int>(cond_exp_slope.rows());
    Eigen::MatrixXd R = cond_exp_offset;
    for (int i = 0; i < n; ++i) R.row(i).tail(n - i) += I(path, i) * cond_exp_slope.row(i).tail(n - i);
    return R;
}

Eigen::MatrixXd cond_exp_matrix(const SignalParams& params, const TimeGrid& grid,
                                const Eigen::VectorXd& I_path) {
    validate(params);
    if (I_path.size() != grid.n_steps + 1)
        throw std::invalid_argument("cond_exp_matrix: drift path must have N+1 entries");
    Eigen::MatrixXd slope, offset;
    build_factors(params, grid, slope, offset);
    const int n = grid.n_steps;
    Eigen::MatrixXd R = offset;
    for (int i = 0; i < n; ++i) R.row(i).tail(n - i) += I_path(i) * slope.row(i).tail(n - i);
    return R;
}

SignalEnsemble simulate(const SignalParams& params, const TimeGrid& grid, int n_paths,
                        std::uint64_t seed) {
    validate(params);
    if (n_paths < 1) throw std::invalid_argument("simulate: need at least one path");
    const int n = grid.n_steps;
    const double dt = grid.step();

    SignalEnsemble ens;
    ens.n_paths = n_paths;
    ens.seed = seed;
    ens.I.resize(n_paths, n + 1);
    ens.S.resize(n_paths, n + 1);
    build_factors(params, grid, ens.cond_exp_slope, ens.cond_exp_offset);

    // Precompute the deterministic part of the exact one-step transition.
    Eigen::VectorXd drift_term(n);
    const double decay = std::exp(-params.kappa * dt);
    for (int i = 0; i < n; ++i) {
        drift_term(i) = params.theta *
                        (seasonal_H(params, grid.node(i + 1)) - decay * seasonal_H(params, grid.node(i)));
    }
    const double noise_sd =
        params.xi * std::sqrt((1.0 - std::exp(-2.0 * params.kappa * dt)) / (2.0 * params.kappa));
    const double price_sd = params.sigma * std::sqrt(dt);

    // One RNG stream per path: results do not depend on the thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < n_paths; ++m) {
        std::mt19937_64 rng(splitmix64(seed ^ (0x632be59bd9b4e019ULL * (m + 1))));
        std::normal_distribution<double> gauss(0.0, 1.0);
        ens.I(m, 0) = params.I0;
        ens.S(m, 0) = params.S0;
        for (int i = 0; i < n; ++i) {
            const double zi = noise_sd > 0.0 ? gauss(rng) : 0.0;
            const double zs = price_sd > 0.0 ? gauss(rng) : 0.0;
            ens.I(m, i + 1) = ens.I(m, i) * decay + drift_term(i) + noise_sd * zi;
            ens.S(m, i + 1) = ens.S(m, i) + ens.I(m, i) * dt + price_sd * zs;
        }
    }
    return ens;
}

}  // namespace prop
