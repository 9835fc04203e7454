#include <cmath>
#include <random>

#include "doctest.h"
#include "propagator/fredholm.hpp"
#include "propagator/oracles.hpp"

using namespace prop;

namespace {

Eigen::MatrixXd random_upper(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) R(i, j) = gauss(rng);
    return R;
}

}  // namespace

TEST_CASE("zero kernel collapses to the identity scheme") {
    const TimeGrid grid(1.0, 8);
    const auto dk = build_discrete_kernel(KernelSpec::zero(), grid);
    const NystromOperator op(dk, grid);
    CHECK(op.B().cwiseAbs().maxCoeff() == 0.0);
    const auto R = random_upper(8, 3);
    const auto u = op.solve_control(R);
    for (int i = 0; i < 8; ++i) CHECK(u(i) == doctest::Approx(R(i, i)).epsilon(1e-14));
    CHECK(op.residual(R, u).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single-step grid") {
    const TimeGrid grid(1.0, 1);
    DiscreteKernel dk;  // single-interval integrals, assembled by hand
    dk.lower = Eigen::MatrixXd::Zero(1, 1);
    dk.upper = Eigen::MatrixXd::Constant(1, 1, 5.0 * (1.0 - std::exp(-1.0)));
    const NystromOperator op(dk, grid);
    Eigen::MatrixXd R(1, 1);
    R << 2.5;
    const auto u = op.solve_control(R);
    CHECK(u(0) == doctest::Approx(2.5 / (1.0 + dk.upper(0, 0))).epsilon(1e-14));
}

TEST_CASE("three-step hand assembly") {
    const TimeGrid grid(0.3, 3);
    const auto dk = build_discrete_kernel(KernelSpec::exponential(5.0, 1.0), grid);
    const NystromOperator op(dk, grid);
    const int n = 3;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    // Independent reconstruction straight from the definitions with dense
    // inverses of the masked operators.
    for (int i = 1; i < n; ++i) {
        Eigen::MatrixXd Lm = dk.lower, Um = dk.upper;
        Lm.topRows(i).setZero();
        Lm.leftCols(i).setZero();
        Um.topRows(i).setZero();
        Um.leftCols(i).setZero();
        const Eigen::MatrixXd Dinv = (I + Lm + Um).inverse();
        for (int j = 0; j < i; ++j) {
            const double expected =
                dk.upper.row(i) * Dinv * dk.lower.col(j) - dk.lower(i, j);
            CHECK(op.B()(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    // Strictly lower triangular.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) CHECK(op.B()(i, j) == 0.0);

    // Solution check against the same dense reconstruction.
    const auto R = random_upper(n, 9);
    const auto u = op.solve_control(R);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd Lm = dk.lower, Um = dk.upper;
        Lm.topRows(i).setZero();
        Lm.leftCols(i).setZero();
        Um.topRows(i).setZero();
        Um.leftCols(i).setZero();
        const Eigen::MatrixXd Dinv = (I + Lm + Um).inverse();
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (int k = i; k < n; ++k) v(k) = R(i, k);
        a(i) = R(i, i) - dk.upper.row(i) * Dinv * v;
    }
    const Eigen::VectorXd expected = (I - op.B()).lu().solve(a);
    CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("deterministic signal matches the dense solve") {
    // When row i of the conditional expectations does not depend on i, the
    // scheme reduces to (I + L + U) u = alpha.
    for (const auto& spec : {KernelSpec::exponential(5.0, 1.0), KernelSpec::power_law(2.0, 0.6)}) {
        const TimeGrid grid(1.0, 24);
        const auto dk = build_discrete_kernel(spec, grid);
        const NystromOperator op(dk, grid);
        std::mt19937_64 rng(17);
        std::normal_distribution<double> gauss;
        Eigen::VectorXd alpha(24);
        for (int i = 0; i < 24; ++i) alpha(i) = gauss(rng);
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(24, 24);
        for (int i = 0; i < 24; ++i)
            for (int j = i; j < 24; ++j) R(i, j) = alpha(j);
        const auto u = op.solve_control(R);
        const auto dense = dense_deterministic_solve(dk, alpha);
        CHECK((u - dense).cwiseAbs().maxCoeff() < 1e-11);
        CHECK(op.residual(R, u).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("residual vanishes at the computed control") {
    const TimeGrid grid(1.0, 20);
    for (const auto& spec : {KernelSpec::exponential(5.0, 1.0), KernelSpec::power_law(2.0, 0.6)}) {
        const auto dk = build_discrete_kernel(spec, grid);
        for (bool cache : {true, false}) {
            const NystromOperator op(dk, grid, cache);
            const auto R = random_upper(20, 31);
            const auto u = op.solve_control(R);
            CHECK(op.residual(R, u).cwiseAbs().maxCoeff() < 1e-12);
            // A perturbed control must not satisfy the equation.
            Eigen::VectorXd bad = u;
            bad(7) += 1.0;
            CHECK(op.residual(R, bad).cwiseAbs().maxCoeff() > 1e-3);
        }
    }
}

TEST_CASE("inventory accumulation") {
    const TimeGrid grid(0.03, 3);
    Eigen::VectorXd u(3);
    u << 1.0, 2.0, 3.0;
    const auto X = inventory(u, grid, 0.0);
    CHECK(X(0) == 0.0);
    CHECK(X(1) == doctest::Approx(0.01));
    CHECK(X(2) == doctest::Approx(0.03));
    CHECK(X(3) == doctest::Approx(0.06));
    const auto X1 = inventory(u, grid, 1.0);
    CHECK(X1(3) == doctest::Approx(1.06));
}

TEST_CASE("transient state telescopes for a constant rate") {
    const TimeGrid grid(1.0, 40);
    const auto dk = build_discrete_kernel(KernelSpec::exponential(5.0, 1.0), grid);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(40);
    const auto Z = transient_state(dk, ones);
    for (int i = 0; i < 40; ++i)
        CHECK(Z(i) == doctest::Approx(5.0 * (1.0 - std::exp(-grid.node(i)))).epsilon(1e-12));
}

TEST_CASE("objective value for a constant rate without impact") {
    const TimeGrid grid(2.0, 50);
    const double a = 3.0;
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(50, a);
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(50, a);
    const Eigen::VectorXd Z = Eigen::VectorXd::Zero(50);
    CHECK(pnl(u, alpha, Z, grid) == doctest::Approx(a * a * 2.0 / 2.0).epsilon(1e-13));
}

TEST_CASE("shape validation") {
    const TimeGrid grid(1.0, 4);
    const auto dk = build_discrete_kernel(KernelSpec::exponential(5.0, 1.0), grid);
    const NystromOperator op(dk, grid);
    CHECK_THROWS_AS(op.solve_control(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(op.residual(Eigen::MatrixXd::Zero(4, 4), Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
    const TimeGrid wrong(1.0, 5);
    CHECK_THROWS_AS(NystromOperator(dk, wrong), std::invalid_argument);
}
