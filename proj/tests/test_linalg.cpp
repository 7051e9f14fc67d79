#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "comsim/error.hpp"
#include "comsim/linalg.hpp"
#include "test_support.hpp"

using namespace comsim;
using linalg::RealMatrix;

TEST_CASE("scalar and decoupled vacuum Lyapunov solutions") {
    RealMatrix a(1, 1), d(1, 1);
    a << -1.0;
    d << 2.0;
    CHECK(linalg::solve_lyapunov(a, d)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    const double kappa = 3.0;
    const RealMatrix v = linalg::solve_lyapunov(-kappa * RealMatrix::Identity(2, 2), kappa * RealMatrix::Identity(2, 2));
    CHECK((v - 0.5 * RealMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("solver output is symmetric with residual below 1e-10") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 7;
        const auto [a, d] = test::random_stable_system(rng, n);
        const RealMatrix v = linalg::solve_lyapunov(a, d);
        CHECK(v == v.transpose());
        CHECK(linalg::lyapunov_residual(a, v, d) <= 1e-10);
    }
}

TEST_CASE("solver agrees with the time-integration oracle on 100 random systems") {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 7;
        const auto [a, d] = test::random_stable_system(rng, n);
        const RealMatrix v = linalg::solve_lyapunov(a, d);
        const RealMatrix oracle = linalg::integrate_lyapunov_oracle(a, d, 0.1 / test::spectral_radius(a), 1e-12);
        worst = std::max(worst, (v - oracle).norm() / v.norm());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Lyapunov solution is invariant under joint scaling of A and D") {
    std::mt19937_64 rng(5);
    const auto [a, d] = test::random_stable_system(rng, 6);
    const RealMatrix v = linalg::solve_lyapunov(a, d);
    for (double s : {1e-3, 0.37, 7.0, 1e3}) {
        CHECK((linalg::solve_lyapunov(s * a, s * d) - v).norm() / v.norm() < 1e-11);
    }
}

TEST_CASE("solver input validation") {
    RealMatrix a = -RealMatrix::Identity(2, 2);
    CHECK(test::code_of([&] { (void)linalg::solve_lyapunov(a, RealMatrix::Identity(3, 3)); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(test::code_of([&] { (void)linalg::solve_lyapunov(RealMatrix::Ones(2, 3), RealMatrix::Identity(2, 2)); }) ==
          ErrorCode::DimensionMismatch);
    RealMatrix bad = RealMatrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK(test::code_of([&] { (void)linalg::solve_lyapunov(a, bad); }) == ErrorCode::NonFinite);
    RealMatrix skew = RealMatrix::Identity(2, 2);
    skew(0, 1) = 0.3;
    CHECK(test::code_of([&] { (void)linalg::solve_lyapunov(a, skew); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("undamped rotation makes the vectorized system singular") {
    RealMatrix a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    CHECK(test::code_of([&] { (void)linalg::solve_lyapunov(a, RealMatrix::Identity(2, 2)); }) ==
          ErrorCode::SingularSystem);
}

TEST_CASE("oracle trivial cases") {
    RealMatrix a(1, 1), d(1, 1);
    a << -1.0;
    d << 2.0;
    CHECK(linalg::integrate_lyapunov_oracle(a, d, 0.01, 1e-12)(0, 0) == doctest::Approx(1.0).epsilon(1e-11));
    a << 1.0;
    CHECK(test::code_of([&] { (void)linalg::integrate_lyapunov_oracle(a, d, 0.01, 1e-12, 200'000); }) ==
          ErrorCode::NotConverged);
}

TEST_CASE("stability report") {
    RealMatrix a = RealMatrix::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = -2.0;
    const auto r = linalg::stability(a);
    CHECK(r.is_stable);
    CHECK_FALSE(r.marginal);
    CHECK(r.margin == doctest::Approx(-1.0));
    CHECK(r.eigen_real_parts.size() == 2);

    a(0, 0) = 0.0;
    const auto m = linalg::stability(a);
    CHECK_FALSE(m.is_stable);
    CHECK(m.marginal);

    a(0, 0) = 1e-3;
    const auto u = linalg::stability(a);
    CHECK_FALSE(u.is_stable);
    CHECK_FALSE(u.marginal);
}

TEST_CASE("stability agrees with oracle convergence") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        RealMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        const RealMatrix d = RealMatrix::Identity(n, n);
        const bool stable = linalg::stability(a).is_stable;
        if (std::abs(linalg::stability(a).margin) < 0.05) continue;
        bool converged = true;
        try {
            (void)linalg::integrate_lyapunov_oracle(a, d, 0.01, 1e-9, 400'000);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotConverged);
            converged = false;
        }
        CHECK(converged == stable);
    }
}
