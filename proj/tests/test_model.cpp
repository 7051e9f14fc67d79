#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "comsim/entanglement.hpp"
#include "comsim/model.hpp"
#include "comsim/sweep.hpp"
#include "test_support.hpp"

using namespace comsim;
using linalg::RealMatrix;
using cplx = std::complex<double>;

namespace {

SystemParams pumped() {
    SystemParams p = test::baseline();
    p.J = 0.0;
    p.G.reset();
    p.pump_power = 8e-3;
    p.g_c = thz(0.02);
    return p;
}

RealMatrix swap_modes(const RealMatrix& m, int i, int j) {
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(m.rows());
    perm.setIdentity();
    for (int k = 0; k < 2; ++k) std::swap(perm.indices()[2 * i + k], perm.indices()[2 * j + k]);
    return perm * m * perm.transpose();
}

}  // namespace

TEST_CASE("thermal occupation") {
    CHECK(thermal_occupation(thz(30.0), 300.0) == doctest::Approx(0.0083).epsilon(0.01));
    const double omega = thz(30.0);
    const double t_ln2 = constants::hbar * omega * constants::per_ps / (constants::k_boltzmann * std::log(2.0));
    CHECK(thermal_occupation(omega, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(thermal_occupation(omega, 1.0) < 1e-300);
    CHECK(test::code_of([&] { (void)thermal_occupation(omega, 0.0); }) == ErrorCode::NonPositiveTemperature);

    SystemParams p = test::baseline();
    p.temperature = 300.0;
    CHECK(effective_n_bar(p) == doctest::Approx(thermal_occupation(p.omega_b, 300.0)));
}

TEST_CASE("pump amplitude") {
    const double omega_L = thz(360.0);
    CHECK(pump_amplitude(0.0, omega_L, thz(15.0)) == 0.0);
    const double e1 = pump_amplitude(8e-3, omega_L, thz(15.0));
    const double e2 = pump_amplitude(8e-3, omega_L, thz(30.0));
    CHECK(e2 / e1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const double si = std::sqrt(2.0 * thz(15.0) * 1e12 * 8e-3 / (constants::hbar * omega_L * 1e12));
    CHECK(e1 == doctest::Approx(si / 1e12).epsilon(1e-14));
    CHECK(pump_amplitude(8e-3, omega_L, thz(15.0), 0.5) == doctest::Approx(e1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(test::code_of([&] { (void)pump_amplitude(-1.0, omega_L, thz(15.0)); }) == ErrorCode::NegativePower);
}

TEST_CASE("laser frequency follows the plasmon detuning unless given") {
    SystemParams p = test::baseline();
    CHECK(laser_frequency(p) == doctest::Approx(p.omega_c + p.omega_b));
    p.omega_L = thz(100.0);
    CHECK(laser_frequency(p) == thz(100.0));
}

TEST_CASE("steady state without pump is the vacuum") {
    SystemParams p = pumped();
    p.J = thz(0.5);
    p.pump_power = 0.0;
    const auto s = steady_state(p);
    CHECK(std::abs(s.a_s) == 0.0);
    CHECK(std::abs(s.b_s) == 0.0);
    CHECK(std::abs(s.c_s) == 0.0);
    CHECK(s.G_eff == 0.0);
}

TEST_CASE("single driven plasmon") {
    SystemParams p = pumped();
    p.g_c = 0.0;
    const auto s = steady_state(p);
    const double eps = pump_amplitude(*p.pump_power, laser_frequency(p), p.kappa_c);
    const cplx exact = eps / cplx(p.kappa_c, p.delta_c);
    CHECK(s.c_s.real() == doctest::Approx(std::abs(exact)).epsilon(1e-14));
    CHECK(s.c_s.imag() == 0.0);
    CHECK(std::abs(s.a_s) == 0.0);
}

TEST_CASE("steady state at the Stokes sideband matches the closed form") {
    const SystemParams p = pumped();
    const auto s = steady_state(p);
    const double omega_L = thz(330.0) + thz(30.0);
    const double eps = std::sqrt(2.0 * p.kappa_c * 1e12 * 8e-3 / (constants::hbar * omega_L * 1e12)) / 1e12;
    const double c_mag = eps / std::hypot(p.kappa_c, p.delta_c);
    CHECK(std::abs(s.c_s) == doctest::Approx(c_mag).epsilon(1e-12));
    CHECK(s.G_eff == doctest::Approx(2.0 * *p.g_c * c_mag).epsilon(1e-12));
    CHECK(s.c_s.imag() == 0.0);
    CHECK(s.c_s.real() > 0.0);
    // Order of magnitude of the quoted plasmon amplitude and coupling.
    CHECK(std::abs(s.c_s) > 5.0);
    CHECK(std::abs(s.c_s) < 20.0);
}

TEST_CASE("WGM amplitude follows the plasmon") {
    SystemParams p = pumped();
    p.J = thz(0.5);
    const auto s = steady_state(p);
    const cplx expected = -cplx(0, 1) * p.J * s.c_s / cplx(p.kappa_a, p.delta_a);
    CHECK(std::abs(s.a_s - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("self-consistent detuning agrees with the approximation") {
    SystemParams p = pumped();
    for (double j : {0.0, 0.5, 1.0}) {
        p.J = thz(j);
        const auto approx = steady_state(p, SteadyStateMode::ApproxDeltaS);
        const auto exact = steady_state(p, SteadyStateMode::SelfConsistent);
        CHECK(std::abs(std::abs(exact.c_s) / std::abs(approx.c_s) - 1.0) < 0.01);

        const double c2 = std::norm(exact.c_s);
        const cplx b = cplx(0, 1) * *p.g_c * c2 / cplx(p.gamma, p.omega_b);
        const double residual = exact.delta_s - (p.delta_c - 2.0 * *p.g_c * b.real());
        CHECK(std::abs(residual) < 1e-10 * p.omega_b);
    }
}

TEST_CASE("pump power inverts the coupling") {
    SystemParams p = pumped();
    p.J = thz(0.3);
    for (const auto& topo : {Topology::single_wgm(), Topology::two_wgm()}) {
        const double G = thz(0.9);
        p.pump_power = pump_power_for_coupling(p, topo, G);
        CHECK(steady_state(p, topo).G_eff == doctest::Approx(G).epsilon(1e-12));
    }
}

TEST_CASE("drift matrix entry pattern") {
    const SystemParams p = test::baseline();
    const auto m = build_model(p, Topology::single_wgm());
    const double ka = p.kappa_a, kc = p.kappa_c, g = p.gamma, da = p.delta_a, dc = p.delta_c, wb = p.omega_b;
    const double J = p.J, G = *p.G;
    RealMatrix a(6, 6);
    a << -ka, da, 0, 0, 0, J,
         -da, -ka, 0, 0, -J, 0,
         0, 0, -g, wb, 0, 0,
         0, 0, -wb, -g, G, 0,
         0, J, 0, 0, -kc, dc,
         -J, 0, G, 0, -dc, -kc;
    CHECK(m.A == a);
    CHECK(m.A(0, 0) == -ka);
    CHECK(m.A(0, 1) == da);
    CHECK(m.A(5, 2) == G);
    CHECK(m.A(4, 5) == dc);

    RealMatrix d = RealMatrix::Zero(6, 6);
    d.diagonal() << ka, ka, g * (2 * 0.01 + 1), g * (2 * 0.01 + 1), kc, kc;
    CHECK(m.D == d);
}

TEST_CASE("decoupled modes give a block-diagonal drift matrix") {
    SystemParams p = test::baseline();
    p.J = 0.0;
    p.G = 0.0;
    const auto m = build_model(p, Topology::single_wgm());
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i / 2 != j / 2) CHECK(m.A(i, j) == 0.0);
    CHECK(linalg::stability(m.A).is_stable);
}

TEST_CASE("diffusion matrices are positive semidefinite") {
    SystemParams p = test::baseline();
    p.delta_a2 = p.omega_b;
    for (const auto& topo : {Topology::single_wgm(), Topology::degenerate_pair(), Topology::two_wgm()}) {
        const auto m = build_model(p, topo);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<RealMatrix>(m.D).eigenvalues();
        CHECK(ev.minCoeff() >= -1e-15 * ev.maxCoeff());
        const int rank = static_cast<int>((ev.array() > 1e-12 * ev.maxCoeff()).count());
        CHECK(rank == (topo.kind == TopologyKind::TwoWgm ? 6 : 2 * static_cast<int>(topo.mode_count())));
    }
}

TEST_CASE("two-resonator model reduces to the single-resonator model when J2 = 0") {
    SystemParams p = test::baseline();
    p.J2 = 0.0;
    p.delta_a2 = p.omega_b;
    const auto single = build_model(p, Topology::single_wgm());
    const auto two = build_model(p, Topology::two_wgm());
    CHECK(two.A.topLeftCorner(6, 6) == single.A);
    CHECK(two.A.block(0, 6, 6, 2).isZero());
    CHECK(two.A.block(6, 0, 2, 6).isZero());

    const RealMatrix v1 = linalg::solve_lyapunov(single.A, single.D);
    const RealMatrix v2 = linalg::solve_lyapunov(two.A, two.D);
    CHECK((v2.topLeftCorner(6, 6) - v1).norm() / v1.norm() < 1e-10);
}

TEST_CASE("shared input channel without cross damping breaks the uncertainty bound") {
    SystemParams p = two_wgm_defaults();
    p.J = 0.0;
    p.G = thz(1.0);
    const auto m = build_model(p, Topology::two_wgm());
    const RealMatrix v = linalg::solve_lyapunov(m.A, m.D);
    const double nu = symplectic_eigenvalues(v).front();
    CHECK(nu - 0.5 == doctest::Approx(-p.kappa_a / (2.0 * p.omega_b)).epsilon(0.01));
    CHECK(test::code_of([&] { (void)steady_covariance(m); }) == ErrorCode::UnphysicalCM);

    p.J = thz(0.87);
    p.G = thz(2.0);
    const auto cm = steady_covariance(build_model(p, Topology::two_wgm()));
    CHECK(cm.min_symplectic_eigenvalue() >= 0.5);
}

TEST_CASE("degenerate pair symmetry") {
    SystemParams p = test::baseline();
    const auto m = degenerate_pair_model(p);
    CHECK(m.A.rows() == 8);
    CHECK(swap_modes(m.A, 0, 3) == m.A);
    CHECK(swap_modes(m.D, 0, 3) == m.D);
    CHECK(m.D(0, 6) == 0.0);

    p.J = 0.0;
    const auto d = degenerate_pair_model(p);
    for (int r : {0, 1, 6, 7})
        for (int c = 0; c < 8; ++c)
            if (r / 2 != c / 2) CHECK(d.A(r, c) == 0.0);
}

TEST_CASE("coupling resolution and parameter validation") {
    SystemParams p = test::baseline();
    p.G.reset();
    CHECK(test::code_of([&] { (void)build_model(p, Topology::single_wgm()); }) == ErrorCode::UnresolvedCoupling);

    p = pumped();
    CHECK(build_model(p, Topology::single_wgm()).G == doctest::Approx(steady_state(p).G_eff));
    p.G = thz(0.1);
    CHECK(test::code_of([&] { (void)build_model(p, Topology::single_wgm()); }) == ErrorCode::InvalidParameter);

    p = test::baseline();
    p.kappa_a = 0.0;
    CHECK(test::code_of([&] { (void)build_model(p, Topology::single_wgm()); }) == ErrorCode::InvalidParameter);
    p = test::baseline();
    p.n_bar = -0.1;
    CHECK(test::code_of([&] { (void)build_model(p, Topology::single_wgm()); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("topology labels") {
    const auto t = Topology::two_wgm();
    CHECK(t.labels == std::vector<std::string>{"a1", "b", "c", "a2"});
    CHECK(t.index_of("a2") == 3);
    CHECK(t.phonon_index() == 1);
    CHECK(test::code_of([&] { (void)t.index_of("x"); }) == ErrorCode::UnknownMode);
    CHECK(parse_topology("degenerate_pair") == TopologyKind::DegenerateWgmPair);
    CHECK(to_string(TopologyKind::SingleWgm) == "single_wgm");
    CHECK(Topology::degenerate_pair().labels == std::vector<std::string>{"a_cw", "b", "c", "a_ccw"});
}
