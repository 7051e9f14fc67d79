#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "comsim/entanglement.hpp"
#include "comsim/quadrature.hpp"
#include "comsim/spectral.hpp"
#include "test_support.hpp"

using namespace comsim;
using cplx = std::complex<double>;

namespace {

double n_b_cm(const SystemParams& p) {
    return phonon_occupation_cm(steady_covariance(build_model(p, Topology::single_wgm())));
}

SystemParams cooling_point(double j, double kappa_a) {
    SystemParams p = test::baseline();
    p.J = thz(j);
    p.kappa_a = thz(kappa_a);
    return p;
}

}  // namespace

TEST_CASE("quadrature on known integrals") {
    const auto s = quad::gauss_kronrod([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
    CHECK(s.converged);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
    const auto e = quad::gauss_kronrod_to_minus_infinity([](double x) { return std::exp(x); }, 0.0, 1e-10);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
    const auto c = quad::gauss_kronrod_to_minus_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1e-10);
    CHECK(c.value == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-10));
    const auto peak = quad::gauss_kronrod([](double x) { return 1e-3 / (x * x + 1e-6); }, -1.0, 1.0, 1e-10);
    CHECK(peak.value == doctest::Approx(2.0 * std::atan(1e3)).epsilon(1e-10));
}

TEST_CASE("phonon response functions") {
    const SystemParams p = test::baseline();
    const auto norm = quad::gauss_kronrod_to_minus_infinity([&](double w) { return phonon_lorentzian(p, w); }, 0.0, 1e-10);
    const double half_line = 0.5 + std::atan(p.omega_b / p.gamma) / std::numbers::pi;
    CHECK(norm.value == doctest::Approx(half_line).epsilon(1e-8));
    CHECK(phonon_lorentzian(p, -p.omega_b) == doctest::Approx(1.0 / (std::numbers::pi * p.gamma)));
    const cplx chi = susceptibility(p, p.omega_b);
    CHECK(std::abs(chi - 1.0 / cplx(0.0, -2.0 * p.gamma * p.omega_b)) < 1e-12 * std::abs(chi));
}

TEST_CASE("response ratio identity over random draws") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SystemParams p;
        p.omega_b = thz(1.0 + 50.0 * u(rng));
        p.J = thz(2.0 * u(rng));
        p.kappa_a = thz(std::pow(10.0, -5.0 + 4.0 * u(rng)));
        p.kappa_c = thz(1.0 + 30.0 * u(rng));
        p.delta_a = p.omega_b * (-3.0 + 4.0 * u(rng));
        p.delta_c = p.omega_b * (-3.0 + 4.0 * u(rng));
        const auto r = stokes_response(p);
        const cplx closed = -cplx(0, 1) * p.J / cplx(p.kappa_a, p.omega_b + p.delta_a);
        if (p.J > 0.0) worst = std::max(worst, std::abs(r.ratio - closed) / std::abs(closed));
        CHECK(std::abs(r.ratio * r.f_c - r.f_a) <= 1e-12 * std::abs(r.f_a) + 1e-300);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("response ratio special cases") {
    SystemParams p = test::baseline();
    p.J = thz(0.5);
    const auto r = stokes_response(p);
    CHECK(std::abs(r.ratio) == doctest::Approx(5000.0).epsilon(1e-9));
    CHECK(std::abs(r.ratio - cplx(0.0, -p.J / p.kappa_a)) < 1e-9 * std::abs(r.ratio));
    p.J = 0.0;
    const auto z = stokes_response(p);
    CHECK(z.f_a == cplx{});
    CHECK(z.ratio == cplx{});
}

TEST_CASE("noise spectrum") {
    SystemParams p = test::baseline();
    p.J = 0.0;
    const double G = *p.G;
    CHECK(noise_spectrum(p, -p.omega_b) == doctest::Approx(G * G / (2.0 * p.kappa_c)).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        p.J = thz(2.0 * u(rng));
        p.kappa_a = thz(std::pow(10.0, -5.0 + 4.0 * u(rng)));
        p.delta_a = p.omega_b * (-3.0 + 4.0 * u(rng));
        double lowest = 1.0;
        for (int k = 0; k < 10'000; ++k) {
            const double w = -4.0 * p.omega_b + 8.0 * p.omega_b * k / 9'999.0;
            lowest = std::min(lowest, noise_spectrum(p, w));
        }
        CHECK(lowest >= 0.0);
    }

    p.delta_c = -0.5 * p.omega_b;
    CHECK(test::code_of([&] { (void)noise_spectrum(p, 0.0); }) == ErrorCode::UnsupportedDetuning);
}

TEST_CASE("noise spectrum dip near the Stokes frequency depends on the WGM linewidth") {
    for (auto [kappa_a, sharp] : {std::pair{1e-4, true}, std::pair{0.1, false}}) {
        const SystemParams p = cooling_point(0.5, kappa_a);
        const double centre = noise_spectrum(p, -p.omega_b);
        const double side = noise_spectrum(p, -p.omega_b + 5.0 * p.gamma);
        if (sharp) CHECK(centre < 0.1 * side);
        else CHECK(centre == doctest::Approx(side).epsilon(0.01));
    }
}

TEST_CASE("point absorption rate is the spectrum at the Stokes frequency") {
    for (double j : {0.0, 0.1, 0.5, 1.5}) {
        for (double ka : {1e-4, 1e-2, 0.1}) {
            const SystemParams p = cooling_point(j, ka);
            const double G = *p.G;
            const double closed = 0.5 * G * G * p.kappa_a / (p.J * p.J + p.kappa_a * p.kappa_c);
            CHECK(cooling_rates(p, CoolingMethod::PointEvaluation).A_plus ==
                  doctest::Approx(closed).epsilon(1e-12));
            CHECK(noise_spectrum(p, -p.omega_b) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("no coupling leaves the thermal occupation") {
    SystemParams p = cooling_point(0.5, 1e-4);
    p.G = 0.0;
    for (auto method : {CoolingMethod::PointEvaluation, CoolingMethod::LorentzianIntegral}) {
        const auto r = cooling_rates(p, method);
        CHECK(r.A_plus == 0.0);
        CHECK(r.A_minus == 0.0);
        CHECK(r.N_b_pert == doctest::Approx(0.01).epsilon(1e-14));
    }
}

TEST_CASE("emission rate forms") {
    const SystemParams p = cooling_point(0.5, 0.1);
    const auto r = cooling_rates(p, CoolingMethod::PointEvaluation);
    const double G = *p.G;
    CHECK(r.A_minus == doctest::Approx(0.5 * G * G * p.kappa_c / (4 * p.omega_b * p.omega_b + p.kappa_c * p.kappa_c)));
    CHECK(r.A_minus_exact == doctest::Approx(noise_spectrum(p, p.omega_b)).epsilon(1e-14));
    CHECK(r.A_minus_exact == doctest::Approx(r.A_minus).epsilon(0.05));
}

TEST_CASE("Lorentzian integral reduces to the point formula for a broad WGM") {
    SystemParams p = cooling_point(0.5, 0.0);
    p.kappa_a = 100.0 * p.gamma;
    const double point = cooling_rates(p, CoolingMethod::PointEvaluation).A_plus;
    const double integral = cooling_rates(p, CoolingMethod::LorentzianIntegral).A_plus;
    CHECK(std::abs(integral / point - 1.0) < 0.01);
}

TEST_CASE("quadrature tolerance halving stays within the error estimate") {
    for (double ka : {1e-4, 1e-3, 0.1}) {
        const SystemParams p = cooling_point(0.5, ka);
        const auto coarse = cooling_rates(p, CoolingMethod::LorentzianIntegral, 1e-6);
        const auto fine = cooling_rates(p, CoolingMethod::LorentzianIntegral, 5e-7);
        CHECK(std::abs(coarse.A_plus - fine.A_plus) <= coarse.A_plus_error + 1e-15 * coarse.A_plus);
    }
}

TEST_CASE("perturbative and covariance phonon numbers") {
    SUBCASE("no WGM coupling") {
        const SystemParams p = cooling_point(0.0, 1e-4);
        const double cm = n_b_cm(p);
        CHECK(std::abs(cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert / cm - 1.0) < 0.05);
    }
    SUBCASE("broad WGM: the point formula is accurate") {
        const SystemParams p = cooling_point(0.5, 0.1);
        const double cm = n_b_cm(p);
        CHECK(std::abs(cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert / cm - 1.0) < 0.05);
    }
    SUBCASE("narrow WGM: the point formula fails and the Lorentzian integral recovers most of the gap") {
        const SystemParams p = cooling_point(0.5, 1e-4);
        const double cm = n_b_cm(p);
        const double point_err = std::abs(cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert / cm - 1.0);
        const double lorentz_err = std::abs(cooling_rates(p, CoolingMethod::LorentzianIntegral).N_b_pert / cm - 1.0);
        CHECK(point_err > 0.5);
        CHECK(lorentz_err < 0.1 * point_err);
    }
}

TEST_CASE("perturbative phonon number is monotone in J and G") {
    for (double ka : {1e-4, 0.1}) {
        for (double g = 0.1; g <= 0.71; g += 0.1) {
            double last = std::numeric_limits<double>::infinity();
            for (double j = 0.1; j <= 1.5001; j += 0.05) {
                SystemParams p = cooling_point(j, ka);
                p.G = thz(g);
                const double n = cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert;
                CHECK(n <= last * (1.0 + 1e-12));
                last = n;
            }
        }
        for (double j = 0.1; j <= 1.5001; j += 0.2) {
            double last = 0.0;
            for (double g = 0.05; g <= 2.0001; g += 0.05) {
                SystemParams p = cooling_point(j, ka);
                p.G = thz(g);
                try {
                    const double n = cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert;
                    CHECK(n >= last * (1.0 - 1e-12));
                    last = n;
                } catch (const Error& e) {
                    CHECK(e.code() == ErrorCode::HeatingRunaway);
                    break;
                }
            }
        }
    }
}

TEST_CASE("heating runaway is reported") {
    SystemParams p = cooling_point(0.0, 1e-4);
    p.G = thz(1.0);
    CHECK(test::code_of([&] { (void)cooling_rates(p, CoolingMethod::PointEvaluation); }) ==
          ErrorCode::HeatingRunaway);
}

TEST_CASE("simplified absorption rate") {
    SystemParams p = cooling_point(0.5, 1e-4);
    const auto s = simplified_absorption(p);
    const double exact = cooling_rates(p, CoolingMethod::PointEvaluation).A_plus;
    CHECK(std::abs(s.rate / exact - 1.0) < 0.01);
    CHECK_FALSE(s.warning.has_value());
    p.J *= 2.0;
    CHECK(simplified_absorption(p).rate == doctest::Approx(s.rate / 4.0).epsilon(1e-14));
    p.J = thz(0.05);
    const auto w = simplified_absorption(p);
    CHECK(w.warning.has_value());
    CHECK(w.rate > 0.0);
}
