#include "comsim/spectral.hpp"

#include <cmath>
#include <numbers>

#include "comsim/error.hpp"
#include "comsim/quadrature.hpp"

namespace comsim {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

void require_stokes_resonance(const SystemParams& p) {
    if (std::abs(p.delta_c + p.omega_b) > 1e-9 * p.omega_b) {
        throw Error(ErrorCode::UnsupportedDetuning, "noise spectrum is only available at delta_c = -omega_b");
    }
}

double coupling(const SystemParams& p) { return resolve_coupling(p, Topology::single_wgm()); }

// S_FF with G^2/2 factored out.
double spectrum_shape(const SystemParams& p, double omega) {
    const double J2 = p.J * p.J;
    const double ka = p.kappa_a;
    const double kc = p.kappa_c;
    const double u = omega - p.delta_a;
    const double w = omega + p.omega_b;
    const double num = J2 * ka + kc * (ka * ka + u * u);
    const double den = J2 * J2 + 2.0 * J2 * (ka * kc - u * w) + (ka * ka + u * u) * (kc * kc + w * w);
    return num / den;
}

}  // namespace

ResponsePair stokes_response(const SystemParams& p, std::optional<double> at) {
    const double omega = at.value_or(-p.omega_b);
    const cplx wgm = p.kappa_a + I * (p.delta_a - omega);
    const cplx plasmon = p.kappa_c + I * (p.delta_c - omega);
    const cplx den = p.J * p.J + wgm * plasmon;
    ResponsePair r;
    r.f_a = -I * p.J / den;
    r.f_c = wgm / den;
    r.ratio = r.f_c != cplx{} ? r.f_a / r.f_c : cplx{};
    return r;
}

double noise_spectrum(const SystemParams& p, double omega) {
    require_stokes_resonance(p);
    const double G = coupling(p);
    return 0.5 * G * G * spectrum_shape(p, omega);
}

cplx susceptibility(const SystemParams& p, double omega) {
    return 1.0 / (p.omega_b * p.omega_b - omega * omega - 2.0 * I * p.gamma * omega);
}

double phonon_lorentzian(const SystemParams& p, double omega) {
    const double x = omega + p.omega_b;
    return (p.gamma / std::numbers::pi) / (x * x + p.gamma * p.gamma);
}

CoolingRates cooling_rates(const SystemParams& p, CoolingMethod method, double rel_tol) {
    validate(p);
    require_stokes_resonance(p);
    const double G = coupling(p);
    const double half_g2 = 0.5 * G * G;

    CoolingRates out;
    out.method = method;
    out.A_minus = half_g2 * p.kappa_c / (4.0 * p.omega_b * p.omega_b + p.kappa_c * p.kappa_c);
    out.A_minus_exact = half_g2 * spectrum_shape(p, p.omega_b);

    if (method == CoolingMethod::PointEvaluation) {
        out.A_plus = half_g2 * spectrum_shape(p, -p.omega_b);
    } else if (G != 0.0) {
        auto integrand = [&](double omega) { return spectrum_shape(p, omega) * phonon_lorentzian(p, omega); };
        const double peak = -p.omega_b;
        const double lo = peak - 50.0 * p.gamma;
        const double hi = std::min(0.0, peak + 50.0 * p.gamma);

        const auto left = quad::gauss_kronrod(integrand, lo, peak, rel_tol);
        const auto right = quad::gauss_kronrod(integrand, peak, hi, rel_tol);
        const double core = left.value + right.value;
        const double tail_tol = 0.1 * rel_tol * std::abs(core);
        const auto far = quad::gauss_kronrod_to_minus_infinity(integrand, lo, 0.0, tail_tol);
        quad::Result near;
        near.converged = true;
        if (hi < 0.0) near = quad::gauss_kronrod(integrand, hi, 0.0, 0.0, tail_tol);

        if (!left.converged || !right.converged || !far.converged || !near.converged) {
            throw Error(ErrorCode::QuadratureNotConverged, "Lorentzian-weighted absorption integral did not converge");
        }
        out.A_plus = half_g2 * (core + far.value + near.value);
        out.A_plus_error = half_g2 * (left.abs_error + right.abs_error + far.abs_error + near.abs_error);
    }

    const double n_bar = effective_n_bar(p);
    const double den = 2.0 * p.gamma - out.A_plus + out.A_minus;
    if (!(den > 0.0)) {
        throw Error(ErrorCode::HeatingRunaway, "2 gamma - A+ + A- <= 0: perturbative cooling breaks down");
    }
    out.N_b_pert = (2.0 * n_bar * p.gamma + out.A_plus) / den;
    return out;
}

SimplifiedAbsorption simplified_absorption(const SystemParams& p) {
    const double G = coupling(p);
    SimplifiedAbsorption out;
    out.rate = G * G * p.kappa_a / (2.0 * p.J * p.J);
    if (!(p.J > thz(0.1))) out.warning = "simplified absorption rate assumes J/2pi > 0.1 THz";
    return out;
}

std::string_view to_string(CoolingMethod method) noexcept {
    return method == CoolingMethod::PointEvaluation ? "point" : "lorentzian";
}

}  // namespace comsim
