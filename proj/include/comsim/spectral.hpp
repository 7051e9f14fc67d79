#pragma once

#include <complex>
#include <optional>
#include <string>

#include "comsim/model.hpp"

namespace comsim {

// Closed-form spectral quantities of the single-WGM network, in units where
// x_zpf = 1 (it cancels between S_FF and the rates A+-).

struct ResponsePair {
    std::complex<double> f_a;
    std::complex<double> f_c;
    /// f_a / f_c; zero when f_c vanishes.
    std::complex<double> ratio;
};

/// Response of the WGM and plasmon to a unit drive at frequency `at`
/// (defaults to the Stokes frequency -omega_b), back-action neglected.
[[nodiscard]] ResponsePair stokes_response(const SystemParams& p, std::optional<double> at = std::nullopt);

/// Radiation-pressure force noise S_FF(omega). Only defined on the resonance
/// delta_c = -omega_b; other detunings throw UnsupportedDetuning.
[[nodiscard]] double noise_spectrum(const SystemParams& p, double omega);

/// Mechanical susceptibility 1 / (omega_b^2 - omega^2 - 2 i gamma omega).
[[nodiscard]] std::complex<double> susceptibility(const SystemParams& p, double omega);
/// Normalized phonon response (gamma/pi) / ((omega + omega_b)^2 + gamma^2).
[[nodiscard]] double phonon_lorentzian(const SystemParams& p, double omega);

enum class CoolingMethod { PointEvaluation, LorentzianIntegral };

struct CoolingRates {
    double A_plus = 0.0;
    /// Quadrature error estimate for A_plus (0 for the point formula).
    double A_plus_error = 0.0;
    /// Approximate emission rate G^2/2 kappa_c/(4 omega_b^2 + kappa_c^2); used in N_b_pert.
    double A_minus = 0.0;
    /// Emission rate from the full spectrum, S_FF(+omega_b).
    double A_minus_exact = 0.0;
    double N_b_pert = 0.0;
    CoolingMethod method = CoolingMethod::PointEvaluation;
};

/// Absorption/emission rates and the perturbative phonon number
/// (2 n_bar gamma + A+) / (2 gamma - A+ + A-). Throws HeatingRunaway when the
/// denominator is not positive and QuadratureNotConverged if the integral fails.
[[nodiscard]] CoolingRates cooling_rates(const SystemParams& p, CoolingMethod method, double rel_tol = 1e-8);

struct SimplifiedAbsorption {
    double rate = 0.0;
    /// Set when J/2pi <= 0.1 THz, outside the approximation's range.
    std::optional<std::string> warning;
};

/// A+ ~ G^2 kappa_a / (2 J^2).
[[nodiscard]] SimplifiedAbsorption simplified_absorption(const SystemParams& p);

std::string_view to_string(CoolingMethod method) noexcept;

}  // namespace comsim
