#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "comsim/linalg.hpp"

namespace comsim {

// Internal units: angular frequencies in rad/ps, powers in W, temperatures in K.
// Configuration quotes frequencies as value/2pi in THz; thz() converts.
constexpr double thz(double value_over_2pi) noexcept { return 2.0 * std::numbers::pi * value_over_2pi; }
constexpr double to_thz(double rad_per_ps) noexcept { return rad_per_ps / (2.0 * std::numbers::pi); }

namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double per_ps = 1e12;            // s^-1 per ps^-1
}  // namespace constants

struct SystemParams {
    double omega_a = thz(330.0);
    double omega_c = thz(330.0);
    double omega_b = thz(30.0);
    /// Pump frequency. When unset it is derived as omega_c - delta_c.
    std::optional<double> omega_L;

    double delta_a = -thz(30.0);
    double delta_c = -thz(30.0);
    /// Second WGM detuning (two-WGM topology only).
    double delta_a2 = thz(30.0);

    double kappa_a = thz(1e-4);
    double kappa_c = thz(15.0);
    double gamma = thz(0.01);

    /// WGM-plasmon coupling; J1 in the two-WGM topology.
    double J = 0.0;
    /// Second WGM coupling; defaults to J when unset.
    std::optional<double> J2;

    /// Single-photon optomechanical coupling.
    std::optional<double> g_c;
    /// Effective coupling G = 2 g_c |c_s|, when given directly.
    std::optional<double> G;
    /// Pump power in W.
    std::optional<double> pump_power;
    /// Fraction of kappa_c that is the external (pumped) channel.
    double input_coupling_ratio = 1.0;

    double n_bar = 0.01;
    /// When set, n_bar is derived from the Bose occupation at this temperature.
    std::optional<double> temperature;

    [[nodiscard]] double J_second() const noexcept { return J2.value_or(J); }
};

/// Validates decay rates, omega_b and n_bar and the single-source rule for G.
void validate(const SystemParams& p);

enum class TopologyKind { SingleWgm, DegenerateWgmPair, TwoWgm };

struct Topology {
    TopologyKind kind = TopologyKind::SingleWgm;
    /// Canonical mode order; quadratures are (X_k, Y_k) pairs in this order.
    std::vector<std::string> labels;

    static Topology single_wgm() { return {TopologyKind::SingleWgm, {"a", "b", "c"}}; }
    static Topology degenerate_pair() { return {TopologyKind::DegenerateWgmPair, {"a_cw", "b", "c", "a_ccw"}}; }
    static Topology two_wgm() { return {TopologyKind::TwoWgm, {"a1", "b", "c", "a2"}}; }
    static Topology from_kind(TopologyKind kind);

    [[nodiscard]] std::size_t mode_count() const noexcept { return labels.size(); }
    /// Throws UnknownMode.
    [[nodiscard]] std::size_t index_of(std::string_view label) const;
    [[nodiscard]] std::size_t phonon_index() const { return index_of("b"); }
    /// First optical (WGM) mode label.
    [[nodiscard]] const std::string& primary_optical() const noexcept { return labels.front(); }
};

std::string_view to_string(TopologyKind kind) noexcept;
/// Accepts single_wgm, degenerate_pair, two_wgm.
TopologyKind parse_topology(std::string_view name);

enum class SteadyStateMode { ApproxDeltaS, SelfConsistent };

struct SteadyAmplitudes {
    std::complex<double> a_s;
    std::complex<double> b_s;
    std::complex<double> c_s;
    /// Second optical mode (a_ccw or a2) for the 4-mode topologies.
    std::optional<std::complex<double>> a2_s;
    double G_eff = 0.0;
    double delta_s = 0.0;
    double pump_amplitude = 0.0;
    int iterations = 0;
};

struct LinearModel {
    linalg::RealMatrix A;
    linalg::RealMatrix D;
    Topology topology;
    SystemParams params;
    /// Effective coupling used in A.
    double G = 0.0;
};

/// Bose occupation 1/(exp(hbar omega_b / k_B T) - 1). Throws NonPositiveTemperature.
[[nodiscard]] double thermal_occupation(double omega_b, double temperature);
/// n_bar, or the thermal occupation when a temperature is set.
[[nodiscard]] double effective_n_bar(const SystemParams& p);

/// Laser amplitude sqrt(2 eta kappa_c P / (hbar omega_L)) in ps^-1.
[[nodiscard]] double pump_amplitude(double power, double omega_L, double kappa_c, double input_coupling_ratio = 1.0);
[[nodiscard]] double laser_frequency(const SystemParams& p) noexcept;

/// Classical mean fields for a driven network. The plasmon amplitude is
/// rotated onto the positive real axis and the same phase applied to the
/// other amplitudes so that G is real.
[[nodiscard]] SteadyAmplitudes steady_state(const SystemParams& p, const Topology& topology,
                                            SteadyStateMode mode = SteadyStateMode::ApproxDeltaS);
[[nodiscard]] inline SteadyAmplitudes steady_state(const SystemParams& p,
                                                   SteadyStateMode mode = SteadyStateMode::ApproxDeltaS) {
    return steady_state(p, Topology::single_wgm(), mode);
}

/// G given directly, else derived from (P, g_c). Throws UnresolvedCoupling.
[[nodiscard]] double resolve_coupling(const SystemParams& p, const Topology& topology,
                                      SteadyStateMode mode = SteadyStateMode::ApproxDeltaS);

/// Pump power (W) that yields effective coupling G under the ApproxDeltaS steady state.
[[nodiscard]] double pump_power_for_coupling(const SystemParams& p, const Topology& topology, double G);

[[nodiscard]] LinearModel build_model(const SystemParams& p, const Topology& topology);
[[nodiscard]] LinearModel degenerate_pair_model(const SystemParams& p);

}  // namespace comsim
