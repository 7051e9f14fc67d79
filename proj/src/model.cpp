#include "comsim/model.hpp"

#include <cmath>

#include "comsim/error.hpp"

namespace comsim {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

struct OpticalBranch {
    double J;
    double delta;
};

// WGM modes hanging off the plasmon, in topology order after a/a1.
std::vector<OpticalBranch> optical_branches(const SystemParams& p, const Topology& t) {
    switch (t.kind) {
        case TopologyKind::SingleWgm: return {{p.J, p.delta_a}};
        case TopologyKind::DegenerateWgmPair: return {{p.J, p.delta_a}, {p.J, p.delta_a}};
        case TopologyKind::TwoWgm: return {{p.J, p.delta_a}, {p.J_second(), p.delta_a2}};
    }
    return {};
}

// Plasmon denominator i*delta_s + kappa_c + sum_k J_k^2 / (i*Delta_k + kappa_a).
cplx plasmon_denominator(const SystemParams& p, const Topology& t, double delta_s) {
    cplx den = I * delta_s + p.kappa_c;
    for (const auto& br : optical_branches(p, t)) den += br.J * br.J / (I * br.delta + p.kappa_a);
    return den;
}

void place_rotation_block(linalg::RealMatrix& a, Eigen::Index mode, double decay, double freq) {
    const Eigen::Index x = 2 * mode;
    a(x, x) = -decay;
    a(x, x + 1) = freq;
    a(x + 1, x) = -freq;
    a(x + 1, x + 1) = -decay;
}

// Beam-splitter coupling J between optical mode `opt` and the plasmon `pl`.
void place_beam_splitter(linalg::RealMatrix& a, Eigen::Index opt, Eigen::Index pl, double J) {
    a(2 * opt, 2 * pl + 1) = J;
    a(2 * opt + 1, 2 * pl) = -J;
    a(2 * pl, 2 * opt + 1) = J;
    a(2 * pl + 1, 2 * opt) = -J;
}

}  // namespace

void validate(const SystemParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be > 0");
    };
    positive(p.kappa_a, "kappa_a");
    positive(p.kappa_c, "kappa_c");
    positive(p.gamma, "gamma");
    positive(p.omega_b, "omega_b");
    if (!(p.n_bar >= 0.0)) throw Error(ErrorCode::InvalidParameter, "n_bar must be >= 0");
    if (!(p.input_coupling_ratio > 0.0 && p.input_coupling_ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "input_coupling_ratio must lie in (0, 1]");
    }
    if (p.G && p.pump_power) {
        throw Error(ErrorCode::InvalidParameter, "G is given both directly and through the pump power");
    }
}

Topology Topology::from_kind(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::SingleWgm: return single_wgm();
        case TopologyKind::DegenerateWgmPair: return degenerate_pair();
        case TopologyKind::TwoWgm: return two_wgm();
    }
    return single_wgm();
}

std::size_t Topology::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return i;
    }
    throw Error(ErrorCode::UnknownMode, "mode '" + std::string(label) + "' is not part of topology " +
                                            std::string(to_string(kind)));
}

std::string_view to_string(TopologyKind kind) noexcept {
    switch (kind) {
        case TopologyKind::SingleWgm: return "single_wgm";
        case TopologyKind::DegenerateWgmPair: return "degenerate_pair";
        case TopologyKind::TwoWgm: return "two_wgm";
    }
    return "single_wgm";
}

TopologyKind parse_topology(std::string_view name) {
    if (name == "single_wgm") return TopologyKind::SingleWgm;
    if (name == "degenerate_pair") return TopologyKind::DegenerateWgmPair;
    if (name == "two_wgm") return TopologyKind::TwoWgm;
    throw Error(ErrorCode::ConfigError, "unknown topology '" + std::string(name) +
                                            "' (expected single_wgm, degenerate_pair or two_wgm)");
}

double thermal_occupation(double omega_b, double temperature) {
    if (!(temperature > 0.0)) throw Error(ErrorCode::NonPositiveTemperature, "temperature must be > 0 K");
    if (!(omega_b > 0.0)) throw Error(ErrorCode::InvalidParameter, "omega_b must be > 0");
    const double x = constants::hbar * omega_b * constants::per_ps / (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

double effective_n_bar(const SystemParams& p) {
    return p.temperature ? thermal_occupation(p.omega_b, *p.temperature) : p.n_bar;
}

double pump_amplitude(double power, double omega_L, double kappa_c, double input_coupling_ratio) {
    if (power < 0.0) throw Error(ErrorCode::NegativePower, "pump power must be >= 0");
    if (!(omega_L > 0.0)) throw Error(ErrorCode::InvalidParameter, "laser frequency must be > 0");
    const double rate_si = 2.0 * input_coupling_ratio * kappa_c * constants::per_ps * power /
                           (constants::hbar * omega_L * constants::per_ps);
    return std::sqrt(rate_si) / constants::per_ps;
}

double laser_frequency(const SystemParams& p) noexcept { return p.omega_L.value_or(p.omega_c - p.delta_c); }

SteadyAmplitudes steady_state(const SystemParams& p, const Topology& topology, SteadyStateMode mode) {
    validate(p);
    if (!p.pump_power) throw Error(ErrorCode::UnresolvedCoupling, "steady state needs a pump power");
    const double g_c = p.g_c.value_or(0.0);

    SteadyAmplitudes out;
    out.pump_amplitude = pump_amplitude(*p.pump_power, laser_frequency(p), p.kappa_c, p.input_coupling_ratio);
    const double eps = out.pump_amplitude;

    auto plasmon = [&](double delta_s) { return eps / plasmon_denominator(p, topology, delta_s); };
    auto phonon = [&](cplx c) { return I * g_c * std::norm(c) / (I * p.omega_b + p.gamma); };

    double delta_s = p.delta_c;
    cplx c = plasmon(delta_s);
    if (mode == SteadyStateMode::SelfConsistent) {
        constexpr int budget = 10'000;
        double mixing = 1.0;
        double last_step = std::numeric_limits<double>::infinity();
        int it = 0;
        for (; it < budget; ++it) {
            const double target = p.delta_c - 2.0 * g_c * phonon(c).real();
            const double step = target - delta_s;
            const double scale = std::max({std::abs(target), std::abs(p.delta_c), p.kappa_c});
            if (std::abs(step) <= 1e-12 * scale) break;
            if (std::abs(step) > last_step) mixing *= 0.5;
            if (mixing < 1e-6 || !std::isfinite(step)) {
                throw Error(ErrorCode::FixedPointDiverged,
                            "self-consistent detuning iteration diverged; use the ApproxDeltaS mode");
            }
            last_step = std::abs(step);
            delta_s += mixing * step;
            c = plasmon(delta_s);
        }
        if (it == budget) {
            throw Error(ErrorCode::FixedPointDiverged,
                        "self-consistent detuning did not converge within budget; use the ApproxDeltaS mode");
        }
        out.iterations = it;
    }

    const auto branches = optical_branches(p, topology);
    std::vector<cplx> optical;
    for (const auto& br : branches) optical.push_back(-I * br.J * c / (I * br.delta + p.kappa_a));
    const cplx b = phonon(c);

    const double mag = std::abs(c);
    const cplx phase = mag > 0.0 ? std::conj(c) / mag : cplx{1.0, 0.0};
    out.c_s = c * phase;
    out.a_s = optical.front() * phase;
    if (optical.size() > 1) out.a2_s = optical[1] * phase;
    out.b_s = b * phase;
    out.G_eff = 2.0 * g_c * mag;
    out.delta_s = delta_s;
    return out;
}

double resolve_coupling(const SystemParams& p, const Topology& topology, SteadyStateMode mode) {
    if (p.G) return *p.G;
    if (p.pump_power && p.g_c) return steady_state(p, topology, mode).G_eff;
    throw Error(ErrorCode::UnresolvedCoupling, "neither G nor (pump power, g_c) is specified");
}

double pump_power_for_coupling(const SystemParams& p, const Topology& topology, double G) {
    if (!p.g_c || !(*p.g_c > 0.0)) throw Error(ErrorCode::UnresolvedCoupling, "g_c must be > 0 to back-compute power");
    if (G < 0.0) throw Error(ErrorCode::InvalidParameter, "G must be >= 0");
    const double c_mag = G / (2.0 * *p.g_c);
    const double eps = c_mag * std::abs(plasmon_denominator(p, topology, p.delta_c)) * constants::per_ps;
    const double omega_L = laser_frequency(p) * constants::per_ps;
    return eps * eps * constants::hbar * omega_L / (2.0 * p.input_coupling_ratio * p.kappa_c * constants::per_ps);
}

LinearModel build_model(const SystemParams& p, const Topology& topology) {
    validate(p);
    LinearModel m;
    m.topology = topology;
    m.params = p;
    m.G = resolve_coupling(p, topology);

    const Eigen::Index n = static_cast<Eigen::Index>(2 * topology.mode_count());
    m.A = linalg::RealMatrix::Zero(n, n);
    m.D = linalg::RealMatrix::Zero(n, n);

    // Common (a, b, c) core in modes 0, 1, 2.
    constexpr Eigen::Index a = 0, b = 1, c = 2;
    const auto branches = optical_branches(p, topology);
    place_rotation_block(m.A, a, p.kappa_a, branches[0].delta);
    place_rotation_block(m.A, b, p.gamma, p.omega_b);
    place_rotation_block(m.A, c, p.kappa_c, p.delta_c);
    place_beam_splitter(m.A, a, c, branches[0].J);
    // Radiation pressure: Y_b <- G X_c and Y_c <- G X_b.
    m.A(2 * b + 1, 2 * c) = m.G;
    m.A(2 * c + 1, 2 * b) = m.G;

    const double thermal = p.gamma * (2.0 * effective_n_bar(p) + 1.0);
    m.D(0, 0) = m.D(1, 1) = p.kappa_a;
    m.D(2, 2) = m.D(3, 3) = thermal;
    m.D(4, 4) = m.D(5, 5) = p.kappa_c;

    if (topology.mode_count() == 4) {
        constexpr Eigen::Index a2 = 3;
        place_rotation_block(m.A, a2, p.kappa_a, branches[1].delta);
        place_beam_splitter(m.A, a2, c, branches[1].J);
        m.D(6, 6) = m.D(7, 7) = p.kappa_a;
        if (topology.kind == TopologyKind::TwoWgm) {
            // Both WGMs are fed by the same fiber vacuum.
            m.D(0, 6) = m.D(6, 0) = p.kappa_a;
            m.D(1, 7) = m.D(7, 1) = p.kappa_a;
        }
    }
    return m;
}

LinearModel degenerate_pair_model(const SystemParams& p) { return build_model(p, Topology::degenerate_pair()); }

}  // namespace comsim
