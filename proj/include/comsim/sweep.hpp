#pragma once

#include <optional>
#include <string>
#include <vector>

#include "comsim/entanglement.hpp"
#include "comsim/model.hpp"

namespace comsim {

enum class SweepParam { J, J2, G, DeltaA, DeltaC, DeltaA2, KappaA, PumpPower };

/// How axis values are quoted: value/2pi in THz, a ratio to omega_b
/// (detunings only), or mW (pump power).
enum class AxisUnit { ThzOver2Pi, OverOmegaB, MilliWatt };
enum class AxisScale { Linear, Log };

struct Axis {
    SweepParam param = SweepParam::J;
    AxisUnit unit = AxisUnit::ThzOver2Pi;
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    AxisScale scale = AxisScale::Linear;

    /// Config key name of the axis, e.g. "J_thz_over_2pi".
    [[nodiscard]] std::string name() const;
    /// Grid values in axis units; a single point when points == 1.
    [[nodiscard]] std::vector<double> values() const;
};

/// Parses an axis parameter key such as "delta_c_over_omega_b" or "pump_power_mw".
/// Accepts J1/delta_a1 as aliases of J/delta_a. Throws ConfigError.
void parse_axis_param(const std::string& key, SweepParam& param, AxisUnit& unit);

/// Writes an axis value (in axis units) into the parameter set.
void apply_axis(SystemParams& p, SweepParam param, AxisUnit unit, double value);

enum class OutputKind { EN, NbCm, NbPert, NbPertLorentz, Duan, DuanOptimized, AbsRac };

std::string_view to_string(OutputKind kind) noexcept;
/// "EN", "N_b_cm", "N_b_pert", "N_b_pert_lorentz", "duan", "duan_opt", "abs_R_ac".
OutputKind parse_output(std::string_view name);

struct SweepSpec {
    std::vector<Axis> axes;
    SystemParams base;
    Topology topology = Topology::single_wgm();
    std::vector<OutputKind> outputs{OutputKind::EN};
    /// Keep delta_a equal to delta_c at every point.
    bool delta_a_follows_delta_c = false;
};

/// Throws ConfigError on an invalid spec.
void validate(const SweepSpec& spec);

/// Column names for the requested outputs, in fixed registry order.
[[nodiscard]] std::vector<std::string> output_columns(const Topology& topology, const std::vector<OutputKind>& outputs);
/// Bipartition reported by the duan columns: first two optical modes, or a|b.
[[nodiscard]] Bipartition duan_bipartition(const Topology& topology);

struct PointResult {
    bool stable = false;
    double margin = 0.0;
    std::vector<std::optional<double>> values;
    std::optional<std::string> error;
};

/// Full single-point pipeline: model, stability, Lyapunov, metrics.
/// Module errors are caught and reported, never thrown.
[[nodiscard]] PointResult evaluate_point(const SystemParams& p, const Topology& topology,
                                         const std::vector<OutputKind>& outputs);

struct SweepRecord {
    std::vector<double> axis_values;
    bool stable = false;
    double margin = 0.0;
    std::vector<std::optional<double>> outputs;
    std::optional<std::string> error;
};

struct SweepTable {
    std::vector<std::string> axis_names;
    std::vector<std::string> output_names;
    std::vector<SweepRecord> records;
};

/// Row-major over axes (last axis fastest). threads == 0 uses the machine's
/// parallelism; the table is identical for any thread count.
[[nodiscard]] SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

struct TracePoint {
    double scanned = 0.0;
    std::optional<double> tuned_at_max;
    std::optional<double> max_EN;
    std::optional<double> N_b_cm;
    /// Golden-section refinement could not bracket; value from a fine grid.
    bool fallback = false;
    std::optional<std::string> error;
};

struct TraceSpec {
    SystemParams base;
    Topology topology = Topology::single_wgm();
    /// Defaults to (first optical mode | b).
    std::optional<Bipartition> target;
    bool delta_a_follows_delta_c = false;
};

/// Maximizes E_N over the tuned axis at one scanned-parameter setting
/// (already applied to p). Throws NoStablePoint.
[[nodiscard]] TracePoint local_max_along(const SystemParams& p, const Axis& tuned, const TraceSpec& spec);

/// For each scanned value, the stable maximum of E_N along the tuned axis:
/// coarse grid, then golden-section refinement to 1e-3 of the tuned span.
[[nodiscard]] std::vector<TracePoint> trace_local_max(const Axis& tuned, const Axis& scanned, const TraceSpec& spec,
                                                      unsigned threads = 0);

struct OptimumSpec {
    SystemParams base;
    /// J = J1 = J2 range in THz/2pi and the G range; a range with min == max fixes the value.
    Axis J_axis{SweepParam::J, AxisUnit::ThzOver2Pi, 0.1, 1.5, 57, AxisScale::Linear};
    Axis G_axis{SweepParam::G, AxisUnit::ThzOver2Pi, 0.1, 2.0, 39, AxisScale::Linear};
};

struct OptimumResult {
    double J = 0.0;
    double G = 0.0;
    double EN = 0.0;
    double duan = 0.0;
    double duan_optimized = 0.0;
    /// Pump power in W for this G.
    double P_required = 0.0;
};

/// Baseline two-WGM parameters: delta_a1 = -omega_b, delta_a2 = +omega_b,
/// delta_c = 0, kappa_a/2pi = 1e-3 THz, g_c/2pi = 50 GHz.
[[nodiscard]] SystemParams two_wgm_defaults();

/// Maximizes E_N(a1|a2) over (J, G) on the two-WGM topology and back-computes
/// the pump power. Throws NoStablePoint.
[[nodiscard]] OptimumResult two_wgm_optimum(const OptimumSpec& spec);

}  // namespace comsim
