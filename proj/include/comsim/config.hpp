#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "comsim/model.hpp"
#include "comsim/sweep.hpp"

namespace comsim::config {

// Run configuration. Text form:
//
//   [model]
//   topology = single_wgm
//   [params]
//   kappa_c_thz_over_2pi = 15
//   delta_c_over_omega_b = -1
//   [sweep]
//   mode = grid
//   axis1 = J_thz_over_2pi 0 1.5 61 linear
//   outputs = EN N_b_cm
//   [output]
//   format = csv
//
// Parameter keys carry their unit in the suffix: *_thz_over_2pi (value/2pi
// in THz), *_over_omega_b (detunings), *_mw, *_k; n_bar and
// input_coupling_ratio are dimensionless. A JSON document with the same
// sections is accepted as well.

enum class Command { Steady, Entangle, Sweep };
enum class SweepMode { Grid, Trace, Optimum };
enum class OutputFormat { Csv, Json };

struct AxisConfig {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    int points = 2;
    AxisScale scale = AxisScale::Linear;

    bool operator==(const AxisConfig&) const = default;
};

struct RunConfig {
    TopologyKind topology = TopologyKind::SingleWgm;
    /// Parameter entries in configuration units, keyed by their config name.
    std::map<std::string, double> params;

    SweepMode mode = SweepMode::Grid;
    std::vector<AxisConfig> axes;
    std::vector<std::string> outputs;
    bool delta_a_follows_delta_c = false;
    /// Trace mode: bipartition "m|n" whose E_N is maximized.
    std::optional<std::string> target;
    /// Trace mode: also trace with the two axes swapped.
    bool trace_both = false;

    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> path;
    int precision = 12;

    bool operator==(const RunConfig&) const = default;
};

/// Keys accepted in [params].
[[nodiscard]] const std::vector<std::string>& known_param_keys();

/// Throws Error(ConfigError) with "line N" / key diagnostics.
[[nodiscard]] RunConfig parse_text(std::string_view text);
[[nodiscard]] RunConfig parse_json(std::string_view text);
/// Picks JSON when the first non-blank character is '{'.
[[nodiscard]] RunConfig parse(std::string_view text);
[[nodiscard]] RunConfig load_file(const std::string& path);

/// Applies "section.key=value" or a bare key (params first, then the other sections).
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Canonical text form; parse_text(dump_text(c)) == c.
[[nodiscard]] std::string dump_text(const RunConfig& cfg);
[[nodiscard]] std::string dump_json(const RunConfig& cfg);

/// Checks that every key the command needs is present. Throws ConfigError
/// naming the first missing key.
void require_keys(const RunConfig& cfg, Command command);

/// Physical parameters in internal units. Keys that a sweep axis will set may be absent.
[[nodiscard]] SystemParams to_system_params(const RunConfig& cfg);
[[nodiscard]] Axis to_axis(const AxisConfig& a);
[[nodiscard]] SweepSpec to_sweep_spec(const RunConfig& cfg);
[[nodiscard]] std::vector<OutputKind> to_outputs(const RunConfig& cfg);

std::string_view to_string(SweepMode m) noexcept;
std::string_view to_string(OutputFormat f) noexcept;

}  // namespace comsim::config
