#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "comsim/bundles.hpp"
#include "comsim/config.hpp"
#include "comsim/entanglement.hpp"
#include "comsim/error.hpp"
#include "comsim/linalg.hpp"
#include "comsim/report.hpp"
#include "comsim/spectral.hpp"
#include "comsim/sweep.hpp"

namespace comsim::app {

namespace {

using report::Cell;
using report::Table;

struct Options {
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> format;
    std::optional<std::string> out_path;
    bool dump_config = false;
    std::string bundle;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigError:
        case ErrorCode::InvalidParameter:
        case ErrorCode::NegativePower:
        case ErrorCode::NonPositiveTemperature:
        case ErrorCode::UnknownMode:
        case ErrorCode::UnresolvedCoupling:
        case ErrorCode::UnsupportedDetuning:
            return ConfigFailure;
        case ErrorCode::Unstable:
        case ErrorCode::NoStablePoint:
            return UnstableModel;
        default:
            return NumericalFailure;
    }
}

unsigned thread_count() {
    if (const char* env = std::getenv("COMSIM_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw Error(ErrorCode::ConfigError, "COMSIM_THREADS must be a positive integer");
    }
    return 0;
}

config::RunConfig load(const Options& opt) {
    config::RunConfig cfg;
    if (!opt.bundle.empty()) {
        const auto b = bundles::find(opt.bundle);
        if (!b) throw Error(ErrorCode::ConfigError, "unknown bundle '" + opt.bundle + "'");
        cfg = config::parse_text(b->config);
    } else if (opt.config_path) {
        cfg = config::load_file(*opt.config_path);
    }
    for (const auto& s : opt.overrides) config::apply_override(cfg, s);
    if (opt.format) config::apply_override(cfg, "output.format=" + *opt.format);
    if (opt.out_path) cfg.path = *opt.out_path;
    return cfg;
}

// Writes to the configured path, or to `out`.
template <class Fn>
void emit(const config::RunConfig& cfg, std::ostream& out, Fn&& write) {
    if (!cfg.path) {
        write(out);
        return;
    }
    std::ofstream file(*cfg.path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ConfigError, "cannot write '" + *cfg.path + "'");
    write(file);
    if (!file) throw Error(ErrorCode::ConfigError, "write to '" + *cfg.path + "' failed");
}

// Single-point reports: "key = value" lines, or a one-row table when a format
// was requested explicitly.
void emit_report(const config::RunConfig& cfg, bool table_format, const Table& t, std::ostream& out) {
    emit(cfg, out, [&](std::ostream& os) {
        if (!table_format) {
            const auto& row = t.rows.front();
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                const Cell& c = row[i];
                os << t.columns[i] << " = ";
                if (std::holds_alternative<double>(c)) os << report::format_number(std::get<double>(c), cfg.precision);
                else if (std::holds_alternative<std::string>(c)) os << std::get<std::string>(c);
                else if (std::holds_alternative<bool>(c)) os << (std::get<bool>(c) ? "true" : "false");
                else os << "null";
                os << '\n';
            }
        } else if (cfg.format == config::OutputFormat::Json) {
            report::write_json(os, t, cfg.precision);
        } else {
            report::write_csv(os, t, cfg.precision);
        }
    });
}

void add(Table& t, std::string name, Cell value) {
    if (t.rows.empty()) t.rows.emplace_back();
    t.columns.push_back(std::move(name));
    t.rows.front().push_back(std::move(value));
}

int cmd_steady(const config::RunConfig& cfg, bool table_format, std::ostream& out) {
    config::require_keys(cfg, config::Command::Steady);
    const auto p = config::to_system_params(cfg);
    const auto topology = Topology::from_kind(cfg.topology);
    const auto s = steady_state(p, topology);

    SystemParams fixed = p;
    fixed.pump_power.reset();
    fixed.G = s.G_eff;
    const auto model = build_model(fixed, topology);
    const auto st = linalg::stability(model.A);

    Table t;
    add(t, "abs_a_s", std::abs(s.a_s));
    if (s.a2_s) add(t, "abs_a2_s", std::abs(*s.a2_s));
    add(t, "abs_b_s", std::abs(s.b_s));
    add(t, "abs_c_s", std::abs(s.c_s));
    add(t, "G_thz_over_2pi", to_thz(s.G_eff));
    add(t, "delta_s_thz_over_2pi", to_thz(s.delta_s));
    add(t, "stable", st.is_stable);
    add(t, "margin", st.margin);
    emit_report(cfg, table_format, t, out);
    return st.is_stable ? Ok : UnstableModel;
}

int cmd_entangle(const config::RunConfig& cfg, bool table_format, std::ostream& out, std::ostream& err) {
    config::require_keys(cfg, config::Command::Entangle);
    const auto p = config::to_system_params(cfg);
    const auto topology = Topology::from_kind(cfg.topology);
    const auto model = build_model(p, topology);
    const auto st = linalg::stability(model.A);

    Table t;
    add(t, "stable", st.is_stable);
    add(t, "margin", st.margin);
    add(t, "G_thz_over_2pi", to_thz(model.G));
    if (!st.is_stable) {
        emit_report(cfg, table_format, t, out);
        err << "model is unstable (largest eigenvalue real part " << st.margin << ")\n";
        return UnstableModel;
    }

    const auto cm = steady_covariance(model);
    for (const auto& bp : all_bipartitions(topology)) add(t, "EN_" + bp.name(), log_negativity(cm, bp));
    add(t, "N_b_cm", phonon_occupation_cm(cm));

    const bool single = topology.kind == TopologyKind::SingleWgm;
    if (single && std::abs(p.delta_c + p.omega_b) <= 1e-9 * p.omega_b) {
        SystemParams fixed = p;
        fixed.pump_power.reset();
        fixed.G = model.G;
        for (auto method : {CoolingMethod::PointEvaluation, CoolingMethod::LorentzianIntegral}) {
            const std::string col = method == CoolingMethod::PointEvaluation ? "N_b_pert" : "N_b_pert_lorentz";
            try {
                add(t, col, cooling_rates(fixed, method).N_b_pert);
            } catch (const Error& e) {
                add(t, col, Cell{});
                err << col << ": " << e.what() << '\n';
            }
        }
    }
    const auto duan_bp = duan_bipartition(topology);
    add(t, "duan_" + duan_bp.name(), duan_sum(cm, duan_bp));
    add(t, "duan_opt_" + duan_bp.name(), duan_sum_optimized(cm, duan_bp));
    if (single) add(t, "abs_R_ac", std::abs(stokes_response(p).ratio));
    emit_report(cfg, table_format, t, out);
    return Ok;
}

Bipartition parse_target(const std::string& text, const Topology& topology) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw Error(ErrorCode::ConfigError, "target must look like 'a|b'");
    Bipartition bp{text.substr(0, bar), text.substr(bar + 1)};
    try {
        (void)topology.index_of(bp.m);
        (void)topology.index_of(bp.n);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, std::string("target: ") + e.what());
    }
    return bp;
}

int cmd_sweep(const config::RunConfig& cfg, std::ostream& out) {
    config::require_keys(cfg, config::Command::Sweep);
    const unsigned threads = thread_count();
    Table table;

    if (cfg.mode == config::SweepMode::Optimum) {
        OptimumSpec spec;
        spec.base = config::to_system_params(cfg);
        spec.J_axis = config::to_axis(cfg.axes[0]);
        spec.G_axis = config::to_axis(cfg.axes[1]);
        table = report::optimum_table(two_wgm_optimum(spec));
    } else {
        const auto spec = config::to_sweep_spec(cfg);
        validate(spec);
        if (cfg.mode == config::SweepMode::Grid) {
            table = report::sweep_table(run_sweep(spec, threads));
        } else {
            TraceSpec trace{spec.base, spec.topology, std::nullopt, spec.delta_a_follows_delta_c};
            if (cfg.target) trace.target = parse_target(*cfg.target, spec.topology);
            const Axis& scanned = spec.axes[0];
            const Axis& tuned = spec.axes[1];
            table = report::trace_table(scanned, tuned, trace_local_max(tuned, scanned, trace, threads));
            if (cfg.trace_both) {
                report::append(table,
                               report::trace_table(tuned, scanned, trace_local_max(scanned, tuned, trace, threads)));
            }
        }
    }
    emit(cfg, out, [&](std::ostream& os) {
        if (cfg.format == config::OutputFormat::Json) report::write_json(os, table, cfg.precision);
        else report::write_csv(os, table, cfg.precision);
    });
    return Ok;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "Configuration file (sectioned text or JSON)");
    cmd->add_option("--set", opt.overrides, "Override a key, e.g. --set J_thz_over_2pi=0.7")->allow_extra_args(false);
    cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opt.out_path, "Output file (default: stdout)");
    cmd->add_flag("--dump-config", opt.dump_config, "Print the effective configuration and exit");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state entanglement and cooling of a plasmon / WGM / molecular-vibration network"};
    app.require_subcommand(1);
    Options opt;
    auto* steady = app.add_subcommand("steady", "Mean fields and effective coupling for a pumped system");
    auto* entangle = app.add_subcommand("entangle", "Single-point entanglement and cooling report");
    auto* sweep = app.add_subcommand("sweep", "Grid sweep, local-maximum trace or two-resonator optimum");
    auto* reproduce = app.add_subcommand("reproduce", "Run a bundled figure configuration");
    for (auto* cmd : {steady, entangle, sweep, reproduce}) add_common(cmd, opt);
    reproduce->add_option("name", opt.bundle, "Bundle name; omit to list bundles");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : ConfigFailure;
    }

    try {
        if (reproduce->parsed() && opt.bundle.empty()) {
            for (const auto& b : bundles::all()) out << b.name << "  " << b.description << '\n';
            return Ok;
        }
        const auto cfg = load(opt);
        if (opt.dump_config) {
            out << (cfg.format == config::OutputFormat::Json ? config::dump_json(cfg) : config::dump_text(cfg));
            return Ok;
        }
        const bool table_format = opt.format.has_value();
        if (steady->parsed()) return cmd_steady(cfg, table_format, out);
        if (entangle->parsed()) return cmd_entangle(cfg, table_format, out, err);
        return cmd_sweep(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return NumericalFailure;
    }
}

}  // namespace comsim::app
