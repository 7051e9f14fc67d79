#include "comsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "comsim/error.hpp"

namespace comsim::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) {
        // Allow comma separated lists as well.
        std::stringstream parts(tok);
        for (std::string p; std::getline(parts, p, ',');) {
            if (!p.empty()) out.push_back(p);
        }
    }
    return out;
}

double parse_double(std::string_view text, const std::string& where) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(where + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

int parse_int(std::string_view text, const std::string& where) {
    text = trim(text);
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(where + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view text, const std::string& where) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(where + ": expected true or false, got '" + std::string(text) + "'");
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string canonical_param_key(const std::string& key) {
    if (key.rfind("J1_", 0) == 0) return "J_" + key.substr(3);
    if (key.rfind("delta_a1_", 0) == 0) return "delta_a_" + key.substr(9);
    return key;
}

std::string stem_of(const std::string& key) {
    for (std::string_view suffix : {"_thz_over_2pi", "_over_omega_b", "_mw", "_k"}) {
        if (key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0) {
            return key.substr(0, key.size() - suffix.size());
        }
    }
    return key;
}

bool has_stem(const RunConfig& cfg, std::string_view stem) {
    return std::any_of(cfg.params.begin(), cfg.params.end(), [&](const auto& kv) { return stem_of(kv.first) == stem; });
}

void set_param(RunConfig& cfg, const std::string& raw_key, double value, const std::string& where) {
    const std::string key = canonical_param_key(raw_key);
    const auto& known = known_param_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
        for (const auto& k : known) {
            if (stem_of(k) == key) fail(where + ": key '" + raw_key + "' lacks a unit suffix (did you mean '" + k + "'?)");
        }
        fail(where + ": unknown key '" + raw_key + "' in [params]");
    }
    const std::string stem = stem_of(key);
    for (const auto& [k, v] : cfg.params) {
        if (k != key && stem_of(k) == stem && stem != "n_bar") {
            fail(where + ": '" + raw_key + "' conflicts with '" + k + "' (same quantity in another unit)");
        }
    }
    cfg.params[key] = value;
}

AxisConfig parse_axis_text(std::string_view text, const std::string& where) {
    const auto tok = split_ws(text);
    if (tok.size() < 4 || tok.size() > 5) {
        fail(where + ": axis must be '<param> <min> <max> <points> [linear|log]'");
    }
    AxisConfig a;
    a.param = canonical_param_key(tok[0]);
    SweepParam sp{};
    AxisUnit unit{};
    try {
        parse_axis_param(a.param, sp, unit);
    } catch (const Error& e) {
        fail(where + ": " + e.what());
    }
    a.min = parse_double(tok[1], where);
    a.max = parse_double(tok[2], where);
    a.points = parse_int(tok[3], where);
    if (tok.size() == 5) {
        if (tok[4] == "linear") a.scale = AxisScale::Linear;
        else if (tok[4] == "log") a.scale = AxisScale::Log;
        else fail(where + ": axis scale must be linear or log");
    }
    return a;
}

std::string axis_text(const AxisConfig& a) {
    return a.param + " " + format_double(a.min) + " " + format_double(a.max) + " " + std::to_string(a.points) + " " +
           (a.scale == AxisScale::Log ? "log" : "linear");
}

SweepMode parse_mode(std::string_view s, const std::string& where) {
    s = trim(s);
    if (s == "grid") return SweepMode::Grid;
    if (s == "trace") return SweepMode::Trace;
    if (s == "optimum") return SweepMode::Optimum;
    fail(where + ": sweep mode must be grid, trace or optimum");
}

OutputFormat parse_format(std::string_view s, const std::string& where) {
    s = trim(s);
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    fail(where + ": format must be csv or json");
}

// One "key = value" in a named section.
void assign(RunConfig& cfg, const std::string& section, const std::string& key, std::string_view value,
            const std::string& where) {
    if (section == "model") {
        if (key != "topology") fail(where + ": unknown key '" + key + "' in [model]");
        try {
            cfg.topology = parse_topology(trim(value));
        } catch (const Error& e) {
            fail(where + ": " + e.what());
        }
    } else if (section == "params") {
        set_param(cfg, key, parse_double(value, where), where);
    } else if (section == "sweep") {
        if (key == "mode") {
            cfg.mode = parse_mode(value, where);
        } else if (key == "axis1" || key == "axis2") {
            const std::size_t slot = key == "axis1" ? 0 : 1;
            if (cfg.axes.size() < slot + 1) cfg.axes.resize(slot + 1);
            cfg.axes[slot] = parse_axis_text(value, where);
        } else if (key == "outputs") {
            cfg.outputs = split_ws(value);
            for (const auto& o : cfg.outputs) {
                try {
                    (void)parse_output(o);
                } catch (const Error& e) {
                    fail(where + ": " + e.what());
                }
            }
        } else if (key == "delta_a_follows_delta_c") {
            cfg.delta_a_follows_delta_c = parse_bool(value, where);
        } else if (key == "target") {
            cfg.target = std::string(trim(value));
        } else if (key == "trace_both") {
            cfg.trace_both = parse_bool(value, where);
        } else {
            fail(where + ": unknown key '" + key + "' in [sweep]");
        }
    } else if (section == "output") {
        if (key == "format") cfg.format = parse_format(value, where);
        else if (key == "path") cfg.path = std::string(trim(value));
        else if (key == "precision") {
            cfg.precision = parse_int(value, where);
            if (cfg.precision < 1 || cfg.precision > 17) fail(where + ": precision must be in [1, 17]");
        } else fail(where + ": unknown key '" + key + "' in [output]");
    } else {
        fail(where + ": unknown section [" + section + "]");
    }
}

void check_axes_complete(const RunConfig& cfg) {
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        if (cfg.axes[i].param.empty()) fail("[sweep] axis" + std::to_string(i + 1) + " is missing");
    }
}

}  // namespace

const std::vector<std::string>& known_param_keys() {
    static const std::vector<std::string> keys{
        "omega_a_thz_over_2pi", "omega_c_thz_over_2pi", "omega_b_thz_over_2pi", "omega_l_thz_over_2pi",
        "delta_a_thz_over_2pi", "delta_a_over_omega_b", "delta_c_thz_over_2pi", "delta_c_over_omega_b",
        "delta_a2_thz_over_2pi", "delta_a2_over_omega_b", "kappa_a_thz_over_2pi", "kappa_c_thz_over_2pi",
        "gamma_thz_over_2pi", "J_thz_over_2pi", "J2_thz_over_2pi", "g_c_thz_over_2pi",
        "G_thz_over_2pi", "pump_power_mw", "n_bar", "temperature_k",
        "input_coupling_ratio"};
    return keys;
}

RunConfig parse_text(std::string_view text) {
    RunConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::string where = "line " + std::to_string(line_no);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(where + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "model" && section != "params" && section != "sweep" && section != "output") {
                fail(where + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(where + ": expected 'key = value'");
        if (section.empty()) fail(where + ": key outside of a section");
        assign(cfg, section, std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), where);
    }
    check_axes_complete(cfg);
    return cfg;
}

RunConfig parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("JSON: top level must be an object");

    RunConfig cfg;
    auto scalar_text = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    };
    for (const auto& [section, body] : doc.items()) {
        if (!body.is_object()) fail("JSON: section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            const std::string where = "JSON " + section + "." + key;
            if (section == "sweep" && key == "axes") {
                if (!value.is_array()) fail(where + ": must be an array");
                for (const auto& ax : value) {
                    if (!ax.is_object() || !ax.contains("param") || !ax.contains("min") || !ax.contains("max") ||
                        !ax.contains("points")) {
                        fail(where + ": each axis needs param, min, max, points");
                    }
                    std::string line = ax["param"].get<std::string>() + " " + ax["min"].dump() + " " +
                                       ax["max"].dump() + " " + ax["points"].dump();
                    if (ax.contains("scale")) line += " " + ax["scale"].get<std::string>();
                    cfg.axes.push_back(parse_axis_text(line, where));
                }
            } else if (section == "sweep" && key == "outputs" && value.is_array()) {
                std::string joined;
                for (const auto& o : value) joined += o.get<std::string>() + " ";
                assign(cfg, section, key, joined, where);
            } else if (section == "params") {
                if (!value.is_number()) fail(where + ": expected a number");
                set_param(cfg, key, value.get<double>(), where);
            } else {
                assign(cfg, section, key, scalar_text(value), where);
            }
        }
    }
    return cfg;
}

RunConfig parse(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

RunConfig load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) fail("--set expects key=value, got '" + std::string(assignment) + "'");
    std::string key(trim(assignment.substr(0, eq)));
    const std::string_view value = trim(assignment.substr(eq + 1));
    const std::string where = "--set " + key;

    std::string section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
    } else {
        const auto& known = known_param_keys();
        const std::string canon = canonical_param_key(key);
        if (std::find(known.begin(), known.end(), canon) != known.end()) section = "params";
        else if (key == "topology") section = "model";
        else if (key == "format" || key == "path" || key == "precision") section = "output";
        else section = "sweep";
    }
    if (section == "params") {
        // Overrides replace any spelling of the same quantity.
        const std::string stem = stem_of(canonical_param_key(key));
        std::erase_if(cfg.params, [&](const auto& kv) { return stem_of(kv.first) == stem; });
    }
    assign(cfg, section, key, value, where);
    check_axes_complete(cfg);
}

std::string dump_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[model]\n";
    out << "topology = " << to_string(cfg.topology) << "\n\n";
    out << "[params]\n";
    for (const auto& [k, v] : cfg.params) out << k << " = " << format_double(v) << "\n";
    out << "\n[sweep]\n";
    out << "mode = " << to_string(cfg.mode) << "\n";
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) out << "axis" << i + 1 << " = " << axis_text(cfg.axes[i]) << "\n";
    if (!cfg.outputs.empty()) {
        out << "outputs =";
        for (const auto& o : cfg.outputs) out << " " << o;
        out << "\n";
    }
    out << "delta_a_follows_delta_c = " << (cfg.delta_a_follows_delta_c ? "true" : "false") << "\n";
    if (cfg.target) out << "target = " << *cfg.target << "\n";
    out << "trace_both = " << (cfg.trace_both ? "true" : "false") << "\n";
    out << "\n[output]\n";
    out << "format = " << to_string(cfg.format) << "\n";
    if (cfg.path) out << "path = " << *cfg.path << "\n";
    out << "precision = " << cfg.precision << "\n";
    return out.str();
}

std::string dump_json(const RunConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["model"]["topology"] = std::string(to_string(cfg.topology));
    doc["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.params) doc["params"][k] = v;
    auto& sweep = doc["sweep"];
    sweep["mode"] = std::string(to_string(cfg.mode));
    sweep["axes"] = nlohmann::ordered_json::array();
    for (const auto& a : cfg.axes) {
        sweep["axes"].push_back({{"param", a.param},
                                 {"min", a.min},
                                 {"max", a.max},
                                 {"points", a.points},
                                 {"scale", a.scale == AxisScale::Log ? "log" : "linear"}});
    }
    sweep["outputs"] = cfg.outputs;
    sweep["delta_a_follows_delta_c"] = cfg.delta_a_follows_delta_c;
    if (cfg.target) sweep["target"] = *cfg.target;
    sweep["trace_both"] = cfg.trace_both;
    doc["output"]["format"] = std::string(to_string(cfg.format));
    if (cfg.path) doc["output"]["path"] = *cfg.path;
    doc["output"]["precision"] = cfg.precision;
    return doc.dump(2) + "\n";
}

void require_keys(const RunConfig& cfg, Command command) {
    std::vector<std::string> axis_stems;
    if (command == Command::Sweep) {
        if (cfg.axes.empty()) fail("no axes defined");
        for (const auto& a : cfg.axes) {
            axis_stems.push_back(stem_of(a.param));
            if (has_stem(cfg, stem_of(a.param))) {
                fail("[params] sets '" + stem_of(a.param) + "' which is also a sweep axis");
            }
        }
        if (cfg.mode == SweepMode::Optimum) {
            if (cfg.topology != TopologyKind::TwoWgm) fail("optimum mode needs topology = two_wgm");
            if (cfg.axes.size() != 2 || stem_of(cfg.axes[0].param) != "J" || stem_of(cfg.axes[1].param) != "G") {
                fail("optimum mode needs axis1 = J_thz_over_2pi ... and axis2 = G_thz_over_2pi ...");
            }
        }
        if (cfg.mode == SweepMode::Trace && cfg.axes.size() != 2) {
            fail("trace mode needs axis1 (scanned) and axis2 (tuned)");
        }
    }
    auto covered = [&](std::string_view stem) {
        return has_stem(cfg, stem) || std::find(axis_stems.begin(), axis_stems.end(), stem) != axis_stems.end();
    };
    auto need = [&](std::string_view stem, std::string_view key) {
        if (!covered(stem)) fail("missing required key '" + std::string(key) + "' in [params]");
    };

    need("omega_b", "omega_b_thz_over_2pi");
    need("kappa_a", "kappa_a_thz_over_2pi");
    need("kappa_c", "kappa_c_thz_over_2pi");
    need("gamma", "gamma_thz_over_2pi");
    if (!covered("n_bar") && !covered("temperature")) fail("missing required key 'n_bar' (or 'temperature_k') in [params]");
    if (covered("n_bar") && covered("temperature")) fail("give either n_bar or temperature_k, not both");
    need("J", "J_thz_over_2pi");

    const bool laser = covered("omega_l");
    if (!laser) need("delta_c", "delta_c_over_omega_b");
    if (cfg.delta_a_follows_delta_c) {
        if (covered("delta_a")) fail("delta_a is set while delta_a_follows_delta_c = true");
    } else if (!laser) {
        need("delta_a", "delta_a_over_omega_b");
    }
    if (cfg.topology == TopologyKind::TwoWgm) need("delta_a2", "delta_a2_over_omega_b");

    if (covered("G") && covered("pump_power")) fail("give either G_thz_over_2pi or pump_power_mw, not both");
    const bool optimum = command == Command::Sweep && cfg.mode == SweepMode::Optimum;
    if (command == Command::Steady) {
        if (covered("G")) fail("steady derives G from the pump; remove G_thz_over_2pi");
        need("pump_power", "pump_power_mw");
        need("g_c", "g_c_thz_over_2pi");
    } else if (!optimum) {
        if (!covered("G")) {
            if (!covered("pump_power")) fail("missing required key 'G_thz_over_2pi' (or 'pump_power_mw' with 'g_c_thz_over_2pi')");
            need("g_c", "g_c_thz_over_2pi");
        }
    }
}

SystemParams to_system_params(const RunConfig& cfg) {
    SystemParams p;
    auto get = [&](const std::string& key) -> std::optional<double> {
        const auto it = cfg.params.find(key);
        return it == cfg.params.end() ? std::nullopt : std::optional<double>(it->second);
    };
    if (auto v = get("omega_a_thz_over_2pi")) p.omega_a = thz(*v);
    if (auto v = get("omega_c_thz_over_2pi")) p.omega_c = thz(*v);
    if (auto v = get("omega_b_thz_over_2pi")) p.omega_b = thz(*v);
    if (auto v = get("omega_l_thz_over_2pi")) {
        p.omega_L = thz(*v);
        p.delta_a = p.omega_a - *p.omega_L;
        p.delta_c = p.omega_c - *p.omega_L;
    }
    auto detuning = [&](std::string_view stem, double& slot) {
        if (auto v = get(std::string(stem) + "_thz_over_2pi")) slot = thz(*v);
        if (auto v = get(std::string(stem) + "_over_omega_b")) slot = *v * p.omega_b;
    };
    detuning("delta_a", p.delta_a);
    detuning("delta_c", p.delta_c);
    detuning("delta_a2", p.delta_a2);
    if (cfg.delta_a_follows_delta_c) p.delta_a = p.delta_c;

    if (auto v = get("kappa_a_thz_over_2pi")) p.kappa_a = thz(*v);
    if (auto v = get("kappa_c_thz_over_2pi")) p.kappa_c = thz(*v);
    if (auto v = get("gamma_thz_over_2pi")) p.gamma = thz(*v);
    if (auto v = get("J_thz_over_2pi")) p.J = thz(*v);
    if (auto v = get("J2_thz_over_2pi")) p.J2 = thz(*v);
    if (auto v = get("g_c_thz_over_2pi")) p.g_c = thz(*v);
    if (auto v = get("G_thz_over_2pi")) p.G = thz(*v);
    if (auto v = get("pump_power_mw")) p.pump_power = *v * 1e-3;
    if (auto v = get("n_bar")) p.n_bar = *v;
    if (auto v = get("temperature_k")) p.temperature = *v;
    if (auto v = get("input_coupling_ratio")) p.input_coupling_ratio = *v;
    return p;
}

Axis to_axis(const AxisConfig& a) {
    Axis ax;
    parse_axis_param(a.param, ax.param, ax.unit);
    ax.min = a.min;
    ax.max = a.max;
    ax.points = a.points;
    ax.scale = a.scale;
    return ax;
}

std::vector<OutputKind> to_outputs(const RunConfig& cfg) {
    std::vector<OutputKind> out;
    for (const auto& o : cfg.outputs) out.push_back(parse_output(o));
    if (out.empty()) out.push_back(OutputKind::EN);
    return out;
}

SweepSpec to_sweep_spec(const RunConfig& cfg) {
    SweepSpec spec;
    for (const auto& a : cfg.axes) spec.axes.push_back(to_axis(a));
    spec.base = to_system_params(cfg);
    spec.topology = Topology::from_kind(cfg.topology);
    spec.outputs = to_outputs(cfg);
    spec.delta_a_follows_delta_c = cfg.delta_a_follows_delta_c;
    return spec;
}

std::string_view to_string(SweepMode m) noexcept {
    switch (m) {
        case SweepMode::Grid: return "grid";
        case SweepMode::Trace: return "trace";
        case SweepMode::Optimum: return "optimum";
    }
    return "grid";
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::Csv ? "csv" : "json"; }

}  // namespace comsim::config
