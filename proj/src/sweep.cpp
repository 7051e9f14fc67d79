#include "comsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "comsim/error.hpp"
#include "comsim/spectral.hpp"

namespace comsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string_view param_stem(SweepParam p) {
    switch (p) {
        case SweepParam::J: return "J";
        case SweepParam::J2: return "J2";
        case SweepParam::G: return "G";
        case SweepParam::DeltaA: return "delta_a";
        case SweepParam::DeltaC: return "delta_c";
        case SweepParam::DeltaA2: return "delta_a2";
        case SweepParam::KappaA: return "kappa_a";
        case SweepParam::PumpPower: return "pump_power";
    }
    return "";
}

bool is_detuning(SweepParam p) {
    return p == SweepParam::DeltaA || p == SweepParam::DeltaC || p == SweepParam::DeltaA2;
}

std::vector<OutputKind> normalized(std::vector<OutputKind> outputs) {
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
    return outputs;
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work, 1)));
}

// Runs body(i) for i in [0, count) on a small worker pool.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    threads = resolve_threads(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
}

std::string error_text(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(to_string(err->code()));
    return e.what();
}

// Evaluates E_N for one bipartition; -inf when unstable or failing.
struct EnProbe {
    const TraceSpec& spec;
    Bipartition target;
    SweepParam param;
    AxisUnit unit;

    [[nodiscard]] SystemParams at(SystemParams p, double x) const {
        apply_axis(p, param, unit, x);
        if (spec.delta_a_follows_delta_c) p.delta_a = p.delta_c;
        return p;
    }

    double operator()(const SystemParams& base, double x) const {
        try {
            const auto model = build_model(at(base, x), spec.topology);
            if (!linalg::stability(model.A).is_stable) return kNegInf;
            return log_negativity(steady_covariance(model), target);
        } catch (const Error&) {
            return kNegInf;
        }
    }
};

// Golden-section maximization of f on [lo, hi] in the coordinate `to_x(u)`.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

std::string Axis::name() const {
    std::string stem(param_stem(param));
    switch (unit) {
        case AxisUnit::ThzOver2Pi: return stem + "_thz_over_2pi";
        case AxisUnit::OverOmegaB: return stem + "_over_omega_b";
        case AxisUnit::MilliWatt: return stem + "_mw";
    }
    return stem;
}

std::vector<double> Axis::values() const {
    if (points <= 1 || min == max) return {min};
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        v[static_cast<std::size_t>(i)] =
            scale == AxisScale::Log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
    }
    v.back() = max;
    return v;
}

void parse_axis_param(const std::string& key, SweepParam& param, AxisUnit& unit) {
    struct Suffix {
        std::string_view text;
        AxisUnit unit;
    };
    constexpr Suffix suffixes[] = {{"_thz_over_2pi", AxisUnit::ThzOver2Pi},
                                   {"_over_omega_b", AxisUnit::OverOmegaB},
                                   {"_mw", AxisUnit::MilliWatt}};
    for (const auto& s : suffixes) {
        if (key.size() <= s.text.size() || key.compare(key.size() - s.text.size(), s.text.size(), s.text) != 0) continue;
        const std::string stem = key.substr(0, key.size() - s.text.size());
        unit = s.unit;
        if (stem == "J" || stem == "J1") param = SweepParam::J;
        else if (stem == "J2") param = SweepParam::J2;
        else if (stem == "G") param = SweepParam::G;
        else if (stem == "delta_a" || stem == "delta_a1") param = SweepParam::DeltaA;
        else if (stem == "delta_c") param = SweepParam::DeltaC;
        else if (stem == "delta_a2") param = SweepParam::DeltaA2;
        else if (stem == "kappa_a") param = SweepParam::KappaA;
        else if (stem == "pump_power") param = SweepParam::PumpPower;
        else break;

        const bool ok = (unit == AxisUnit::MilliWatt) == (param == SweepParam::PumpPower) &&
                        (unit != AxisUnit::OverOmegaB || is_detuning(param));
        if (!ok) throw Error(ErrorCode::ConfigError, "axis '" + key + "' has a unit suffix that does not fit");
        return;
    }
    throw Error(ErrorCode::ConfigError,
                "unknown axis parameter '" + key +
                    "' (expected J, J1, J2, G, delta_a, delta_a1, delta_a2, delta_c, kappa_a, pump_power with a unit suffix)");
}

void apply_axis(SystemParams& p, SweepParam param, AxisUnit unit, double value) {
    double v = value;
    if (unit == AxisUnit::ThzOver2Pi) v = thz(value);
    if (unit == AxisUnit::OverOmegaB) v = value * p.omega_b;
    if (unit == AxisUnit::MilliWatt) v = value * 1e-3;
    switch (param) {
        case SweepParam::J: p.J = v; break;
        case SweepParam::J2: p.J2 = v; break;
        case SweepParam::G:
            p.G = v;
            p.pump_power.reset();
            break;
        case SweepParam::DeltaA: p.delta_a = v; break;
        case SweepParam::DeltaC: p.delta_c = v; break;
        case SweepParam::DeltaA2: p.delta_a2 = v; break;
        case SweepParam::KappaA: p.kappa_a = v; break;
        case SweepParam::PumpPower:
            p.pump_power = v;
            p.G.reset();
            break;
    }
}

std::string_view to_string(OutputKind kind) noexcept {
    switch (kind) {
        case OutputKind::EN: return "EN";
        case OutputKind::NbCm: return "N_b_cm";
        case OutputKind::NbPert: return "N_b_pert";
        case OutputKind::NbPertLorentz: return "N_b_pert_lorentz";
        case OutputKind::Duan: return "duan";
        case OutputKind::DuanOptimized: return "duan_opt";
        case OutputKind::AbsRac: return "abs_R_ac";
    }
    return "";
}

OutputKind parse_output(std::string_view name) {
    for (auto k : {OutputKind::EN, OutputKind::NbCm, OutputKind::NbPert, OutputKind::NbPertLorentz, OutputKind::Duan,
                   OutputKind::DuanOptimized, OutputKind::AbsRac}) {
        if (to_string(k) == name) return k;
    }
    throw Error(ErrorCode::ConfigError, "unknown output '" + std::string(name) +
                                            "' (expected EN, N_b_cm, N_b_pert, N_b_pert_lorentz, duan, duan_opt, abs_R_ac)");
}

void validate(const SweepSpec& spec) {
    if (spec.axes.empty()) throw Error(ErrorCode::ConfigError, "no axes defined");
    if (spec.axes.size() > 2) throw Error(ErrorCode::ConfigError, "at most two sweep axes are supported");
    for (const auto& ax : spec.axes) {
        if (!(ax.min < ax.max)) throw Error(ErrorCode::ConfigError, "axis " + ax.name() + ": min must be < max");
        if (ax.points < 2) throw Error(ErrorCode::ConfigError, "axis " + ax.name() + ": needs at least 2 points");
        if (ax.scale == AxisScale::Log && !(ax.min > 0.0)) {
            throw Error(ErrorCode::ConfigError, "axis " + ax.name() + ": log scale needs min > 0");
        }
    }
    if (spec.axes.size() == 2 && spec.axes[0].param == spec.axes[1].param) {
        throw Error(ErrorCode::ConfigError, "both axes sweep the same parameter");
    }
    if (spec.outputs.empty()) throw Error(ErrorCode::ConfigError, "no outputs requested");
    if (spec.topology.kind != TopologyKind::SingleWgm) {
        for (auto o : spec.outputs) {
            if (o == OutputKind::NbPert || o == OutputKind::NbPertLorentz || o == OutputKind::AbsRac) {
                throw Error(ErrorCode::ConfigError,
                            std::string(to_string(o)) + " is only defined for the single_wgm topology");
            }
        }
    }
}

Bipartition duan_bipartition(const Topology& topology) {
    if (topology.kind == TopologyKind::SingleWgm) return {"a", "b"};
    return {topology.labels.front(), topology.labels.back()};
}

std::vector<std::string> output_columns(const Topology& topology, const std::vector<OutputKind>& outputs) {
    std::vector<std::string> cols;
    for (auto o : normalized(outputs)) {
        if (o == OutputKind::EN) {
            for (const auto& bp : all_bipartitions(topology)) cols.push_back("EN_" + bp.name());
        } else if (o == OutputKind::Duan || o == OutputKind::DuanOptimized) {
            cols.push_back(std::string(to_string(o)) + "_" + duan_bipartition(topology).name());
        } else {
            cols.emplace_back(to_string(o));
        }
    }
    return cols;
}

PointResult evaluate_point(const SystemParams& p, const Topology& topology, const std::vector<OutputKind>& outputs) {
    const auto kinds = normalized(outputs);
    PointResult out;
    out.values.assign(output_columns(topology, kinds).size(), std::nullopt);

    std::optional<CovarianceMatrix> cm;
    try {
        const auto model = build_model(p, topology);
        const auto report = linalg::stability(model.A);
        out.margin = report.margin;
        out.stable = report.is_stable;
        if (!out.stable) return out;
        cm.emplace(steady_covariance(model));
    } catch (const std::exception& e) {
        out.stable = false;
        out.error = error_text(e);
        return out;
    }

    std::size_t col = 0;
    auto record = [&](const std::function<double()>& compute) {
        try {
            out.values[col] = compute();
        } catch (const std::exception& e) {
            if (!out.error) out.error = error_text(e);
        }
        ++col;
    };

    for (auto kind : kinds) {
        switch (kind) {
            case OutputKind::EN:
                for (const auto& bp : all_bipartitions(topology)) record([&] { return log_negativity(*cm, bp); });
                break;
            case OutputKind::NbCm: record([&] { return phonon_occupation_cm(*cm); }); break;
            case OutputKind::NbPert:
                record([&] { return cooling_rates(p, CoolingMethod::PointEvaluation).N_b_pert; });
                break;
            case OutputKind::NbPertLorentz:
                record([&] { return cooling_rates(p, CoolingMethod::LorentzianIntegral).N_b_pert; });
                break;
            case OutputKind::Duan: record([&] { return duan_sum(*cm, duan_bipartition(topology)); }); break;
            case OutputKind::DuanOptimized:
                record([&] { return duan_sum_optimized(*cm, duan_bipartition(topology)); });
                break;
            case OutputKind::AbsRac: record([&] { return std::abs(stokes_response(p).ratio); }); break;
        }
    }
    return out;
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
    validate(spec);
    SweepTable table;
    for (const auto& ax : spec.axes) table.axis_names.push_back(ax.name());
    table.output_names = output_columns(spec.topology, spec.outputs);

    const auto first = spec.axes[0].values();
    const auto second = spec.axes.size() > 1 ? spec.axes[1].values() : std::vector<double>{};
    const std::size_t inner = second.empty() ? 1 : second.size();
    table.records.resize(first.size() * inner);

    parallel_for(table.records.size(), threads, [&](std::size_t idx) {
        SweepRecord rec;
        SystemParams p = spec.base;
        const double x = first[idx / inner];
        rec.axis_values.push_back(x);
        apply_axis(p, spec.axes[0].param, spec.axes[0].unit, x);
        if (!second.empty()) {
            const double y = second[idx % inner];
            rec.axis_values.push_back(y);
            apply_axis(p, spec.axes[1].param, spec.axes[1].unit, y);
        }
        if (spec.delta_a_follows_delta_c) p.delta_a = p.delta_c;
        auto point = evaluate_point(p, spec.topology, spec.outputs);
        rec.stable = point.stable;
        rec.margin = point.margin;
        rec.outputs = std::move(point.values);
        rec.error = std::move(point.error);
        table.records[idx] = std::move(rec);
    });
    return table;
}

TracePoint local_max_along(const SystemParams& p, const Axis& tuned, const TraceSpec& spec) {
    const Bipartition target = spec.target.value_or(Bipartition{spec.topology.primary_optical(), "b"});
    const EnProbe probe{spec, target, tuned.param, tuned.unit};
    const bool log_axis = tuned.scale == AxisScale::Log && tuned.min > 0.0;
    auto to_u = [&](double x) { return log_axis ? std::log(x) : x; };
    auto to_x = [&](double u) { return log_axis ? std::exp(u) : u; };

    const auto grid = tuned.values();
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = probe(p, grid[i]);
    const auto best_it = std::max_element(f.begin(), f.end());
    if (*best_it == kNegInf) throw Error(ErrorCode::NoStablePoint, "no stable point along the tuned axis");
    const std::size_t ib = static_cast<std::size_t>(best_it - f.begin());

    TracePoint tp;
    double best_x = grid[ib];
    double best_f = f[ib];

    if (grid.size() > 1) {
        auto fu = [&](double u) { return probe(p, to_x(u)); };
        // Bracket between the stable neighbours; an unstable neighbour is
        // replaced by the stability edge found by bisection.
        auto side = [&](std::size_t j) {
            double inside = to_u(grid[ib]);
            double outside = to_u(grid[j]);
            if (f[j] != kNegInf) return outside;
            for (int k = 0; k < 40; ++k) {
                const double mid = 0.5 * (inside + outside);
                (fu(mid) == kNegInf ? outside : inside) = mid;
            }
            return inside;
        };
        const double lo = ib > 0 ? side(ib - 1) : to_u(grid[ib]);
        const double hi = ib + 1 < grid.size() ? side(ib + 1) : to_u(grid[ib]);
        const double tol = 1e-3 * std::abs(to_u(tuned.max) - to_u(tuned.min));
        if (hi - lo > tol) {
            const auto [u, val] = golden_max(fu, lo, hi, tol);
            if (val >= best_f) {
                best_x = to_x(u);
                best_f = val;
            } else if (ib > 0 && ib + 1 < grid.size()) {
                // An edge maximum is expected to beat interior probes.
                tp.fallback = true;
                constexpr int fine = 201;
                for (int k = 0; k < fine; ++k) {
                    const double uk = lo + (hi - lo) * k / (fine - 1);
                    const double vk = fu(uk);
                    if (vk > best_f) {
                        best_f = vk;
                        best_x = to_x(uk);
                    }
                }
            }
        }
    }

    tp.tuned_at_max = best_x;
    tp.max_EN = best_f;
    try {
        tp.N_b_cm = phonon_occupation_cm(steady_covariance(build_model(probe.at(p, best_x), spec.topology)));
    } catch (const Error& e) {
        tp.error = std::string(to_string(e.code()));
    }
    return tp;
}

std::vector<TracePoint> trace_local_max(const Axis& tuned, const Axis& scanned, const TraceSpec& spec,
                                        unsigned threads) {
    if (tuned.param == scanned.param) throw Error(ErrorCode::ConfigError, "tuned and scanned axes must differ");
    const auto xs = scanned.values();
    std::vector<TracePoint> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        SystemParams p = spec.base;
        apply_axis(p, scanned.param, scanned.unit, xs[i]);
        if (spec.delta_a_follows_delta_c) p.delta_a = p.delta_c;
        try {
            out[i] = local_max_along(p, tuned, spec);
        } catch (const Error& e) {
            out[i].error = std::string(to_string(e.code()));
        }
        out[i].scanned = xs[i];
    });
    return out;
}

SystemParams two_wgm_defaults() {
    SystemParams p;
    p.delta_a = -p.omega_b;
    p.delta_a2 = p.omega_b;
    p.delta_c = 0.0;
    p.kappa_a = thz(1e-3);
    p.g_c = thz(0.05);
    return p;
}

OptimumResult two_wgm_optimum(const OptimumSpec& spec) {
    const Topology topo = Topology::two_wgm();
    const Bipartition target{"a1", "a2"};
    SystemParams base = spec.base;
    base.J2.reset();
    base.pump_power.reset();

    auto objective = [&](double j, double g) {
        SystemParams p = base;
        apply_axis(p, SweepParam::J, spec.J_axis.unit, j);
        apply_axis(p, SweepParam::G, spec.G_axis.unit, g);
        try {
            const auto model = build_model(p, topo);
            if (!linalg::stability(model.A).is_stable) return kNegInf;
            return log_negativity(steady_covariance(model), target);
        } catch (const Error&) {
            return kNegInf;
        }
    };

    const auto js = spec.J_axis.values();
    const auto gs = spec.G_axis.values();
    double best = kNegInf;
    std::size_t bj = 0, bg = 0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        for (std::size_t k = 0; k < gs.size(); ++k) {
            const double v = objective(js[i], gs[k]);
            if (v > best) {
                best = v;
                bj = i;
                bg = k;
            }
        }
    }
    if (best == kNegInf) throw Error(ErrorCode::NoStablePoint, "no stable (J, G) point in the search box");

    double j = js[bj], g = gs[bg];
    auto cell = [](const std::vector<double>& v, std::size_t i) {
        return std::pair{v[i > 0 ? i - 1 : i], v[i + 1 < v.size() ? i + 1 : i]};
    };
    auto [jlo, jhi] = cell(js, bj);
    auto [glo, ghi] = cell(gs, bg);
    const double jtol = 1e-3 * std::max(spec.J_axis.max - spec.J_axis.min, 1e-12);
    const double gtol = 1e-3 * std::max(spec.G_axis.max - spec.G_axis.min, 1e-12);
    for (int round = 0; round < 4; ++round) {
        if (jhi - jlo > jtol) {
            const auto [x, v] = golden_max([&](double x) { return objective(x, g); }, jlo, jhi, jtol);
            if (v >= best) {
                j = x;
                best = v;
            }
        }
        if (ghi - glo > gtol) {
            const auto [x, v] = golden_max([&](double x) { return objective(j, x); }, glo, ghi, gtol);
            if (v >= best) {
                g = x;
                best = v;
            }
        }
    }

    OptimumResult res;
    res.J = j;
    res.G = g;
    res.EN = best;
    SystemParams p = base;
    apply_axis(p, SweepParam::J, spec.J_axis.unit, j);
    apply_axis(p, SweepParam::G, spec.G_axis.unit, g);
    const auto cm = steady_covariance(build_model(p, topo));
    res.duan = duan_sum(cm, target);
    res.duan_optimized = duan_sum_optimized(cm, target);
    if (!p.g_c) p.g_c = thz(0.05);
    res.P_required = pump_power_for_coupling(p, topo, *p.G);
    return res;
}

}  // namespace comsim
