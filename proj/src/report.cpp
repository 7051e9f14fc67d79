#include "comsim/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "comsim/error.hpp"

namespace comsim::report {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c, int precision) {
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c), precision);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    return {};
}

Cell optional_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }
Cell optional_cell(const std::optional<std::string>& v) { return v ? Cell{*v} : Cell{}; }

}  // namespace

std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Table& table, int precision) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << csv_field(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_field(cell_text(row[i], precision));
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table, int precision) {
    // Numbers are emitted through format_number so the precision setting
    // applies to JSON as well.
    out << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n  {" : "\n  {");
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ", ";
            out << nlohmann::json(table.columns[i]).dump() << ": ";
            const Cell& c = row[i];
            if (std::holds_alternative<double>(c) && std::isfinite(std::get<double>(c))) {
                out << format_number(std::get<double>(c), precision);
            } else if (std::holds_alternative<std::string>(c)) {
                out << nlohmann::json(std::get<std::string>(c)).dump();
            } else if (std::holds_alternative<bool>(c)) {
                out << (std::get<bool>(c) ? "true" : "false");
            } else {
                out << "null";
            }
        }
        out << "}";
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
}

Table sweep_table(const SweepTable& sweep) {
    Table t;
    t.columns = sweep.axis_names;
    t.columns.push_back("stable");
    t.columns.push_back("margin");
    t.columns.insert(t.columns.end(), sweep.output_names.begin(), sweep.output_names.end());
    t.columns.push_back("error");
    t.rows.reserve(sweep.records.size());
    for (const auto& rec : sweep.records) {
        std::vector<Cell> row;
        for (double x : rec.axis_values) row.emplace_back(x);
        row.emplace_back(rec.stable);
        row.emplace_back(rec.margin);
        for (const auto& v : rec.outputs) row.push_back(optional_cell(v));
        row.push_back(optional_cell(rec.error));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table trace_table(const Axis& scanned, const Axis& tuned, const std::vector<TracePoint>& points) {
    Table t;
    t.columns = {"scanned_param", "scanned", "tuned_param", "tuned_at_max", "max_EN", "N_b_cm", "fallback", "error"};
    for (const auto& p : points) {
        t.rows.push_back({Cell{scanned.name()}, Cell{p.scanned}, Cell{tuned.name()}, optional_cell(p.tuned_at_max),
                          optional_cell(p.max_EN), optional_cell(p.N_b_cm), Cell{p.fallback}, optional_cell(p.error)});
    }
    return t;
}

void append(Table& base, const Table& extra) {
    if (base.columns != extra.columns) throw Error(ErrorCode::InvalidParameter, "table columns differ");
    base.rows.insert(base.rows.end(), extra.rows.begin(), extra.rows.end());
}

Table optimum_table(const OptimumResult& r) {
    Table t;
    t.columns = {"J_thz_over_2pi", "G_thz_over_2pi", "EN_a1|a2", "duan_a1|a2", "duan_opt_a1|a2", "P_required_mw"};
    t.rows.push_back({Cell{r.J}, Cell{r.G}, Cell{r.EN}, Cell{r.duan}, Cell{r.duan_optimized}, Cell{r.P_required * 1e3}});
    return t;
}

}  // namespace comsim::report
