#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "comsim/sweep.hpp"

namespace comsim::report {

/// Empty cell (null), number, text or flag.
using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Locale-independent number text with `precision` significant digits.
[[nodiscard]] std::string format_number(double v, int precision);

/// RFC 4180 CSV with LF line endings; nulls are empty fields.
void write_csv(std::ostream& out, const Table& table, int precision);
/// Array of row objects keyed by column name; nulls are JSON null.
void write_json(std::ostream& out, const Table& table, int precision);

/// Axis columns, "stable", "margin", output columns, "error".
[[nodiscard]] Table sweep_table(const SweepTable& sweep);

/// One row per traced point.
[[nodiscard]] Table trace_table(const Axis& scanned, const Axis& tuned, const std::vector<TracePoint>& points);
/// Rows of `extra` appended to `base`; columns must match.
void append(Table& base, const Table& extra);

[[nodiscard]] Table optimum_table(const OptimumResult& r);

}  // namespace comsim::report
