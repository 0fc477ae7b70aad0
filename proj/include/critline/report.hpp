#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "critline/errors.hpp"
#include "critline/io.hpp"

namespace critline {

// Cells keep their native type until rendering so CSV gets the fixed
// 17-significant-digit form while JSON keeps numbers as numbers.
using ReportCell = std::variant<std::string, double, long long, bool>;

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<ReportCell>> rows;

    void add_row(std::vector<ReportCell> cells) {
        if (cells.size() != columns.size())
            throw precondition_error("ReportTable: row arity does not match header");
        rows.push_back(std::move(cells));
    }
};

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw precondition_error("unknown report format: " + name);
}

namespace detail {

// RFC 4180: quote a field only when it contains a comma, quote, or line
// break; embedded quotes double.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_csv(const ReportCell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return csv_escape(*s);
    if (const auto* d = std::get_if<double>(&cell)) return fmt_double(*d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return std::get<bool>(cell) ? "true" : "false";
}

inline void cell_json(nlohmann::ordered_json& obj, const std::string& key,
                      const ReportCell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell))
        obj[key] = *s;
    else if (const auto* d = std::get_if<double>(&cell))
        obj[key] = *d;
    else if (const auto* i = std::get_if<long long>(&cell))
        obj[key] = *i;
    else
        obj[key] = std::get<bool>(cell);
}

} // namespace detail

// LF line endings; no trailing blank line beyond the final LF. Byte
// reproducibility is part of the contract: no locales, no timestamps.
inline std::string render_csv(const ReportTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += detail::csv_escape(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += detail::cell_csv(row[c]);
        }
        out += '\n';
    }
    return out;
}

// One JSON object per line, keys in column order.
inline std::string render_json_lines(const ReportTable& table) {
    std::string out;
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c)
            detail::cell_json(obj, table.columns[c], row[c]);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

inline std::string render_report(const ReportTable& table, ReportFormat format) {
    return format == ReportFormat::csv ? render_csv(table) : render_json_lines(table);
}

namespace detail {

inline std::string utc_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

} // namespace detail

// Data file gets only deterministic bytes; the run timestamp goes to a
// sidecar so re-runs with identical config stay byte-identical.
inline void write_report(const std::string& path, const ReportTable& table,
                         ReportFormat format) {
    detail::write_file_atomic(path, render_report(table, format));
    nlohmann::ordered_json meta;
    meta["created"] = detail::utc_timestamp_now();
    meta["rows"] = table.rows.size();
    detail::write_file_atomic(path + ".meta", meta.dump() + "\n");
}

} // namespace critline
