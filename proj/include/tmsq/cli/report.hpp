#pragma once

// Tabular reports and their table / csv / json renderings. Numbers are
// printed with "%.9g" in every format so that output is byte-reproducible.

#include "tmsq/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace tmsq::cli {

enum class Format { table, csv, json };

inline Format parse_format(const std::string& s) {
    if (s == "table") return Format::table;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ValidationError("--format: expected table, csv or json, got '" + s + "'");
}

using Cell = std::variant<double, std::string>;

struct Report {
    std::string task;
    std::string model;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw Error("Report: row width does not match the header");
        rows.push_back(std::move(row));
    }
};

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::get<std::string>(c);
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

inline std::string render_csv(const Report& r) {
    std::ostringstream out;
    for (std::size_t k = 0; k < r.columns.size(); ++k) out << (k ? "," : "") << detail::csv_escape(r.columns[k]);
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << detail::csv_escape(cell_text(row[k]));
        out << "\n";
    }
    return out.str();
}

inline std::string render_json(const Report& r) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["task"] = r.task;
    doc["model"] = r.model;
    doc["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json obj = json::object();
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (const auto* d = std::get_if<double>(&row[k])) {
                // Round through the 9-digit text so json and csv carry the same value.
                if (std::isfinite(*d)) obj[r.columns[k]] = std::stod(format_number(*d));
                else obj[r.columns[k]] = nullptr;
            } else {
                obj[r.columns[k]] = std::get<std::string>(row[k]);
            }
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    if (!r.notes.empty()) doc["notes"] = r.notes;
    return doc.dump(2) + "\n";
}

inline std::string render_table(const Report& r) {
    std::vector<std::size_t> width(r.columns.size());
    for (std::size_t k = 0; k < r.columns.size(); ++k) width[k] = r.columns[k].size();
    for (const auto& row : r.rows)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], cell_text(row[k]).size());

    std::ostringstream out;
    out << "# " << r.task << " (" << r.model << ")\n";
    auto line = [&](auto&& text_of) {
        for (std::size_t k = 0; k < r.columns.size(); ++k) {
            const std::string t = text_of(k);
            out << (k ? "  " : "") << t << std::string(width[k] - t.size(), ' ');
        }
        out << "\n";
    };
    line([&](std::size_t k) { return r.columns[k]; });
    line([&](std::size_t k) { return std::string(width[k], '-'); });
    for (const auto& row : r.rows) line([&](std::size_t k) { return cell_text(row[k]); });
    for (const auto& n : r.notes) out << "# " << n << "\n";
    return out.str();
}

inline std::string render(const Report& r, Format f) {
    switch (f) {
        case Format::table: return render_table(r);
        case Format::csv: return render_csv(r);
        case Format::json: return render_json(r);
    }
    return {};
}

}  // namespace tmsq::cli
