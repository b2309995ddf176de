#pragma once

// Result tables for the command-line tool: typed cells, RFC-4180 CSV, and
// JSON arrays of row objects.

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace nument::cli {

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Column {
    std::string name;
    bool        entropy = false; ///< rescaled by 1/log 2 in bits mode
};

struct Table {
    std::vector<Column>            columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    /// Divides every entropy-valued numeric cell by log 2.
    void to_bits() {
        for(auto &row : rows)
            for(std::size_t c = 0; c < columns.size(); ++c)
                if(columns[c].entropy)
                    if(auto *v = std::get_if<double>(&row[c])) *v /= std::log(2.0);
    }
};

inline Cell optional_cell(std::optional<double> v) {
    if(v) return *v;
    return std::monostate{};
}

/// Shortest round-trip representation; identical inputs give identical text.
inline std::string format_double(double v) {
    if(std::isnan(v)) return "nan";
    if(std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

inline std::string csv_field(const std::string &s) {
    if(s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for(char c : s) {
        if(c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string cell_text(const Cell &cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string &v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

inline void write_csv(const Table &table, std::ostream &os) {
    for(std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << csv_field(table.columns[c].name);
    os << "\r\n";
    for(const auto &row : table.rows) {
        for(std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(cell_text(row[c]));
        os << "\r\n";
    }
}

inline nlohmann::ordered_json to_json(const Table &table) {
    auto arr = nlohmann::ordered_json::array();
    for(const auto &row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for(std::size_t c = 0; c < row.size(); ++c) {
            const auto &name = table.columns[c].name;
            std::visit(
                [&](const auto &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr(std::is_same_v<T, std::monostate>) obj[name] = nullptr;
                    else if constexpr(std::is_same_v<T, double>) {
                        if(std::isfinite(v)) obj[name] = v;
                        else obj[name] = nullptr;
                    } else obj[name] = v;
                },
                row[c]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_json(const Table &table, std::ostream &os) { os << to_json(table).dump(2) << '\n'; }

} // namespace nument::cli
