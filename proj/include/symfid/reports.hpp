#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace symfid {

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 12 significant digits, shortest form (printf %.12g)
inline std::string fmt_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::string cell_csv(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) return fmt_sig12(std::get<double>(c));
    return std::get<std::string>(c);
}

inline std::string cell_json(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) {
        double v = std::get<double>(c);
        if (!std::isfinite(v)) return "null";
        return fmt_sig12(v);
    }
    std::string out = "\"";
    for (char ch : std::get<std::string>(c)) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

} // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) os << ',';
        os << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << detail::cell_csv(row[i]);
        }
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Table& t) {
    os << "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << "  {";
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i) os << ", ";
            os << '"' << t.columns[i] << "\": " << detail::cell_json(t.rows[r][i]);
        }
        os << (r + 1 < t.rows.size() ? "},\n" : "}\n");
    }
    os << "]\n";
}

inline void emit_table(const Table& t, const std::string& format, const std::string& out_path) {
    auto write = [&](std::ostream& os) {
        if (format == "json")
            write_json(os, t);
        else
            write_csv(os, t);
    };
    if (out_path.empty()) {
        write(std::cout);
        std::cout.flush();
        if (std::cout.fail()) throw error("failed writing to stdout");
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw error("cannot open output file: " + out_path);
    write(os);
    os.flush();
    if (os.fail()) throw error("failed writing output file: " + out_path);
}

} // namespace symfid
