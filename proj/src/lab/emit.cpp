// SPDX-License-Identifier: Apache-2.0
#include "freelab/lab/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "freelab/errors.hpp"

namespace freelab::lab {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else
                return quote(v);
        },
        cell);
}

nlohmann::json cell_json(const Cell& cell) {
    return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    // Shortest round-trip form; never more than 17 significant digits.
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ExperimentResult& res) {
    std::string out;
    for (std::size_t i = 0; i < res.columns.size(); ++i) out += (i ? "," : "") + quote(res.columns[i]);
    out += '\n';
    for (const auto& row : res.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_result_json(const ExperimentResult& res) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : res.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < res.columns.size(); ++i) obj[res.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    return {{"experiment", res.experiment}, {"params", res.params},       {"master_seed", res.master_seed},
            {"tool_version", res.tool_version}, {"wall_time", res.wall_time}, {"columns", res.columns},
            {"rows", rows}};
}

void emit_results(const ExperimentResult& res, OutputFormat format, const std::string& path) {
    const std::string text = format == OutputFormat::csv ? to_csv(res) : to_result_json(res).dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("failed to write to stdout");
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open output file: " + path);
    file << text;
    file.close();
    if (!file) throw IoError("failed writing output file: " + path);
}

}  // namespace freelab::lab
