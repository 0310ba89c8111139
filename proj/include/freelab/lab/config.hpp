// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace freelab::lab {

enum class ExperimentKind { strong_convergence, chi_scan, c_scan, concentration, witness, truncation, moments };
enum class OutputFormat { csv, json };

std::string_view experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

enum class ParamType { integer, real, boolean, text, int_list, real_list };

using ParamValue =
    std::variant<std::int64_t, double, bool, std::string, std::vector<std::int64_t>, std::vector<double>>;

struct ParamSpec {
    std::string name;
    ParamType type;
    ParamValue default_value;
    std::vector<std::string> choices;  ///< allowed values for text params
    std::optional<double> min_value;   ///< applies to every number of the param
};

const std::vector<ParamSpec>& param_schema(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::moments;
    std::map<std::string, ParamValue> params;
    std::uint64_t master_seed = 1;
    std::string out_path;
    OutputFormat format = OutputFormat::csv;

    std::int64_t integer(const std::string& name) const;
    int integer32(const std::string& name) const { return static_cast<int>(integer(name)); }
    double real(const std::string& name) const;
    bool flag(const std::string& name) const;
    const std::string& text(const std::string& name) const;
    std::vector<int> int_list(const std::string& name) const;
    std::vector<double> real_list(const std::string& name) const;
};

/// Parses `key = value` lines (with `#` comments) or a JSON object. Values
/// may be JSON scalars or arrays, comma lists, or integer ranges `a..b`.
/// Every parameter is checked against the experiment's schema; all problems
/// are reported together in one ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Canonical JSON form; parse_config(serialize_config(c)) reproduces c.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace freelab::lab
