// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "freelab/lab/config.hpp"
#include "freelab/montecarlo.hpp"
#include "freelab/ncpoly.hpp"

namespace freelab::lab {

inline constexpr std::string_view kToolVersion = "0.1.0";

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct ExperimentResult {
    std::string experiment;
    nlohmann::json params;  ///< canonical config, as in config_to_json
    std::uint64_t master_seed = 0;
    std::string tool_version{kToolVersion};
    double wall_time = 0.0;  ///< seconds; excluded from determinism checks
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Column names of each experiment, fixed regardless of parameters.
const std::vector<std::string>& experiment_columns(ExperimentKind kind);

/// Runs the configured experiment. Every task draws from a stream keyed by
/// its index under the master seed, so rows do not depend on the worker
/// count or on `exec`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

/// One row per coefficient entry of `p`: word, row, col, re, im.
ExperimentResult coefficient_table(const MatrixPoly& p);

}  // namespace freelab::lab
