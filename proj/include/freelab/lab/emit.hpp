// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "freelab/lab/config.hpp"
#include "freelab/lab/experiments.hpp"

namespace freelab::lab {

/// Locale-independent shortest form with at most 17 significant digits.
std::string format_number(double value);

/// Header line plus one line per row. Strings containing a comma, quote or
/// newline are quoted RFC 4180 style.
std::string to_csv(const ExperimentResult& res);

/// Envelope fields plus `columns` and `rows` (an array of objects).
nlohmann::json to_result_json(const ExperimentResult& res);

/// Writes the result to `path`, or to stdout when `path` is empty.
/// Throws IoError naming the path when the file cannot be written.
void emit_results(const ExperimentResult& res, OutputFormat format, const std::string& path);

}  // namespace freelab::lab
