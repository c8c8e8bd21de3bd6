// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

// Scenario files: sectioned key = value text.
//
//   # comment
//   [preparation]
//   mode = independent            # independent | correlated | beamsplitter
//   q1 = 100
//   theta1 = 0
//   ...
//
// Sections: [preparation] [interactions] [paths] [gauge] are required,
// [sweep] and [output] are optional. Unknown sections or keys are errors.
// See docs/scenario_format.md for every key.

#pragma once

#include "asphase/errors.hpp"
#include "asphase/protocol.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asphase::cli {

/// Syntax error with a 1-based position, or a semantic error naming the key.
class ParseError : public InvalidArgument {
public:
    ParseError(const std::string& what, int line, int column)
        : InvalidArgument(what), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

enum class OutputFormat { Csv, Json };

struct SweepRequest {
    protocol::SweepSpec spec;
    std::vector<double> values;
};

struct OutputOptions {
    std::optional<OutputFormat> format;
    std::optional<std::string> path;
};

struct ScenarioFile {
    protocol::Scenario scenario;
    std::optional<SweepRequest> sweep;
    OutputOptions output;
};

ScenarioFile parse_scenario(std::string_view text);

/// Parses a sweep parameter name: dtheta, flux, alpha, winding, gt1, gt2 or chi:j,k.
protocol::SweepSpec parse_sweep_parameter(std::string_view name);

/// Parses "<param>=<start>:<stop>:<count>".
SweepRequest parse_sweep_flag(std::string_view flag);

OutputFormat parse_format(std::string_view name);

} // namespace asphase::cli
