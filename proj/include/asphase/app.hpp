// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "asphase/protocol.hpp"
#include "asphase/result_table.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace asphase::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitNumerical = 3,
};

/// Builds the output table for one run (`sweep` empty) or a sweep.
ResultTable make_table(const ScenarioFile& file, const std::optional<SweepRequest>& sweep,
                       const std::string& input_identity);

/// Full command line front end. Diagnostics go to `err`; results go to the
/// --out file or, without one, to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace asphase::cli
