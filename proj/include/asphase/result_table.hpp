// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "asphase/scenario_file.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace asphase::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct ShotCounts {
    std::uint64_t shots = 0;
    std::uint64_t protons = 0;
    double p_proton_empirical = 0.0;
};

struct ResultRow {
    double swept_value = 0.0;
    double p_proton = 0.0;
    double p_neutron = 0.0;
    double leakage = 0.0;
    double phase_inferred = 0.0;
    double visibility = 0.0;
    double fit_residual = 0.0;
    std::optional<ShotCounts> shots;
};

/// Metadata is an ordered list of (key, value) pairs; values are stored as
/// text and written verbatim.
struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<ResultRow> rows;
};

/// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);

/// `%.17g` formatting; NaN is written as "nan".
std::string format_number(double v);

std::string format_csv(const ResultTable& table);
std::string format_json(const ResultTable& table);
void emit(const ResultTable& table, OutputFormat format, std::ostream& out);

/// Writes to a file; throws InvalidArgument if the destination is unwritable.
void emit_to_file(const ResultTable& table, OutputFormat format, const std::string& path);

/// Inverse of format_json.
ResultTable parse_json_table(std::string_view text);

/// Draws `shots` Bernoulli(p_proton) samples per row from one mt19937_64
/// stream seeded with `seed`, rows in order.
void sample_shots(ResultTable& table, std::uint64_t shots, std::uint64_t seed);

} // namespace asphase::cli
