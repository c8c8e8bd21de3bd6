// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/result_table.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace asphase::cli {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_json_number(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

bool any_shots(const ResultTable& t) {
    for (const auto& r : t.rows)
        if (r.shots) return true;
    return false;
}

} // namespace

std::string content_hash(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_csv(const ResultTable& table) {
    std::ostringstream out;
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
    const bool shots = any_shots(table);
    out << "swept_value,p_proton,p_neutron,leakage,phase_inferred,visibility,fit_residual";
    if (shots) out << ",shots,shots_proton,p_proton_empirical";
    out << '\n';
    for (const auto& r : table.rows) {
        out << format_number(r.swept_value) << ',' << format_number(r.p_proton) << ',' << format_number(r.p_neutron)
            << ',' << format_number(r.leakage) << ',' << format_number(r.phase_inferred) << ','
            << format_number(r.visibility) << ',' << format_number(r.fit_residual);
        if (shots) {
            const ShotCounts c = r.shots.value_or(ShotCounts{});
            out << ',' << c.shots << ',' << c.protons << ',' << format_number(c.p_proton_empirical);
        }
        out << '\n';
    }
    return out.str();
}

std::string format_json(const ResultTable& table) {
    json meta = json::object();
    for (const auto& [k, v] : table.metadata) meta[k] = v;
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row;
        row["swept_value"] = number_or_null(r.swept_value);
        row["p_proton"] = number_or_null(r.p_proton);
        row["p_neutron"] = number_or_null(r.p_neutron);
        row["leakage"] = number_or_null(r.leakage);
        row["phase_inferred"] = number_or_null(r.phase_inferred);
        row["visibility"] = number_or_null(r.visibility);
        row["fit_residual"] = number_or_null(r.fit_residual);
        if (r.shots) {
            row["shots"] = r.shots->shots;
            row["shots_proton"] = r.shots->protons;
            row["p_proton_empirical"] = number_or_null(r.shots->p_proton_empirical);
        }
        rows.push_back(std::move(row));
    }
    json doc;
    doc["metadata"] = std::move(meta);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void emit(const ResultTable& table, OutputFormat format, std::ostream& out) {
    out << (format == OutputFormat::Csv ? format_csv(table) : format_json(table));
}

void emit_to_file(const ResultTable& table, OutputFormat format, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot open output file '" + path + "' for writing");
    emit(table, format, f);
    f.flush();
    if (!f) throw InvalidArgument("failed writing output file '" + path + "'");
}

ResultTable parse_json_table(std::string_view text) {
    const json doc = json::parse(text);
    ResultTable t;
    for (const auto& [k, v] : doc.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
    for (const auto& row : doc.at("rows")) {
        ResultRow r;
        r.swept_value = from_json_number(row.at("swept_value"));
        r.p_proton = from_json_number(row.at("p_proton"));
        r.p_neutron = from_json_number(row.at("p_neutron"));
        r.leakage = from_json_number(row.at("leakage"));
        r.phase_inferred = from_json_number(row.at("phase_inferred"));
        r.visibility = from_json_number(row.at("visibility"));
        r.fit_residual = from_json_number(row.at("fit_residual"));
        if (row.contains("shots")) {
            r.shots = ShotCounts{row.at("shots").get<std::uint64_t>(), row.at("shots_proton").get<std::uint64_t>(),
                                 from_json_number(row.at("p_proton_empirical"))};
        }
        t.rows.push_back(r);
    }
    return t;
}

void sample_shots(ResultTable& table, std::uint64_t shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& r : table.rows) {
        const double p = std::clamp(r.p_proton, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(shots, p);
        const std::uint64_t k = draw(rng);
        r.shots = ShotCounts{shots, k, shots == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(shots)};
    }
}

} // namespace asphase::cli
