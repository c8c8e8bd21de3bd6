// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/app.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace asphase::cli {

namespace {

constexpr double kTailFlagThreshold = 1e-10;

std::string mode_name(const protocol::Preparation& p) {
    switch (p.index()) {
    case 0: return "independent";
    case 1: return "correlated";
    default: return "beamsplitter";
    }
}

ResultRow to_row(double value, const protocol::MeasurementResult& m, const std::optional<protocol::FringeFit>& fit) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    ResultRow r;
    r.swept_value = value;
    r.p_proton = m.p_proton;
    r.p_neutron = m.p_neutron;
    r.leakage = m.leakage_total;
    r.phase_inferred = fit ? fit->phase : nan;
    r.visibility = fit ? fit->visibility : nan;
    r.fit_residual = fit ? fit->residual : nan;
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int report_checks(const protocol::Scenario& scenario, std::ostream& out) {
    const auto checks = protocol::run_invariant_checks(scenario);
    bool ok = true;
    for (const auto& c : checks) {
        if (c.skipped) {
            out << "SKIP  " << c.name << " (" << c.note << ")\n";
            continue;
        }
        ok = ok && c.passed;
        // Tolerances are short literals; print them as such.
        std::ostringstream tol;
        tol << c.tolerance;
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << format_number(c.value) << " (tolerance "
            << tol.str() << ")";
        if (!c.note.empty()) out << " [" << c.note << "]";
        out << '\n';
    }
    out << (ok ? "all invariant checks passed\n" : "invariant checks FAILED\n");
    return ok ? kExitOk : kExitNumerical;
}

} // namespace

ResultTable make_table(const ScenarioFile& file, const std::optional<SweepRequest>& sweep,
                       const std::string& input_identity) {
    const protocol::Truncation trunc = protocol::truncation_for(file.scenario);
    ResultTable t;
    auto meta = [&](std::string k, std::string v) { t.metadata.emplace_back(std::move(k), std::move(v)); };
    meta("tool", "asphase");
    meta("version", kToolVersion);
    meta("scenario_hash", content_hash(input_identity));
    meta("preparation", mode_name(file.scenario.preparation));
    meta("n_max1", std::to_string(trunc.n_max1));
    meta("n_max2", std::to_string(trunc.n_max2));
    meta("tail_mass", format_number(trunc.tail_mass));
    meta("tail_flag", trunc.tail_mass > kTailFlagThreshold ? "WARNING tail mass exceeds 1e-10" : "ok");

    if (!sweep) {
        meta("parameter", "none");
        meta("points", "1");
        meta("fit", "n/a");
        t.rows.push_back(to_row(std::numeric_limits<double>::quiet_NaN(), protocol::run(file.scenario), std::nullopt));
        return t;
    }

    const auto result = protocol::run_sweep(file.scenario, sweep->spec, sweep->values, 0);
    meta("parameter", protocol::to_string(sweep->spec));
    meta("points", std::to_string(sweep->values.size()));
    if (result.fit) {
        meta("fit", "offset + amplitude*cos(dtheta - phase)");
        meta("fit_offset", format_number(result.fit->offset));
        meta("fit_amplitude", format_number(result.fit->amplitude));
        meta("fit_phase", format_number(result.fit->phase));
        meta("fit_visibility", format_number(result.fit->visibility));
        meta("fit_residual", format_number(result.fit->residual));
    } else {
        meta("fit", result.fit_skipped ? "skipped (fewer than 5 points)" : "n/a");
    }
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        t.rows.push_back(to_row(result.values[i], result.results[i], result.fit));
    }
    return t;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Charge-phase Ramsey experiment around a magnetic fluxon"};
    std::string scenario_path;
    std::string sweep_flag;
    std::string out_path;
    std::string format_flag;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    bool check = false;
    app.add_option("--scenario", scenario_path, "Scenario file")->required();
    auto* sweep_opt = app.add_option("--sweep", sweep_flag, "Sweep <param>=<start>:<stop>:<count>");
    auto* out_opt = app.add_option("--out", out_path, "Output file (default: [output] path or stdout)");
    auto* format_opt = app.add_option("--format", format_flag, "csv or json (default csv)");
    auto* shots_opt = app.add_option("--shots", shots, "Sample this many measurement shots per row");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for --shots");
    app.add_flag("--check", check, "Run the invariant suite against the scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*shots_opt && !*seed_opt) {
            err << "error: --shots requires --seed\n";
            return kExitValidation;
        }
        const std::string text = read_file(scenario_path);
        const ScenarioFile file = parse_scenario(text);

        if (check) return report_checks(file.scenario, out);

        std::optional<SweepRequest> sweep = file.sweep;
        if (*sweep_opt) sweep = parse_sweep_flag(sweep_flag);
        const OutputFormat format =
            *format_opt ? parse_format(format_flag) : file.output.format.value_or(OutputFormat::Csv);

        ResultTable table = make_table(file, sweep, text + '\x1f' + sweep_flag);
        if (*shots_opt) {
            table.metadata.emplace_back("shots", std::to_string(shots));
            table.metadata.emplace_back("seed", std::to_string(seed));
            sample_shots(table, shots, seed);
        }

        const std::optional<std::string> dest = *out_opt ? std::optional(out_path) : file.output.path;
        if (dest) {
            emit_to_file(table, format, *dest);
        } else {
            emit(table, format, out);
        }
        return kExitOk;
    } catch (const NumericalInconsistency& e) {
        err << "numerical inconsistency: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

} // namespace asphase::cli
