// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file protocol.hpp
 * @brief The two-cavity charge-phase Ramsey experiment around a fluxon.
 *
 * A nucleon is prepared at A, interacts with cavity 1 (also at A), is
 * transported along C to B, interacts with cavity 2 and is measured in the
 * {P, N} basis. Both cavities are prepared together at A; cavity 2 may be
 * carried to B along C′ before the run. Relative cavity phase convention:
 * Δθ ≡ θ₂ − θ₁.
 */

#pragma once

#include "asphase/cavity.hpp"
#include "asphase/geometry.hpp"
#include "asphase/jc.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace asphase::protocol {

using hilbert::Nucleon;

struct IndependentPreparation {
    cavity::CoherentSpec cavity1;
    cavity::CoherentSpec cavity2;
};

using Preparation =
    std::variant<IndependentPreparation, cavity::CorrelatedPairSpec, cavity::BeamSplitterSpec>;

/// When the cavity-2 calibration transport happens relative to the first pulse.
enum class CalibrationOrder { BeforeFirstInteraction, AfterFirstInteraction };

struct Scenario {
    Preparation preparation;
    jc::InteractionSpec interaction1{hilbert::Subsystem::Cavity1, 0.0};
    jc::InteractionSpec interaction2{hilbert::Subsystem::Cavity2, 0.0};
    geometry::Path nucleon_path;
    std::optional<geometry::Path> cavity2_path;
    geometry::GaugeSpec gauge;
    std::optional<double> global_phase;
    Nucleon initial_nucleon = Nucleon::Proton;
    std::optional<int> n_max1;
    std::optional<int> n_max2;
    double tail_tolerance = cavity::kDefaultTailTolerance;
    CalibrationOrder calibration_order = CalibrationOrder::BeforeFirstInteraction;
};

struct MeasurementResult {
    double p_proton = 0.0;
    double p_neutron = 0.0;
    Eigen::Matrix2cd nucleon_reduced = Eigen::Matrix2cd::Zero();
    double leakage_total = 0.0;
    /// Fitted Ramsey phase φ₀; NaN outside a Δθ sweep.
    double phase_inferred = 0.0;
};

struct Truncation {
    int n_max1 = 0;
    int n_max2 = 0;
    /// Probability mass of the ideal preparation that lies outside the space.
    double tail_mass = 0.0;
};

/// Throws InvalidArgument if the scenario is inconsistent.
void validate(const Scenario& scenario);

Truncation truncation_for(const Scenario& scenario);
hilbert::SpaceSpec space_for(const Scenario& scenario);
hilbert::StateVector initial_state(const Scenario& scenario);

/// Final state before measurement, for diagnostics.
hilbert::StateVector final_state(const Scenario& scenario);

MeasurementResult run(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParameter { RelativePhase, Flux, GlobalPhase, Winding, PulseArea1, PulseArea2, ChiCoefficient };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::RelativePhase;
    int chi_j = 0; // only for ChiCoefficient
    int chi_k = 0;
};

std::string to_string(const SweepSpec& spec);

/// Copy of `base` with the swept parameter set to `value`.
Scenario with_parameter(const Scenario& base, const SweepSpec& spec, double value);

/// Least-squares fit of p(x) = offset + amplitude·cos(x − phase), amplitude ≥ 0.
struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double visibility = 0.0; // amplitude / offset
    double residual = 0.0;   // RMS of the fit residuals
};

inline constexpr std::size_t kMinFitPoints = 5;

/// std::nullopt when fewer than kMinFitPoints samples are given.
std::optional<FringeFit> fit_fringe(std::span<const double> x, std::span<const double> p);

struct SweepResult {
    SweepSpec spec;
    std::vector<double> values;
    std::vector<MeasurementResult> results;
    std::optional<FringeFit> fit;
    bool fit_skipped = false; // Δθ sweep with too few points
};

/// One run per value. `threads` = 0 picks ASPHASE_THREADS or the hardware
/// concurrency. Results are ordered by value index regardless of threading.
SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec, std::span<const double> values,
                      unsigned threads = 1);

/// `count` evenly spaced points on [start, stop], endpoints included.
std::vector<double> linspace(double start, double stop, std::size_t count);

/// `count` evenly spaced phases on [0, 2π), endpoint excluded.
std::vector<double> phase_grid(std::size_t count);

// ---------------------------------------------------------------------------
// Harnesses

struct VisibilityComparison {
    double vis_independent = 0.0;
    double vis_correlated = 0.0;
    FringeFit fit_independent;
    FringeFit fit_correlated;
};

VisibilityComparison visibility_comparison(double q1, double q2, std::span<const double> dthetas, int total,
                                           double pulse_area1, double pulse_area2);

struct PathVariant {
    geometry::Path nucleon_path;
    geometry::Path cavity2_path;
};

struct TopologyReport {
    struct Variant {
        int winding = 0; // of C − C′
        SweepResult sweep;
    };
    struct Group {
        int winding = 0;
        std::vector<std::size_t> members;
        double max_spread = 0.0; // max |Δp_proton| against the first member
        double phase = 0.0;      // fitted phase of the first member
    };
    struct Gap {
        int winding_from = 0;
        int winding_to = 0;
        double phase_gap = 0.0;
        double expected = 0.0;
        double error = 0.0; // wrapped to (−π, π]
    };
    std::vector<Variant> variants;
    std::vector<Group> groups;
    std::vector<Gap> gaps;
    double group_tolerance = 1e-10;
    double gap_tolerance = 1e-8;
    bool passed = false;
};

/// Runs a Δθ sweep for each (C, C′) pair, groups by winding of C − C′ and
/// checks that only the winding matters.
TopologyReport topological_observability_check(const Scenario& base, std::span<const PathVariant> variants,
                                               std::span<const double> dthetas);

// ---------------------------------------------------------------------------
// Invariant suite

struct InvariantCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string note;
};

/// Cross-checks the numerics of a scenario: both JC routes, charge
/// conservation, line-integral oracle, global-phase and gauge invariance,
/// probability bookkeeping.
std::vector<InvariantCheck> run_invariant_checks(const Scenario& scenario);

/// Wraps an angle into (−π, π].
double wrap_angle(double x);

} // namespace asphase::protocol
