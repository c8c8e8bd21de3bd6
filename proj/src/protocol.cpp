// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/protocol.hpp"

#include "asphase/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <numbers>
#include <thread>

namespace asphase::protocol {

using hilbert::Amplitudes;
using hilbert::SpaceSpec;
using hilbert::StateVector;
using hilbert::Subsystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEndpointTolerance = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool close(const geometry::Point& a, const geometry::Point& b) {
    return std::abs(a.x - b.x) <= kEndpointTolerance && std::abs(a.y - b.y) <= kEndpointTolerance;
}

// Binomial(N, p) mass with n1 > n_max1 or N − n1 > n_max2.
double sector_tail(const cavity::CorrelatedPairSpec& spec, int n_max1, int n_max2) {
    const double q = spec.mean_charge1 + spec.mean_charge2;
    if (q == 0.0) return 0.0;
    const double p = spec.mean_charge1 / q;
    const int n = spec.total;
    double tail = 0.0;
    for (int k = 0; k <= n; ++k) {
        if (k <= n_max1 && n - k <= n_max2) continue;
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double lp = k == 0 ? 0.0 : k * std::log(p);
        const double lq = n - k == 0 ? 0.0 : (n - k) * std::log1p(-p);
        tail += std::exp(log_binom + lp + lq);
    }
    return tail;
}

StateVector apply_global_phase(const StateVector& psi, double alpha) {
    StateVector out = geometry::apply_charge_phase(psi, Subsystem::Nucleon, alpha);
    out = geometry::apply_charge_phase(out, Subsystem::Cavity1, alpha);
    return geometry::apply_charge_phase(out, Subsystem::Cavity2, alpha);
}

MeasurementResult measure(const StateVector& psi) {
    MeasurementResult r;
    const hilbert::DenseMatrix rho = hilbert::reduced_density(psi, Subsystem::Nucleon);
    r.nucleon_reduced = rho;
    r.p_neutron = rho(0, 0).real();
    r.p_proton = rho(1, 1).real();
    r.leakage_total = std::max(0.0, 1.0 - psi.norm_squared());
    r.phase_inferred = std::numeric_limits<double>::quiet_NaN();
    return r;
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    if (const char* env = std::getenv("ASPHASE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Weight of each total-charge sector s + n1 + n2.
std::vector<double> charge_distribution(const StateVector& psi) {
    const SpaceSpec& sp = psi.space();
    std::vector<double> w(static_cast<std::size_t>(1 + sp.n_max1() + sp.n_max2() + 1), 0.0);
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        const auto b = sp.decode(idx);
        w[static_cast<std::size_t>(b.s + b.n1 + b.n2)] += std::norm(psi.amplitudes()(static_cast<Eigen::Index>(idx)));
    }
    return w;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

double wrap_angle(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

void validate(const Scenario& s) {
    if (s.interaction1.cavity != Subsystem::Cavity1) throw InvalidArgument("interaction1 must target cavity 1");
    if (s.interaction2.cavity != Subsystem::Cavity2) throw InvalidArgument("interaction2 must target cavity 2");
    for (double g : {s.interaction1.pulse_area, s.interaction2.pulse_area}) {
        if (!std::isfinite(g) || g < 0.0) throw InvalidArgument("pulse areas must be finite and >= 0");
    }
    if (s.nucleon_path.closed()) throw InvalidArgument("nucleon path must be open (from A to B)");
    geometry::check_clearance(s.nucleon_path, s.gauge.exclusion_radius);
    if (s.cavity2_path) {
        const auto& c2 = *s.cavity2_path;
        if (c2.closed()) throw InvalidArgument("cavity-2 path must be open (from A to B)");
        if (!close(c2.start(), s.nucleon_path.start()) || !close(c2.end(), s.nucleon_path.end())) {
            throw InvalidArgument("cavity-2 path must start and end where the nucleon path does");
        }
        geometry::check_clearance(c2, s.gauge.exclusion_radius);
    }
    if (s.n_max1 && *s.n_max1 < 0) throw InvalidArgument("n_max1 must be >= 0");
    if (s.n_max2 && *s.n_max2 < 1) throw InvalidArgument("n_max2 must be >= 1 (the second cavity is required)");
}

Truncation truncation_for(const Scenario& s) {
    return std::visit(
        overloaded{
            [&](const IndependentPreparation& p) {
                Truncation t;
                t.n_max1 = s.n_max1.value_or(cavity::default_truncation(p.cavity1.mean_charge));
                t.n_max2 = s.n_max2.value_or(cavity::default_truncation(p.cavity2.mean_charge));
                t.tail_mass = cavity::truncation_tail(p.cavity1.mean_charge, t.n_max1) +
                              cavity::truncation_tail(p.cavity2.mean_charge, t.n_max2);
                return t;
            },
            [&](const cavity::CorrelatedPairSpec& p) {
                Truncation t;
                t.n_max1 = s.n_max1.value_or(p.total + 1);
                t.n_max2 = s.n_max2.value_or(p.total + 1);
                t.tail_mass = sector_tail(p, t.n_max1, t.n_max2);
                return t;
            },
            [&](const cavity::BeamSplitterSpec& p) {
                Truncation t;
                t.n_max1 = s.n_max1.value_or(p.mesons + 1);
                t.n_max2 = s.n_max2.value_or(p.mesons + 1);
                return t;
            },
        },
        s.preparation);
}

SpaceSpec space_for(const Scenario& s) {
    const Truncation t = truncation_for(s);
    return hilbert::make_space(t.n_max1, t.n_max2);
}

StateVector initial_state(const Scenario& s) {
    const SpaceSpec space = space_for(s);
    return std::visit(
        overloaded{
            [&](const IndependentPreparation& p) {
                Amplitudes nucleon = Amplitudes::Zero(2);
                nucleon(static_cast<int>(s.initial_nucleon)) = 1.0;
                return StateVector::product(space, nucleon,
                                            cavity::coherent_factor(p.cavity1, space.n_max1(), s.tail_tolerance),
                                            cavity::coherent_factor(p.cavity2, space.n_max2(), s.tail_tolerance));
            },
            [&](const cavity::CorrelatedPairSpec& p) { return cavity::correlated_pair(p, space, s.initial_nucleon); },
            [&](const cavity::BeamSplitterSpec& p) {
                return cavity::beam_splitter_state(p, space, s.initial_nucleon);
            },
        },
        s.preparation);
}

StateVector final_state(const Scenario& s) {
    validate(s);
    StateVector psi = initial_state(s);
    if (s.global_phase) psi = apply_global_phase(psi, *s.global_phase);
    const bool calibrate = s.cavity2_path.has_value();
    if (calibrate && s.calibration_order == CalibrationOrder::BeforeFirstInteraction) {
        psi = geometry::transport(psi, Subsystem::Cavity2, *s.cavity2_path, s.gauge);
    }
    psi = jc::evolve(psi, s.interaction1);
    if (calibrate && s.calibration_order == CalibrationOrder::AfterFirstInteraction) {
        psi = geometry::transport(psi, Subsystem::Cavity2, *s.cavity2_path, s.gauge);
    }
    psi = geometry::transport(psi, Subsystem::Nucleon, s.nucleon_path, s.gauge);
    return jc::evolve(psi, s.interaction2);
}

MeasurementResult run(const Scenario& s) { return measure(final_state(s)); }

// ---------------------------------------------------------------------------

std::string to_string(const SweepSpec& spec) {
    switch (spec.parameter) {
    case SweepParameter::RelativePhase: return "dtheta";
    case SweepParameter::Flux: return "flux";
    case SweepParameter::GlobalPhase: return "alpha";
    case SweepParameter::Winding: return "winding";
    case SweepParameter::PulseArea1: return "gt1";
    case SweepParameter::PulseArea2: return "gt2";
    case SweepParameter::ChiCoefficient:
        return "chi:" + std::to_string(spec.chi_j) + "," + std::to_string(spec.chi_k);
    }
    return "unknown";
}

Scenario with_parameter(const Scenario& base, const SweepSpec& spec, double value) {
    Scenario s = base;
    switch (spec.parameter) {
    case SweepParameter::RelativePhase:
        std::visit(overloaded{
                       [&](IndependentPreparation& p) { p.cavity2.phase = p.cavity1.phase + value; },
                       [&](cavity::CorrelatedPairSpec& p) { p.relative_phase = value; },
                       [&](cavity::BeamSplitterSpec& p) {
                           p.reflection = std::polar(std::abs(p.reflection), std::arg(p.transmission) + value);
                       },
                   },
                   s.preparation);
        break;
    case SweepParameter::Flux: s.gauge.flux = value; break;
    case SweepParameter::GlobalPhase: s.global_phase = value; break;
    case SweepParameter::Winding: {
        const double r = std::round(value);
        if (std::abs(value - r) > 1e-9) throw InvalidArgument("winding sweep values must be integers");
        s.nucleon_path = geometry::with_extra_loops(base.nucleon_path, static_cast<int>(r));
        break;
    }
    case SweepParameter::PulseArea1: s.interaction1.pulse_area = value; break;
    case SweepParameter::PulseArea2: s.interaction2.pulse_area = value; break;
    case SweepParameter::ChiCoefficient: s.gauge.chi[{spec.chi_j, spec.chi_k}] = value; break;
    }
    return s;
}

std::optional<FringeFit> fit_fringe(std::span<const double> x, std::span<const double> p) {
    if (x.size() != p.size()) throw InvalidArgument("fit_fringe: size mismatch");
    if (x.size() < kMinFitPoints) return std::nullopt;
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(xi);
        design(i, 2) = std::sin(xi);
        y(i) = p[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
    FringeFit f;
    f.offset = c(0);
    f.amplitude = std::hypot(c(1), c(2));
    f.phase = std::atan2(c(2), c(1));
    f.visibility = f.offset != 0.0 ? f.amplitude / f.offset : std::numeric_limits<double>::quiet_NaN();
    f.residual = std::sqrt((design * c - y).squaredNorm() / static_cast<double>(n));
    return f;
}

SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec, std::span<const double> values,
                      unsigned threads) {
    SweepResult out;
    out.spec = spec;
    out.values.assign(values.begin(), values.end());
    out.results.resize(values.size());

    const unsigned workers = std::min<unsigned>(resolve_threads(threads), std::max<std::size_t>(values.size(), 1));
    std::vector<std::exception_ptr> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                out.results[i] = run(with_parameter(scenario, spec, values[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    if (spec.parameter == SweepParameter::RelativePhase) {
        std::vector<double> p;
        for (const auto& r : out.results) p.push_back(r.p_proton);
        out.fit = fit_fringe(out.values, p);
        out.fit_skipped = !out.fit.has_value();
        if (out.fit)
            for (auto& r : out.results) r.phase_inferred = out.fit->phase;
    }
    return out;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
    std::vector<double> v;
    if (count == 1) return {start};
    for (std::size_t i = 0; i < count; ++i) {
        v.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return v;
}

std::vector<double> phase_grid(std::size_t count) {
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(count));
    return v;
}

// ---------------------------------------------------------------------------

VisibilityComparison visibility_comparison(double q1, double q2, std::span<const double> dthetas, int total,
                                           double pulse_area1, double pulse_area2) {
    const geometry::Path straight({{1.0, 0.0}, {2.0, 0.0}}, false);
    auto scenario_with = [&](Preparation prep) {
        return Scenario{.preparation = std::move(prep),
                        .interaction1 = {Subsystem::Cavity1, pulse_area1},
                        .interaction2 = {Subsystem::Cavity2, pulse_area2},
                        .nucleon_path = straight};
    };
    const SweepSpec spec{SweepParameter::RelativePhase};

    const auto independent =
        run_sweep(scenario_with(IndependentPreparation{{q1, 0.0}, {q2, 0.0}}), spec, dthetas, 0);
    const auto correlated =
        run_sweep(scenario_with(cavity::CorrelatedPairSpec{q1, q2, 0.0, total}), spec, dthetas, 0);
    if (!independent.fit || !correlated.fit) {
        throw InvalidArgument("visibility comparison needs at least 5 phase values");
    }
    return {independent.fit->visibility, correlated.fit->visibility, *independent.fit, *correlated.fit};
}

TopologyReport topological_observability_check(const Scenario& base, std::span<const PathVariant> variants,
                                               std::span<const double> dthetas) {
    TopologyReport report;
    const SweepSpec spec{SweepParameter::RelativePhase};
    for (const auto& v : variants) {
        Scenario s = base;
        s.nucleon_path = v.nucleon_path;
        s.cavity2_path = v.cavity2_path;
        validate(s);
        const int w = geometry::winding_number(geometry::difference_loop(v.nucleon_path, v.cavity2_path),
                                               s.gauge.exclusion_radius);
        report.variants.push_back({w, run_sweep(s, spec, dthetas, 0)});
    }

    std::map<int, std::vector<std::size_t>> by_winding;
    for (std::size_t i = 0; i < report.variants.size(); ++i) by_winding[report.variants[i].winding].push_back(i);

    bool ok = true;
    for (const auto& [w, members] : by_winding) {
        TopologyReport::Group g;
        g.winding = w;
        g.members = members;
        const auto& first = report.variants[members.front()].sweep;
        g.phase = first.fit ? first.fit->phase : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t m : members) {
            const auto& other = report.variants[m].sweep;
            for (std::size_t i = 0; i < first.results.size(); ++i) {
                g.max_spread = std::max(g.max_spread, std::abs(other.results[i].p_proton - first.results[i].p_proton));
            }
        }
        ok = ok && g.max_spread <= report.group_tolerance;
        report.groups.push_back(g);
    }
    for (std::size_t i = 1; i < report.groups.size(); ++i) {
        const auto& a = report.groups[i - 1];
        const auto& b = report.groups[i];
        TopologyReport::Gap gap;
        gap.winding_from = a.winding;
        gap.winding_to = b.winding;
        gap.phase_gap = wrap_angle(b.phase - a.phase);
        gap.expected = wrap_angle(base.gauge.flux * (b.winding - a.winding));
        gap.error = std::abs(wrap_angle(gap.phase_gap - gap.expected));
        ok = ok && gap.error <= report.gap_tolerance;
        report.gaps.push_back(gap);
    }
    report.passed = ok;
    return report;
}

// ---------------------------------------------------------------------------

std::vector<InvariantCheck> run_invariant_checks(const Scenario& s) {
    validate(s);
    std::vector<InvariantCheck> checks;
    auto add = [&](std::string name, double value, double tol, std::string note = {}) {
        checks.push_back({std::move(name), value, tol, value <= tol, false, std::move(note)});
    };
    auto skip = [&](std::string name, std::string note) {
        checks.push_back({std::move(name), 0.0, 0.0, true, true, std::move(note)});
    };

    const StateVector psi0 = initial_state(s);
    const SpaceSpec space = psi0.space();

    // JC routes and conservation laws on the first pulse.
    const StateVector after1 = jc::evolve(psi0, s.interaction1);
    const StateVector after1_dense = jc::evolve_by_matrix_exponential(psi0, s.interaction1);
    add("jc1 dressed vs matrix exponential", (after1.amplitudes() - after1_dense.amplitudes()).cwiseAbs().maxCoeff(),
        1e-10);
    add("jc1 truncation leakage", jc::leakage(psi0, after1), 1e-12);
    add("jc1 total-charge distribution", max_abs_diff(charge_distribution(psi0), charge_distribution(after1)),
        1e-12);

    const StateVector mid = geometry::transport(after1, Subsystem::Nucleon, s.nucleon_path, s.gauge);
    const StateVector mid_n = mid.normalize();
    const StateVector after2 = jc::evolve(mid_n, s.interaction2);
    const StateVector after2_dense = jc::evolve_by_matrix_exponential(mid_n, s.interaction2);
    add("jc2 dressed vs matrix exponential", (after2.amplitudes() - after2_dense.amplitudes()).cwiseAbs().maxCoeff(),
        1e-10);
    add("jc2 total-charge distribution", max_abs_diff(charge_distribution(mid_n), charge_distribution(after2)),
        1e-12);

    const hilbert::Operator q_total(hilbert::OperatorKind::ChargeTotal, space);
    for (auto cav : {Subsystem::Cavity1, Subsystem::Cavity2}) {
        const hilbert::SparseMatrix h = jc::hamiltonian(space, cav);
        const hilbert::SparseMatrix comm = h * q_total.matrix() - q_total.matrix() * h;
        add(cav == Subsystem::Cavity1 ? "[H_jc1, Q_total]" : "[H_jc2, Q_total]", comm.norm(), 0.0);
    }

    // Line integrals: analytic vs quadrature.
    add("nucleon path: analytic vs quadrature",
        std::abs(geometry::line_integral(s.nucleon_path, s.gauge).phi -
                 geometry::line_integral_by_quadrature(s.nucleon_path, s.gauge)),
        1e-9);
    if (s.cavity2_path) {
        add("cavity-2 path: analytic vs quadrature",
            std::abs(geometry::line_integral(*s.cavity2_path, s.gauge).phi -
                     geometry::line_integral_by_quadrature(*s.cavity2_path, s.gauge)),
            1e-9);
        const auto loop = geometry::difference_loop(s.nucleon_path, *s.cavity2_path);
        const int w = geometry::winding_number(loop, s.gauge.exclusion_radius);
        const double open_diff = geometry::line_integral(s.nucleon_path, s.gauge).phi -
                                 geometry::line_integral(*s.cavity2_path, s.gauge).phi;
        add("phi(C) - phi(C') = winding * flux", std::abs(open_diff - w * s.gauge.flux), 1e-9,
            "winding " + std::to_string(w));
    } else {
        skip("phi(C) - phi(C') = winding * flux", "no calibration transport");
    }

    // Observable invariances.
    const MeasurementResult base = run(s);
    add("probability bookkeeping", std::abs(base.p_proton + base.p_neutron + base.leakage_total - 1.0), 1e-10);

    Scenario shifted = s;
    shifted.global_phase = s.global_phase.value_or(0.0) + 0.7;
    add("global charge phase invariance", std::abs(run(shifted).p_proton - base.p_proton), 1e-12);

    if (s.cavity2_path) {
        Scenario regauged = s;
        regauged.gauge.chi[{1, 0}] += 0.3;
        regauged.gauge.chi[{2, 1}] += -0.7;
        regauged.gauge.chi[{0, 3}] += 0.2;
        add("gauge invariance (polynomial chi)", std::abs(run(regauged).p_proton - base.p_proton), 1e-12);
    } else {
        skip("gauge invariance (polynomial chi)", "no calibration transport");
    }
    return checks;
}

} // namespace asphase::protocol
