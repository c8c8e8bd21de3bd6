// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/cavity.hpp"

#include "asphase/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace asphase::cavity {

using hilbert::BasisLabel;

namespace {

Amplitudes unit(Eigen::Index dim, Eigen::Index at) {
    Amplitudes v = Amplitudes::Zero(dim);
    v(at) = 1.0;
    return v;
}

Amplitudes nucleon_factor(Nucleon n) { return unit(2, static_cast<int>(n)); }

// log(Q^{n/2}/√n!) with the Q = 0 convention 0^0 = 1.
double log_poisson_root(double q, int n) {
    if (n == 0) return 0.0;
    if (q == 0.0) return -std::numeric_limits<double>::infinity();
    return 0.5 * n * std::log(q) - 0.5 * std::lgamma(n + 1.0);
}

cplx int_pow(cplx base, int exponent) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

void require_two_cavities(const SpaceSpec& space, const char* what) {
    if (!space.has_cavity2()) {
        throw InvalidArgument(std::string(what) + " requires a two-cavity space");
    }
}

void require_non_negative(double q, const char* what) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw InvalidArgument(std::string(what) + ": mean charge must be finite and >= 0");
    }
}

} // namespace

cplx CoherentSpec::alpha() const { return std::polar(std::sqrt(mean_charge), phase); }

int default_truncation(double mean_charge) {
    require_non_negative(mean_charge, "default_truncation");
    return static_cast<int>(std::ceil(mean_charge + 10.0 * std::sqrt(mean_charge) + 20.0));
}

double truncation_tail(double mean_charge, int n_max) {
    require_non_negative(mean_charge, "truncation_tail");
    if (mean_charge == 0.0) return 0.0;
    if (n_max < 0) return 1.0;
    const double log_q = std::log(mean_charge);
    double sum = 0.0;
    for (int n = n_max + 1;; ++n) {
        const double term = std::exp(-mean_charge + n * log_q - std::lgamma(n + 1.0));
        sum += term;
        if (n > mean_charge && term <= sum * 1e-18) break;
    }
    return sum;
}

Amplitudes coherent_amplitudes(const CoherentSpec& spec, int n_max) {
    require_non_negative(spec.mean_charge, "coherent_amplitudes");
    Amplitudes c(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double mag = std::exp(-0.5 * spec.mean_charge + log_poisson_root(spec.mean_charge, n));
        c(n) = std::polar(mag, n * spec.phase);
    }
    return c;
}

Amplitudes coherent_factor(const CoherentSpec& spec, int n_max, double tail_tolerance) {
    const double tail = truncation_tail(spec.mean_charge, n_max);
    if (tail > tail_tolerance) {
        throw TruncationError("coherent state with Q=" + std::to_string(spec.mean_charge) +
                                  " loses tail mass " + std::to_string(tail) + " at n_max=" +
                                  std::to_string(n_max),
                              tail);
    }
    Amplitudes c = coherent_amplitudes(spec, n_max);
    return c / c.norm();
}

StateVector coherent_state(const CoherentSpec& spec, const SpaceSpec& space, Subsystem which,
                           double tail_tolerance, Nucleon nucleon) {
    if (which == Subsystem::Nucleon) throw InvalidArgument("coherent_state: target must be a cavity");
    const Amplitudes field = coherent_factor(spec, space.n_max(which), tail_tolerance);
    const Amplitudes vac1 = unit(space.n_max1() + 1, 0);
    const Amplitudes vac2 = unit(space.n_max2() + 1, 0);
    return which == Subsystem::Cavity1
               ? StateVector::product(space, nucleon_factor(nucleon), field, vac2)
               : StateVector::product(space, nucleon_factor(nucleon), vac1, field);
}

SectorProjection project_total_meson_number(const StateVector& psi, int total) {
    const SpaceSpec& sp = psi.space();
    Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(sp.dim()));
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        const BasisLabel b = sp.decode(idx);
        if (b.n1 + b.n2 == total) out(static_cast<Eigen::Index>(idx)) = psi.amplitudes()(static_cast<Eigen::Index>(idx));
    }
    const double weight = out.squaredNorm();
    return {StateVector(sp, std::move(out)), weight};
}

StateVector project_by_phase_average(const StateVector& psi, int total, int samples) {
    const SpaceSpec& sp = psi.space();
    if (samples <= sp.n_max1() + sp.n_max2()) {
        throw InvalidArgument("phase average needs more than n_max1 + n_max2 samples");
    }
    Amplitudes acc = Amplitudes::Zero(static_cast<Eigen::Index>(sp.dim()));
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / samples;
        for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
            const BasisLabel b = sp.decode(idx);
            acc(static_cast<Eigen::Index>(idx)) +=
                std::polar(1.0, (b.n1 + b.n2 - total) * theta) * psi.amplitudes()(static_cast<Eigen::Index>(idx));
        }
    }
    return StateVector(sp, acc / static_cast<double>(samples));
}

StateVector correlated_pair(const CorrelatedPairSpec& spec, const SpaceSpec& space, Nucleon nucleon) {
    require_two_cavities(space, "correlated_pair");
    require_non_negative(spec.mean_charge1, "correlated_pair");
    require_non_negative(spec.mean_charge2, "correlated_pair");
    if (spec.total < 0 || spec.total > space.n_max1() + space.n_max2()) {
        throw InvalidArgument("correlated_pair: total meson number " + std::to_string(spec.total) +
                              " outside the truncated space");
    }
    const int s = static_cast<int>(nucleon);
    const double q_sum = spec.mean_charge1 + spec.mean_charge2;

    // Log magnitudes of the in-range sector terms, shifted by their maximum
    // before exponentiation so large N does not underflow.
    const int lo = std::max(0, spec.total - space.n_max2());
    const int hi = std::min(spec.total, space.n_max1());
    std::vector<double> log_mag;
    double max_log = -std::numeric_limits<double>::infinity();
    for (int n1 = lo; n1 <= hi; ++n1) {
        const double l = log_poisson_root(spec.mean_charge1, n1) +
                         log_poisson_root(spec.mean_charge2, spec.total - n1);
        log_mag.push_back(l);
        max_log = std::max(max_log, l);
    }
    if (!std::isfinite(max_log)) throw InvalidArgument("correlated_pair: empty sector");

    double shifted_sum = 0.0;
    for (double l : log_mag) shifted_sum += std::exp(2.0 * (l - max_log));
    const double log_weight = -q_sum + 2.0 * max_log + std::log(shifted_sum);
    if (log_weight < std::log(1e-15)) throw InvalidArgument("correlated_pair: empty sector");

    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(space.dim()));
    const double scale = 1.0 / std::sqrt(shifted_sum);
    for (int n1 = lo; n1 <= hi; ++n1) {
        const int n2 = spec.total - n1;
        const double mag = std::exp(log_mag[static_cast<std::size_t>(n1 - lo)] - max_log) * scale;
        a(static_cast<Eigen::Index>(space.index(s, n1, n2))) = std::polar(mag, n2 * spec.relative_phase);
    }
    return StateVector(space, std::move(a));
}

StateVector correlated_pair_by_phase_average(const CorrelatedPairSpec& spec, const SpaceSpec& space,
                                             int samples, Nucleon nucleon) {
    require_two_cavities(space, "correlated_pair_by_phase_average");
    if (samples <= space.n_max1() + space.n_max2()) {
        throw InvalidArgument("phase average needs more than n_max1 + n_max2 samples");
    }
    const Amplitudes nuc = nucleon_factor(nucleon);
    Amplitudes acc = Amplitudes::Zero(static_cast<Eigen::Index>(space.dim()));
    for (int k = 0; k < samples; ++k) {
        const double theta1 = 2.0 * std::numbers::pi * k / samples;
        const Amplitudes c1 = coherent_amplitudes({spec.mean_charge1, theta1}, space.n_max1());
        const Amplitudes c2 =
            coherent_amplitudes({spec.mean_charge2, theta1 + spec.relative_phase}, space.n_max2());
        const cplx weight = std::polar(1.0, -spec.total * theta1);
        acc += weight * StateVector::product(space, nuc, c1, c2).amplitudes();
    }
    const double n = acc.norm();
    if (n == 0.0) throw InvalidArgument("correlated_pair_by_phase_average: empty sector");
    return StateVector(space, acc / n);
}

StateVector beam_splitter_state(const BeamSplitterSpec& spec, const SpaceSpec& space, Nucleon nucleon) {
    require_two_cavities(space, "beam_splitter_state");
    const double unitarity = std::norm(spec.transmission) + std::norm(spec.reflection);
    if (std::abs(unitarity - 1.0) > 1e-12) {
        throw InvalidArgument("beam splitter: |t|^2 + |r|^2 = " + std::to_string(unitarity) + " != 1");
    }
    if (spec.mesons < 0) throw InvalidArgument("beam splitter: meson number must be >= 0");
    if (space.n_max1() < spec.mesons || space.n_max2() < spec.mesons) {
        throw InvalidArgument("beam splitter: truncation smaller than meson number " +
                              std::to_string(spec.mesons));
    }
    const int n = spec.mesons;
    const int s = static_cast<int>(nucleon);
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(space.dim()));
    for (int k = 0; k <= n; ++k) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        a(static_cast<Eigen::Index>(space.index(s, k, n - k))) =
            std::exp(0.5 * log_binom) * int_pow(spec.transmission, k) * int_pow(spec.reflection, n - k);
    }
    return StateVector(space, std::move(a));
}

} // namespace asphase::cavity
