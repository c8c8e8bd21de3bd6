// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

// Charged-meson cavity preparations: coherent states, total-meson-number
// sector projection, the correlated two-cavity state and the beam-splitter
// state. Unless stated otherwise the nucleon factor of a returned state is the
// neutron |N⟩ and an unused cavity is left in vacuum.

#pragma once

#include "asphase/hilbert.hpp"

namespace asphase::cavity {

using hilbert::Amplitudes;
using hilbert::cplx;
using hilbert::Nucleon;
using hilbert::SpaceSpec;
using hilbert::StateVector;
using hilbert::Subsystem;

/// |Q,θ⟩ with α = √Q·e^{iθ}.
struct CoherentSpec {
    double mean_charge = 0.0;
    double phase = 0.0;
    cplx alpha() const;
};

/// Fixed total meson number N with cavity 2 carrying phase Δθ relative to
/// cavity 1 (θ₂ = θ₁ + Δθ).
struct CorrelatedPairSpec {
    double mean_charge1 = 0.0;
    double mean_charge2 = 0.0;
    double relative_phase = 0.0;
    int total = 0;
};

/// N mesons through a splitter; transmitted amplitude t feeds cavity 1,
/// reflected amplitude r feeds cavity 2.
struct BeamSplitterSpec {
    int mesons = 0;
    cplx transmission{1.0, 0.0};
    cplx reflection{0.0, 0.0};
};

inline constexpr double kDefaultTailTolerance = 1e-10;

/// ceil(Q + 10√Q + 20).
int default_truncation(double mean_charge);

/// Σ_{n>n_max} e^{−Q}Qⁿ/n!, the Poisson mass dropped by truncation.
double truncation_tail(double mean_charge, int n_max);

/// c_n = e^{−Q/2}·Q^{n/2}·e^{inθ}/√(n!) for n = 0..n_max, not renormalized.
Amplitudes coherent_amplitudes(const CoherentSpec& spec, int n_max);

/// Renormalized single-mode coherent amplitudes; throws TruncationError if the
/// dropped tail exceeds `tail_tolerance`.
Amplitudes coherent_factor(const CoherentSpec& spec, int n_max,
                           double tail_tolerance = kDefaultTailTolerance);

StateVector coherent_state(const CoherentSpec& spec, const SpaceSpec& space, Subsystem which,
                           double tail_tolerance = kDefaultTailTolerance,
                           Nucleon nucleon = Nucleon::Neutron);

struct SectorProjection {
    StateVector state;   // unnormalized
    double weight = 0.0; // ⟨ψ|Π_N|ψ⟩
};

/// Zeroes every amplitude with n1 + n2 ≠ N. N outside [0, n_max1+n_max2]
/// yields the zero vector with zero weight.
SectorProjection project_total_meson_number(const StateVector& psi, int total);

/// Same projector realized as a uniform phase average
/// (1/M)·Σ_k e^{−iNθ_k}·e^{iθ_k(n̂₁+n̂₂)}ψ. Exact when M > n_max1 + n_max2.
StateVector project_by_phase_average(const StateVector& psi, int total, int samples);

/// Normalized projection of |Q,0⟩⊗|Q′,Δθ⟩ onto n1 + n2 = N.
StateVector correlated_pair(const CorrelatedPairSpec& spec, const SpaceSpec& space,
                            Nucleon nucleon = Nucleon::Neutron);

/// The correlated pair built as the discretized θ₁ integral of
/// e^{−iNθ₁}|Q,θ₁⟩|Q′,θ₁+Δθ⟩ with `samples` uniform nodes, then normalized.
StateVector correlated_pair_by_phase_average(const CorrelatedPairSpec& spec, const SpaceSpec& space,
                                             int samples, Nucleon nucleon = Nucleon::Neutron);

/// (t·a⁺₁ + r·a⁺₂)^N/√(N!)|0,0⟩ = Σ_k √C(N,k)·t^k·r^{N−k}|k, N−k⟩.
StateVector beam_splitter_state(const BeamSplitterSpec& spec, const SpaceSpec& space,
                                Nucleon nucleon = Nucleon::Neutron);

} // namespace asphase::cavity
