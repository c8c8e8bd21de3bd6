// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file jc.hpp
 * @brief Resonant Jaynes-Cummings pulse between the nucleon and one cavity.
 *
 * The interaction H = g(σ⁺a⁻ + σ⁻a⁺) acts for a square pulse of duration T
 * with the free Hamiltonian dropped, so a pulse is described entirely by its
 * area gT. Evolution convention: U = exp(−i·gT·(σ⁺a⁻ + σ⁻a⁺)).
 *
 * H only couples the pairs |P,n⟩ ↔ |N,n+1⟩ (Rabi angle gT·√(n+1)); |N,0⟩ is
 * dark. At the truncation edge the partner of |P,n_max⟩ lies outside the
 * space: the evolution returned here is the exact (untruncated) propagator
 * projected back onto the truncated space, so amplitude that would reach
 * |N,n_max+1⟩ is lost and shows up in leakage().
 */

#pragma once

#include "asphase/hilbert.hpp"

namespace asphase::jc {

using hilbert::cplx;
using hilbert::SpaceSpec;
using hilbert::StateVector;
using hilbert::Subsystem;

struct InteractionSpec {
    Subsystem cavity = Subsystem::Cavity1;
    double pulse_area = 0.0; // gT, dimensionless
};

/// Tolerance on |⟨ψ|ψ⟩ − 1| accepted as "normalized input". Looser than the
/// state flag so that a state carrying monitored leakage can be evolved again.
inline constexpr double kInputNormTolerance = 1e-6;

/// Dressed-pair evolution (closed-form 2×2 rotations).
StateVector evolve(const StateVector& psi, const InteractionSpec& spec);

/// Same propagator obtained from a dense Hermitian eigendecomposition of H on
/// nucleon ⊗ cavity, extended by one Fock level and projected back.
StateVector evolve_by_matrix_exponential(const StateVector& psi, const InteractionSpec& spec);

/// σ⁺a⁻ + σ⁻a⁺ on the truncated space (unit coupling).
hilbert::SparseMatrix hamiltonian(const SpaceSpec& space, Subsystem cavity);

struct NucleonAmplitudes {
    cplx proton;
    cplx neutron;
};

/// Large-Q closed form with the opposite phase convention:
/// (cos(gT√Q), i·e^{iθ}·sin(gT√Q)). Same probabilities as the evolved form.
NucleonAmplitudes ramsey_amplitudes_large_q(double pulse_area, double mean_charge, double phase);

/// The large-Q limit of evolve() for |P⟩⊗|Q,θ⟩:
/// (cos(gT√Q), −i·e^{−iθ}·sin(gT√Q)), the complex conjugate of ramsey_amplitudes_large_q.
NucleonAmplitudes ramsey_amplitudes_large_q_evolved(double pulse_area, double mean_charge, double phase);

/// ⟨χ|ρ|χ⟩ with ρ the nucleon-reduced state of evolve(|P⟩⊗|Q,θ⟩) at default
/// truncation, pulse area gT = angle/√Q, and χ the evolved large-Q closed form.
double large_q_fidelity(double mean_charge, double angle, double phase = 0.0);

/// |‖ψ_before‖² − ‖ψ_after‖²|.
double leakage(const StateVector& before, const StateVector& after);

} // namespace asphase::jc
