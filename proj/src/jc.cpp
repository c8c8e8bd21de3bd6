// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/jc.hpp"

#include "asphase/cavity.hpp"
#include "asphase/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

namespace asphase::jc {

using hilbert::Amplitudes;
using hilbert::DenseMatrix;

namespace {

void validate(const StateVector& psi, const InteractionSpec& spec) {
    if (spec.cavity == Subsystem::Nucleon) throw InvalidArgument("interaction target must be a cavity");
    if (!std::isfinite(spec.pulse_area) || spec.pulse_area < 0.0) {
        throw InvalidArgument("pulse area gT must be finite and >= 0");
    }
    if (spec.cavity == Subsystem::Cavity2 && !psi.space().has_cavity2()) {
        throw InvalidArgument("interaction with cavity 2, but the space has no second cavity");
    }
    const double n2 = psi.norm_squared();
    if (std::abs(n2 - 1.0) > kInputNormTolerance) {
        throw InvalidArgument("jc evolution needs a normalized input (norm^2 = " + std::to_string(n2) + ")");
    }
}

// Flat index of (s, n) on the interacting cavity with `spectator` on the other.
std::size_t flat(const SpaceSpec& sp, Subsystem cavity, int s, int n, int spectator) {
    return cavity == Subsystem::Cavity1 ? sp.index(s, n, spectator) : sp.index(s, spectator, n);
}

int spectator_max(const SpaceSpec& sp, Subsystem cavity) {
    return cavity == Subsystem::Cavity1 ? sp.n_max2() : sp.n_max1();
}

} // namespace

StateVector evolve(const StateVector& psi, const InteractionSpec& spec) {
    validate(psi, spec);
    const SpaceSpec& sp = psi.space();
    const int n_max = sp.n_max(spec.cavity);
    const Amplitudes& in = psi.amplitudes();
    Amplitudes out = in;

    for (int m = 0; m <= spectator_max(sp, spec.cavity); ++m) {
        for (int n = 0; n <= n_max; ++n) {
            const double angle = spec.pulse_area * std::sqrt(n + 1.0);
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            const auto ip = static_cast<Eigen::Index>(flat(sp, spec.cavity, 1, n, m));
            if (n == n_max) {
                // Partner |N,n_max+1⟩ is outside the space; its share is lost.
                out(ip) = c * in(ip);
                continue;
            }
            const auto in_ = static_cast<Eigen::Index>(flat(sp, spec.cavity, 0, n + 1, m));
            const cplx p = in(ip);
            const cplx q = in(in_);
            out(ip) = c * p - cplx(0.0, s) * q;
            out(in_) = c * q - cplx(0.0, s) * p;
        }
    }
    return StateVector(sp, std::move(out));
}

StateVector evolve_by_matrix_exponential(const StateVector& psi, const InteractionSpec& spec) {
    validate(psi, spec);
    const SpaceSpec& sp = psi.space();
    const int n_max = sp.n_max(spec.cavity);

    // H on nucleon ⊗ cavity with levels 0..n_max+1, local index s·(n_max+2) + n.
    const int levels = n_max + 2;
    const int local_dim = 2 * levels;
    DenseMatrix h = DenseMatrix::Zero(local_dim, local_dim);
    for (int n = 0; n + 1 < levels; ++n) {
        const double g = std::sqrt(n + 1.0);
        h(1 * levels + n, 0 * levels + n + 1) = g; // σ⁺a⁻ : |N,n+1⟩ → |P,n⟩
        h(0 * levels + n + 1, 1 * levels + n) = g; // σ⁻a⁺
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<cplx>() * cplx(0.0, -spec.pulse_area)).array().exp().matrix();
    const DenseMatrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

    const Amplitudes& in = psi.amplitudes();
    Amplitudes out = Amplitudes::Zero(in.size());
    Eigen::VectorXcd local(local_dim);
    for (int m = 0; m <= spectator_max(sp, spec.cavity); ++m) {
        local.setZero();
        for (int s = 0; s < 2; ++s)
            for (int n = 0; n <= n_max; ++n)
                local(s * levels + n) = in(static_cast<Eigen::Index>(flat(sp, spec.cavity, s, n, m)));
        const Eigen::VectorXcd evolved = u * local;
        for (int s = 0; s < 2; ++s)
            for (int n = 0; n <= n_max; ++n)
                out(static_cast<Eigen::Index>(flat(sp, spec.cavity, s, n, m))) = evolved(s * levels + n);
    }
    return StateVector(sp, std::move(out));
}

hilbert::SparseMatrix hamiltonian(const SpaceSpec& space, Subsystem cavity) {
    using hilbert::Operator;
    using hilbert::OperatorKind;
    if (cavity == Subsystem::Nucleon) throw InvalidArgument("hamiltonian: target must be a cavity");
    const bool first = cavity == Subsystem::Cavity1;
    const Operator lower(first ? OperatorKind::Lower1 : OperatorKind::Lower2, space);
    const Operator raise(first ? OperatorKind::Raise1 : OperatorKind::Raise2, space);
    const Operator sp(OperatorKind::SigmaPlus, space);
    const Operator sm(OperatorKind::SigmaMinus, space);
    return hilbert::SparseMatrix(sp.matrix() * lower.matrix() + sm.matrix() * raise.matrix());
}

NucleonAmplitudes ramsey_amplitudes_large_q(double pulse_area, double mean_charge, double phase) {
    if (!(mean_charge > 0.0)) throw InvalidArgument("large-Q amplitudes need Q > 0");
    const double angle = pulse_area * std::sqrt(mean_charge);
    return {cplx(std::cos(angle), 0.0), cplx(0.0, 1.0) * std::polar(1.0, phase) * std::sin(angle)};
}

NucleonAmplitudes ramsey_amplitudes_large_q_evolved(double pulse_area, double mean_charge, double phase) {
    const NucleonAmplitudes opposite = ramsey_amplitudes_large_q(pulse_area, mean_charge, phase);
    return {std::conj(opposite.proton), std::conj(opposite.neutron)};
}

double large_q_fidelity(double mean_charge, double angle, double phase) {
    const double pulse_area = angle / std::sqrt(mean_charge);
    const NucleonAmplitudes ideal = ramsey_amplitudes_large_q_evolved(pulse_area, mean_charge, phase);
    const SpaceSpec space = hilbert::make_space(cavity::default_truncation(mean_charge), 0);
    const StateVector psi = cavity::coherent_state({mean_charge, phase}, space, Subsystem::Cavity1,
                                                   cavity::kDefaultTailTolerance, hilbert::Nucleon::Proton);
    const StateVector out = evolve(psi, {Subsystem::Cavity1, pulse_area});
    const DenseMatrix rho = hilbert::reduced_density(out, Subsystem::Nucleon);
    // Basis order is (N, P).
    Eigen::Vector2cd chi(ideal.neutron, ideal.proton);
    return (chi.adjoint() * rho * chi)(0, 0).real();
}

double leakage(const StateVector& before, const StateVector& after) {
    if (!(before.space() == after.space())) throw SpaceMismatch("leakage: different spaces");
    return std::abs(before.norm_squared() - after.norm_squared());
}

} // namespace asphase::jc
