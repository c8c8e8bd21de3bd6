// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Composite space nucleon ⊗ cavity1 ⊗ cavity2, built-in operators and
 *        state algebra.
 *
 * Basis ordering: flat index = (s·(n_max1+1) + n1)·(n_max2+1) + n2, with
 * s = 0 the neutron |N⟩ (charge 0) and s = 1 the proton |P⟩ (charge 1).
 * Each meson carries one unit of charge. A cavity with n_max = 0 is a
 * dimension-1 factor, which is how an absent second cavity is encoded.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>

namespace asphase::hilbert {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

enum class Nucleon : int { Neutron = 0, Proton = 1 };

enum class Subsystem { Nucleon, Cavity1, Cavity2 };

struct BasisLabel {
    int s = 0;
    int n1 = 0;
    int n2 = 0;
    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

class SpaceSpec {
public:
    /// Throws InvalidArgument on negative truncations.
    SpaceSpec(int n_max1, int n_max2);

    int n_max1() const noexcept { return n_max1_; }
    int n_max2() const noexcept { return n_max2_; }
    int n_max(Subsystem cavity) const;
    bool has_cavity2() const noexcept { return n_max2_ > 0; }

    std::size_t dim() const noexcept {
        return 2 * static_cast<std::size_t>(n_max1_ + 1) * static_cast<std::size_t>(n_max2_ + 1);
    }

    std::size_t index(int s, int n1, int n2) const noexcept {
        return (static_cast<std::size_t>(s) * (n_max1_ + 1) + n1) * (n_max2_ + 1) + n2;
    }
    std::size_t index(const BasisLabel& b) const noexcept { return index(b.s, b.n1, b.n2); }
    BasisLabel decode(std::size_t idx) const noexcept;

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

private:
    int n_max1_;
    int n_max2_;
};

SpaceSpec make_space(int n_max1, int n_max2);

/// Dense amplitudes over a SpaceSpec. Immutable once built; the normalized
/// flag is computed at construction (|⟨ψ|ψ⟩ − 1| < 1e-12).
class StateVector {
public:
    StateVector(SpaceSpec space, Amplitudes amplitudes);

    static StateVector basis(const SpaceSpec& space, const BasisLabel& label);
    /// Tensor product of per-factor amplitude vectors; sizes must match the
    /// factor dimensions (2, n_max1+1, n_max2+1).
    static StateVector product(const SpaceSpec& space, const Amplitudes& nucleon,
                               const Amplitudes& cavity1, const Amplitudes& cavity2);

    const SpaceSpec& space() const noexcept { return space_; }
    const Amplitudes& amplitudes() const noexcept { return amps_; }
    cplx operator[](const BasisLabel& b) const { return amps_(static_cast<Eigen::Index>(space_.index(b))); }
    bool normalized() const noexcept { return normalized_; }
    double norm_squared() const noexcept { return amps_.squaredNorm(); }

    /// Returns a copy rescaled to unit norm. Throws on a zero vector.
    [[nodiscard]] StateVector normalize() const;

private:
    SpaceSpec space_;
    Amplitudes amps_;
    bool normalized_;
};

inline constexpr double kNormalizedTolerance = 1e-12;

enum class OperatorKind {
    Lower1,
    Raise1,
    Lower2,
    Raise2,
    SigmaPlus,   // |N⟩ → |P⟩
    SigmaMinus,  // |P⟩ → |N⟩
    Number1,
    Number2,
    ChargeNucleon,
    ChargeTotal,
};

class Operator {
public:
    Operator(OperatorKind kind, const SpaceSpec& space);

    OperatorKind kind() const noexcept { return kind_; }
    const SpaceSpec& space() const noexcept { return space_; }
    const SparseMatrix& matrix() const noexcept { return matrix_; }

private:
    OperatorKind kind_;
    SpaceSpec space_;
    SparseMatrix matrix_;
};

/// Matrix-vector product. a⁺ on |n_max⟩ gives zero.
StateVector apply(const Operator& op, const StateVector& psi);

/// ⟨φ|ψ⟩, conjugate-linear in φ.
cplx inner(const StateVector& phi, const StateVector& psi);

/// ⟨ψ|O|ψ⟩ for a Hermitian O.
double expectation(const Operator& op, const StateVector& psi);

/// ‖(O − ⟨O⟩)ψ‖² for a Hermitian O: ⟨O²⟩ − ⟨O⟩² on a normalized ψ, in
/// centred form so that sharp states give ~ε² rather than ~ε·⟨O²⟩.
double variance(const Operator& op, const StateVector& psi);

/// Partial trace onto one factor. Result is Hermitian with the trace of ψ.
DenseMatrix reduced_density(const StateVector& psi, Subsystem keep);

/// Dimension of a single factor of the space.
int factor_dim(const SpaceSpec& space, Subsystem which);

} // namespace asphase::hilbert
