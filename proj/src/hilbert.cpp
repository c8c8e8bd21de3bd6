// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/hilbert.hpp"

#include "asphase/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace asphase::hilbert {

SpaceSpec::SpaceSpec(int n_max1, int n_max2) : n_max1_(n_max1), n_max2_(n_max2) {
    if (n_max1 < 0 || n_max2 < 0) {
        throw InvalidArgument("truncation must be non-negative (got n_max1=" + std::to_string(n_max1) +
                              ", n_max2=" + std::to_string(n_max2) + ")");
    }
}

int SpaceSpec::n_max(Subsystem cavity) const {
    switch (cavity) {
    case Subsystem::Cavity1: return n_max1_;
    case Subsystem::Cavity2: return n_max2_;
    case Subsystem::Nucleon: break;
    }
    throw InvalidArgument("n_max: subsystem is not a cavity");
}

BasisLabel SpaceSpec::decode(std::size_t idx) const noexcept {
    const auto d2 = static_cast<std::size_t>(n_max2_ + 1);
    const auto d1 = static_cast<std::size_t>(n_max1_ + 1);
    BasisLabel b;
    b.n2 = static_cast<int>(idx % d2);
    idx /= d2;
    b.n1 = static_cast<int>(idx % d1);
    b.s = static_cast<int>(idx / d1);
    return b;
}

SpaceSpec make_space(int n_max1, int n_max2) { return SpaceSpec(n_max1, n_max2); }

int factor_dim(const SpaceSpec& space, Subsystem which) {
    switch (which) {
    case Subsystem::Nucleon: return 2;
    case Subsystem::Cavity1: return space.n_max1() + 1;
    case Subsystem::Cavity2: return space.n_max2() + 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(SpaceSpec space, Amplitudes amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != space_.dim()) {
        throw SpaceMismatch("amplitude vector length " + std::to_string(amps_.size()) +
                            " does not match space dimension " + std::to_string(space_.dim()));
    }
    normalized_ = std::abs(amps_.squaredNorm() - 1.0) < kNormalizedTolerance;
}

StateVector StateVector::basis(const SpaceSpec& space, const BasisLabel& label) {
    if (label.s < 0 || label.s > 1 || label.n1 < 0 || label.n1 > space.n_max1() || label.n2 < 0 ||
        label.n2 > space.n_max2()) {
        throw InvalidArgument("basis label outside the truncated space");
    }
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(space.dim()));
    a(static_cast<Eigen::Index>(space.index(label))) = 1.0;
    return StateVector(space, std::move(a));
}

StateVector StateVector::product(const SpaceSpec& space, const Amplitudes& nucleon,
                                 const Amplitudes& cavity1, const Amplitudes& cavity2) {
    if (nucleon.size() != 2 || cavity1.size() != space.n_max1() + 1 ||
        cavity2.size() != space.n_max2() + 1) {
        throw SpaceMismatch("product state: factor sizes do not match the space");
    }
    Amplitudes a(static_cast<Eigen::Index>(space.dim()));
    Eigen::Index k = 0;
    for (int s = 0; s < 2; ++s)
        for (int n1 = 0; n1 <= space.n_max1(); ++n1)
            for (int n2 = 0; n2 <= space.n_max2(); ++n2)
                a(k++) = nucleon(s) * cavity1(n1) * cavity2(n2);
    return StateVector(space, std::move(a));
}

StateVector StateVector::normalize() const {
    const double n = amps_.norm();
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    return StateVector(space_, amps_ / n);
}

// ---------------------------------------------------------------------------
// Operators

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& t) {
    const auto n = static_cast<Eigen::Index>(dim);
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

SparseMatrix lowering(const SpaceSpec& sp, Subsystem cavity) {
    std::vector<Triplet> t;
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        BasisLabel b = sp.decode(idx);
        int& n = cavity == Subsystem::Cavity1 ? b.n1 : b.n2;
        if (n == 0) continue;
        const double amp = std::sqrt(static_cast<double>(n));
        --n;
        t.emplace_back(static_cast<Eigen::Index>(sp.index(b)), static_cast<Eigen::Index>(idx), amp);
    }
    return from_triplets(sp.dim(), t);
}

SparseMatrix sigma_plus(const SpaceSpec& sp) {
    std::vector<Triplet> t;
    for (int n1 = 0; n1 <= sp.n_max1(); ++n1)
        for (int n2 = 0; n2 <= sp.n_max2(); ++n2)
            t.emplace_back(static_cast<Eigen::Index>(sp.index(1, n1, n2)),
                           static_cast<Eigen::Index>(sp.index(0, n1, n2)), 1.0);
    return from_triplets(sp.dim(), t);
}

SparseMatrix diagonal(const SpaceSpec& sp, int weight_s, int weight_n1, int weight_n2) {
    std::vector<Triplet> t;
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        const BasisLabel b = sp.decode(idx);
        const double v = weight_s * b.s + weight_n1 * b.n1 + weight_n2 * b.n2;
        if (v != 0.0) t.emplace_back(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx), v);
    }
    return from_triplets(sp.dim(), t);
}

SparseMatrix build(OperatorKind kind, const SpaceSpec& sp) {
    switch (kind) {
    case OperatorKind::Lower1: return lowering(sp, Subsystem::Cavity1);
    case OperatorKind::Raise1: return lowering(sp, Subsystem::Cavity1).adjoint();
    case OperatorKind::Lower2: return lowering(sp, Subsystem::Cavity2);
    case OperatorKind::Raise2: return lowering(sp, Subsystem::Cavity2).adjoint();
    case OperatorKind::SigmaPlus: return sigma_plus(sp);
    case OperatorKind::SigmaMinus: return sigma_plus(sp).adjoint();
    case OperatorKind::Number1: return diagonal(sp, 0, 1, 0);
    case OperatorKind::Number2: return diagonal(sp, 0, 0, 1);
    case OperatorKind::ChargeNucleon: return diagonal(sp, 1, 0, 0);
    case OperatorKind::ChargeTotal:
        return SparseMatrix(diagonal(sp, 1, 0, 0) + diagonal(sp, 0, 1, 0) + diagonal(sp, 0, 0, 1));
    }
    throw InvalidArgument("unknown operator kind");
}

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
    if (!(a == b)) throw SpaceMismatch(std::string(what) + ": operands live on different spaces");
}

} // namespace

Operator::Operator(OperatorKind kind, const SpaceSpec& space)
    : kind_(kind), space_(space), matrix_(build(kind, space)) {}

StateVector apply(const Operator& op, const StateVector& psi) {
    require_same_space(op.space(), psi.space(), "apply");
    return StateVector(psi.space(), op.matrix() * psi.amplitudes());
}

cplx inner(const StateVector& phi, const StateVector& psi) {
    require_same_space(phi.space(), psi.space(), "inner");
    return phi.amplitudes().dot(psi.amplitudes());
}

double expectation(const Operator& op, const StateVector& psi) {
    require_same_space(op.space(), psi.space(), "expectation");
    return psi.amplitudes().dot(op.matrix() * psi.amplitudes()).real();
}

double variance(const Operator& op, const StateVector& psi) {
    require_same_space(op.space(), psi.space(), "variance");
    const Amplitudes o_psi = op.matrix() * psi.amplitudes();
    const double mean = psi.amplitudes().dot(o_psi).real();
    return (o_psi - mean * psi.amplitudes()).squaredNorm();
}

DenseMatrix reduced_density(const StateVector& psi, Subsystem keep) {
    const SpaceSpec& sp = psi.space();
    const int d_keep = factor_dim(sp, keep);
    const auto d_rest = static_cast<Eigen::Index>(sp.dim() / static_cast<std::size_t>(d_keep));

    // Reshape ψ into a (kept × complement) matrix M; then ρ = M·M†.
    DenseMatrix m = DenseMatrix::Zero(d_keep, d_rest);
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        const BasisLabel b = sp.decode(idx);
        int row = 0;
        Eigen::Index col = 0;
        switch (keep) {
        case Subsystem::Nucleon:
            row = b.s;
            col = static_cast<Eigen::Index>(b.n1) * (sp.n_max2() + 1) + b.n2;
            break;
        case Subsystem::Cavity1:
            row = b.n1;
            col = static_cast<Eigen::Index>(b.s) * (sp.n_max2() + 1) + b.n2;
            break;
        case Subsystem::Cavity2:
            row = b.n2;
            col = static_cast<Eigen::Index>(b.s) * (sp.n_max1() + 1) + b.n1;
            break;
        }
        m(row, col) = psi.amplitudes()(static_cast<Eigen::Index>(idx));
    }
    return m * m.adjoint();
}

} // namespace asphase::hilbert
