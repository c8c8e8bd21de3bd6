// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry.hpp
 * @brief Point fluxon at the origin: vector potential, polyline line
 *        integrals, winding numbers and charge-dependent transport phases.
 *
 * Natural units: ħ = 1 and the charge quantum is 1, so a unit charge taken
 * once around the fluxon acquires phase Φ. The vector potential is
 *
 *     A(x, y) = (Φ/2π)·(−y, x)/(x² + y²) + ∇χ(x, y),
 *
 * with χ a single-valued polynomial gauge function Σ c_jk·xʲ·yᵏ.
 */

#pragma once

#include "asphase/hilbert.hpp"

#include <map>
#include <utility>
#include <vector>

namespace asphase::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

inline constexpr double kDefaultExclusionRadius = 1e-6;

/// Planar polyline. If closed, the last point connects back to the first.
/// Invariants: at least two points, consecutive points distinct (including
/// last→first when closed).
class Path {
public:
    Path(std::vector<Point> points, bool closed);

    const std::vector<Point>& points() const noexcept { return points_; }
    bool closed() const noexcept { return closed_; }
    std::size_t segment_count() const noexcept { return closed_ ? points_.size() : points_.size() - 1; }
    std::pair<Point, Point> segment(std::size_t i) const;
    const Point& start() const noexcept { return points_.front(); }
    /// Final endpoint; for a closed path this is the start point.
    const Point& end() const noexcept { return closed_ ? points_.front() : points_.back(); }

private:
    std::vector<Point> points_;
    bool closed_;
};

/// Polynomial gauge term key: (j, k) ↦ coefficient of xʲ·yᵏ.
using ChiCoefficients = std::map<std::pair<int, int>, double>;

struct GaugeSpec {
    double flux = 0.0;
    ChiCoefficients chi;
    double exclusion_radius = kDefaultExclusionRadius;

    double chi_at(const Point& p) const;
    Point chi_gradient(const Point& p) const;
};

/// Line integral per unit charge.
struct PhaseResult {
    double phi = 0.0;
    /// Total signed angle swept at the origin (radians).
    double subtended_angle = 0.0;
};

/// Throws GeometryError("path intersects solenoid") inside the exclusion disc.
Point vector_potential(const Point& p, const GaugeSpec& gauge);

/// Throws GeometryError if any segment passes within `exclusion_radius`.
void check_clearance(const Path& path, double exclusion_radius);

double subtended_angle(const Path& path, double exclusion_radius = kDefaultExclusionRadius);

/// Analytic route: (Φ/2π)·subtended angle + χ(end) − χ(start).
PhaseResult line_integral(const Path& path, const GaugeSpec& gauge);

/// Adaptive Gauss-Kronrod quadrature of A·dr segment by segment (relative
/// tolerance per segment, bisection depth capped at 12).
double line_integral_by_quadrature(const Path& path, const GaugeSpec& gauge, double tolerance = 1e-12);

/// Throws InvalidArgument for open paths and NumericalInconsistency when the
/// accumulated angle is not within 1e-6 of a multiple of 2π.
int winding_number(const Path& path, double exclusion_radius = kDefaultExclusionRadius);

Path reversed(const Path& path);

/// `first` followed by `second`; requires first.end() == second.start()
/// within 1e-9. Both must be open.
Path concatenate(const Path& first, const Path& second);

/// Closed loop C − C′: C followed by C′ reversed. Requires shared endpoints.
Path difference_loop(const Path& c, const Path& c_prime);

/// Prepends |loops| octagonal circuits around the origin through the start
/// point (counter-clockwise for positive `loops`).
Path with_extra_loops(const Path& path, int loops);

/// exp(i·φ·Q̂_carrier)ψ.
hilbert::StateVector apply_charge_phase(const hilbert::StateVector& psi, hilbert::Subsystem carrier, double phi);

/// Point-like transport of the carrier along `path`: apply_charge_phase with
/// φ = line_integral(path, gauge).phi.
hilbert::StateVector transport(const hilbert::StateVector& psi, hilbert::Subsystem carrier, const Path& path,
                               const GaugeSpec& gauge);

} // namespace asphase::geometry
