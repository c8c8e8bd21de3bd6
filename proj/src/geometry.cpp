// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/geometry.hpp"

#include "asphase/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace asphase::geometry {

using hilbert::cplx;
using hilbert::StateVector;
using hilbert::Subsystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEndpointTolerance = 1e-9;

double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

double distance_to_origin(const Point& p, const Point& q) {
    const Point d{q.x - p.x, q.y - p.y};
    const double t = std::clamp(-dot(p, d) / dot(d, d), 0.0, 1.0);
    return std::hypot(p.x + t * d.x, p.y + t * d.y);
}

bool near(const Point& a, const Point& b) {
    return std::abs(a.x - b.x) <= kEndpointTolerance && std::abs(a.y - b.y) <= kEndpointTolerance;
}

// xᵉ with 0⁰ = 1.
double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace

Path::Path(std::vector<Point> points, bool closed) : points_(std::move(points)), closed_(closed) {
    if (points_.size() < 2) throw InvalidArgument("a path needs at least two points");
    for (std::size_t i = 0; i < segment_count(); ++i) {
        const auto [p, q] = segment(i);
        if (p == q) throw InvalidArgument("path has repeated consecutive point at index " + std::to_string(i));
    }
    for (const Point& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidArgument("path has non-finite coordinate");
    }
}

std::pair<Point, Point> Path::segment(std::size_t i) const {
    return {points_[i], points_[(i + 1) % points_.size()]};
}

double GaugeSpec::chi_at(const Point& p) const {
    double v = 0.0;
    for (const auto& [jk, c] : chi) v += c * ipow(p.x, jk.first) * ipow(p.y, jk.second);
    return v;
}

Point GaugeSpec::chi_gradient(const Point& p) const {
    Point g;
    for (const auto& [jk, c] : chi) {
        const auto [j, k] = jk;
        if (j > 0) g.x += c * j * ipow(p.x, j - 1) * ipow(p.y, k);
        if (k > 0) g.y += c * k * ipow(p.x, j) * ipow(p.y, k - 1);
    }
    return g;
}

Point vector_potential(const Point& p, const GaugeSpec& gauge) {
    const double r2 = p.x * p.x + p.y * p.y;
    if (std::sqrt(r2) < gauge.exclusion_radius) throw GeometryError("path intersects solenoid");
    const double k = gauge.flux / kTwoPi / r2;
    const Point g = gauge.chi_gradient(p);
    return {-k * p.y + g.x, k * p.x + g.y};
}

void check_clearance(const Path& path, double exclusion_radius) {
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const auto [p, q] = path.segment(i);
        if (distance_to_origin(p, q) < exclusion_radius) {
            throw GeometryError("path intersects solenoid (segment " + std::to_string(i) + ")");
        }
    }
}

double subtended_angle(const Path& path, double exclusion_radius) {
    check_clearance(path, exclusion_radius);
    // A straight segment clear of the origin subtends an angle in (−π, π),
    // which atan2(p×q, p·q) returns without any branch ambiguity.
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const auto [p, q] = path.segment(i);
        total += std::atan2(cross(p, q), dot(p, q));
    }
    return total;
}

PhaseResult line_integral(const Path& path, const GaugeSpec& gauge) {
    PhaseResult r;
    r.subtended_angle = subtended_angle(path, gauge.exclusion_radius);
    r.phi = gauge.flux / kTwoPi * r.subtended_angle;
    if (!path.closed()) r.phi += gauge.chi_at(path.end()) - gauge.chi_at(path.start());
    return r;
}

double line_integral_by_quadrature(const Path& path, const GaugeSpec& gauge, double tolerance) {
    check_clearance(path, gauge.exclusion_radius);
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const auto [p, q] = path.segment(i);
        const Point d{q.x - p.x, q.y - p.y};
        auto integrand = [&](double t) {
            const Point a = vector_potential({p.x + t * d.x, p.y + t * d.y}, gauge);
            return dot(a, d);
        };
        total += gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 12, tolerance);
    }
    return total;
}

int winding_number(const Path& path, double exclusion_radius) {
    if (!path.closed()) throw InvalidArgument("winding number needs a closed path");
    const double turns = subtended_angle(path, exclusion_radius) / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) {
        throw NumericalInconsistency("winding number residual " + std::to_string(turns - rounded) +
                                     " exceeds 1e-6");
    }
    return static_cast<int>(rounded);
}

Path reversed(const Path& path) {
    std::vector<Point> pts(path.points().rbegin(), path.points().rend());
    return Path(std::move(pts), path.closed());
}

Path concatenate(const Path& first, const Path& second) {
    if (first.closed() || second.closed()) throw InvalidArgument("concatenate: both paths must be open");
    if (!near(first.end(), second.start())) {
        throw InvalidArgument("concatenate: first path does not end where the second starts");
    }
    std::vector<Point> pts = first.points();
    pts.insert(pts.end(), second.points().begin() + 1, second.points().end());
    return Path(std::move(pts), false);
}

Path difference_loop(const Path& c, const Path& c_prime) {
    if (c.closed() || c_prime.closed()) throw InvalidArgument("difference loop: both paths must be open");
    if (!near(c.start(), c_prime.start()) || !near(c.end(), c_prime.end())) {
        throw InvalidArgument("difference loop: paths do not share endpoints");
    }
    std::vector<Point> pts = c.points();
    // C′ reversed, minus its first point (= end of C) and last point (= start of C).
    const auto& back = c_prime.points();
    for (auto it = back.rbegin() + 1; it + 1 != back.rend(); ++it) pts.push_back(*it);
    return Path(std::move(pts), true);
}

Path with_extra_loops(const Path& path, int loops) {
    if (loops == 0) return path;
    const Point a = path.start();
    const double radius = std::hypot(a.x, a.y);
    if (radius == 0.0) throw GeometryError("path intersects solenoid");
    const double a0 = std::atan2(a.y, a.x);
    const int steps = 8 * std::abs(loops);
    const double dir = loops > 0 ? 1.0 : -1.0;

    std::vector<Point> pts{a};
    for (int k = 1; k < steps; ++k) {
        const double ang = a0 + dir * kTwoPi * k / 8.0;
        pts.push_back({radius * std::cos(ang), radius * std::sin(ang)});
    }
    pts.insert(pts.end(), path.points().begin(), path.points().end());
    return Path(std::move(pts), path.closed());
}

StateVector apply_charge_phase(const StateVector& psi, Subsystem carrier, double phi) {
    const auto& sp = psi.space();
    hilbert::Amplitudes out = psi.amplitudes();
    for (std::size_t idx = 0; idx < sp.dim(); ++idx) {
        const auto b = sp.decode(idx);
        const int charge = carrier == Subsystem::Nucleon ? b.s : carrier == Subsystem::Cavity1 ? b.n1 : b.n2;
        if (charge != 0) out(static_cast<Eigen::Index>(idx)) *= std::polar(1.0, charge * phi);
    }
    return StateVector(sp, std::move(out));
}

StateVector transport(const StateVector& psi, Subsystem carrier, const Path& path, const GaugeSpec& gauge) {
    return apply_charge_phase(psi, carrier, line_integral(path, gauge).phi);
}

} // namespace asphase::geometry
