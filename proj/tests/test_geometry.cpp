// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/errors.hpp"
#include "asphase/geometry.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace asphase;
using namespace asphase::geometry;
using hilbert::cplx;
using hilbert::Subsystem;

namespace {

constexpr double kPi = std::numbers::pi;

double segment_distance_to_origin(Point p, Point q) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double t = std::clamp(-(p.x * dx + p.y * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return std::hypot(p.x + t * dx, p.y + t * dy);
}

double clearance(const Path& path) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const auto [p, q] = path.segment(i);
        d = std::min(d, segment_distance_to_origin(p, q));
    }
    return d;
}

/// Random closed polygon, possibly self-intersecting, kept at least
/// `min_clearance` away from the origin.
Path random_polygon(std::mt19937_64& rng, double min_clearance) {
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_int_distribution<int> count(3, 9);
    for (;;) {
        std::vector<Point> pts(static_cast<std::size_t>(count(rng)));
        for (auto& p : pts) p = {coord(rng), coord(rng)};
        Path path(pts, true);
        if (clearance(path) >= min_clearance) return path;
    }
}

Path square(double half, bool ccw) {
    std::vector<Point> pts{{half, -half}, {half, half}, {-half, half}, {-half, -half}};
    if (!ccw) std::reverse(pts.begin(), pts.end());
    return Path(pts, true);
}

} // namespace

TEST_CASE("vector potential") {
    const GaugeSpec g{2 * kPi, {}};
    CHECK(std::abs(vector_potential({1, 0}, g).x) < 1e-16);
    CHECK(vector_potential({1, 0}, g).y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(vector_potential({0, 2}, g).x == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::abs(vector_potential({0, 2}, g).y) < 1e-16);

    const GaugeSpec pure{0.0, {{{1, 0}, 1.0}}};
    CHECK(vector_potential({3, -4}, pure).x == 1.0);
    CHECK(vector_potential({3, -4}, pure).y == 0.0);

    CHECK_THROWS_AS(vector_potential({1e-8, 0}, g), GeometryError);
}

TEST_CASE("path construction") {
    CHECK_THROWS_AS(Path({{1, 0}}, false), InvalidArgument);
    CHECK_THROWS_AS(Path({{1, 0}, {1, 0}, {2, 0}}, false), InvalidArgument);
    CHECK_THROWS_AS(Path({{1, 0}, {2, 0}, {1, 0}}, true), InvalidArgument);
    CHECK_THROWS_AS(Path({{1, 0}, {NAN, 0}}, false), InvalidArgument);
    const Path tri({{1, 0}, {0, 1}, {-1, -1}}, true);
    CHECK(tri.segment_count() == 3);
    CHECK(tri.end() == tri.start());
}

TEST_CASE("closed loop around the fluxon picks up the flux") {
    const GaugeSpec g{1.0, {}};
    CHECK(line_integral(square(1.0, true), g).phi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(line_integral(square(1.0, false), g).phi == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(line_integral(Path({{1, 1}, {2, 1}, {2, 2}}, true), g).phi) < 1e-15);
}

TEST_CASE("open segment phases") {
    const Path seg({{1, 0}, {1, 1}}, false);
    CHECK(line_integral(seg, {2 * kPi, {}}).phi == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(line_integral(seg, {2 * kPi, {}}).subtended_angle == doctest::Approx(kPi / 4).epsilon(1e-15));

    // χ = x²y only adds χ(B) − χ(A).
    const Path open({{1, 0.5}, {-2, 1.0}, {-1, -2}}, false);
    const GaugeSpec bare{0.8, {}};
    const GaugeSpec dressed{0.8, {{{2, 1}, 1.0}}};
    const double shift = line_integral(open, dressed).phi - line_integral(open, bare).phi;
    CHECK(std::abs(shift - (1.0 * -2.0 - 1.0 * 0.5)) < 1e-12);
    // A closed loop is insensitive to χ.
    const Path loop({{1, 0.5}, {-2, 1.0}, {-1, -2}}, true);
    CHECK(std::abs(line_integral(loop, dressed).phi - line_integral(loop, bare).phi) < 1e-14);
}

TEST_CASE("winding numbers") {
    const Path ccw({{1, -1}, {0, 2}, {-1, -1}}, true);
    CHECK(winding_number(ccw) == 1);
    CHECK(winding_number(reversed(ccw)) == -1);
    CHECK(winding_number(Path({{1, 1}, {2, 1}, {2, 2}}, true)) == 0);
    CHECK_THROWS_AS(winding_number(Path({{1, -1}, {0, 2}}, false)), InvalidArgument);
    CHECK_THROWS_AS(winding_number(Path({{1, 0}, {-1, 0}, {0, 1}}, true)), GeometryError);
}

TEST_CASE("random polygons: phase is flux times winding") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> flux(-5.0, 5.0);
    int nonzero = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Path p = random_polygon(rng, 0.05);
        const GaugeSpec g{flux(rng), {}};
        const int w = winding_number(p);
        CHECK(w == oracle::crossing_winding(p));
        CHECK(std::abs(line_integral(p, g).phi / g.flux - w) < 1e-9);
        CHECK(std::abs(line_integral_by_quadrature(p, g) - line_integral(p, g).phi) < 1e-9);
        nonzero += w != 0;
    }
    CHECK(nonzero > 20);
}

TEST_CASE("quadrature routes agree on open paths with a gauge term") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Path open(random_polygon(rng, 0.3).points(), false);
        const GaugeSpec g{c(rng) * 3, {{{1, 1}, c(rng)}, {{0, 2}, c(rng)}, {{3, 0}, c(rng)}}};
        const double analytic = line_integral(open, g).phi;
        CHECK(std::abs(line_integral_by_quadrature(open, g) - analytic) < 1e-9);
        CHECK(std::abs(oracle::simpson_line_integral(open, g.flux, g.chi, 20000) - analytic) < 1e-7);
    }
}

TEST_CASE("path algebra") {
    const GaugeSpec g{1.3, {{{1, 2}, 0.4}}};
    const Path a({{1, 0}, {1, 1}, {-1, 1}}, false);
    const Path b({{-1, 1}, {-1, -1}, {0, -2}}, false);

    SUBCASE("additivity under concatenation") {
        const double sum = line_integral(a, g).phi + line_integral(b, g).phi;
        CHECK(std::abs(line_integral(concatenate(a, b), g).phi - sum) < 1e-13);
        CHECK_THROWS_AS(concatenate(b, a), InvalidArgument);
    }
    SUBCASE("reversal flips the sign") {
        CHECK(std::abs(line_integral(reversed(a), g).phi + line_integral(a, g).phi) < 1e-14);
    }
    SUBCASE("homotopic paths agree, different sides differ by the flux") {
        const Path upper({{1, 0}, {1, 1}, {-1, 1}, {-1, 0.01}}, false);
        const Path upper2({{1, 0}, {2, 3}, {-3, 2}, {-1, 0.01}}, false);
        const Path lower({{1, 0}, {1, -1}, {-1, -1}, {-1, 0.01}}, false);
        CHECK(std::abs(line_integral(upper, g).phi - line_integral(upper2, g).phi) < 1e-13);
        CHECK(std::abs(line_integral(upper, g).phi - line_integral(lower, g).phi - g.flux) < 1e-13);
        CHECK(winding_number(difference_loop(upper, lower)) == 1);
        CHECK(winding_number(difference_loop(upper, upper2)) == 0);
    }
    SUBCASE("extra loops") {
        for (int k : {-2, -1, 1, 3}) {
            const Path looped = with_extra_loops(a, k);
            CHECK(looped.start() == a.start());
            CHECK(looped.end() == a.end());
            CHECK(std::abs(line_integral(looped, g).phi - line_integral(a, g).phi - k * g.flux) < 1e-12);
        }
    }
    SUBCASE("solenoid crossing") {
        CHECK_THROWS_AS(line_integral(Path({{-1, 0}, {1, 0}}, false), g), GeometryError);
        CHECK_THROWS_AS(line_integral_by_quadrature(Path({{-1, 0}, {1, 0}}, false), g), GeometryError);
    }
}

TEST_CASE("transport applies exp(i phi Q_carrier)") {
    const auto sp = hilbert::make_space(3, 2);
    const GaugeSpec g{0.9, {}};
    const Path loop = square(1.0, true);

    const auto p = hilbert::StateVector::basis(sp, {1, 0, 0});
    CHECK(std::abs(transport(p, Subsystem::Nucleon, loop, g)[{1, 0, 0}] - std::polar(1.0, 0.9)) < 1e-15);
    const auto n = hilbert::StateVector::basis(sp, {0, 0, 0});
    CHECK(std::abs(transport(n, Subsystem::Nucleon, loop, g)[{0, 0, 0}] - cplx(1.0, 0.0)) < 1e-15);

    // Cavity-2 with two mesons picks up 2φ; cavity-1 occupation is irrelevant.
    const auto m = hilbert::StateVector::basis(sp, {1, 3, 2});
    CHECK(std::abs(transport(m, Subsystem::Cavity2, loop, g)[{1, 3, 2}] - std::polar(1.0, 1.8)) < 1e-15);
    CHECK(std::abs(apply_charge_phase(m, Subsystem::Cavity1, 0.25)[{1, 3, 2}] - std::polar(1.0, 0.75)) < 1e-15);
}
