#include <cmath>

#include "doctest.h"
#include "wislab/errors.hpp"
#include "wislab/geometry.hpp"
#include "wislab/types.hpp"

using namespace wislab;

TEST_CASE("vector primitives") {
    const Vec2 v{3.0, 4.0};
    CHECK(v.norm() == 5.0);
    CHECK(v.normalized().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.perp().x == -4.0);  // counterclockwise quarter turn
    CHECK(v.perp().y == 3.0);
    CHECK(v.dot(v.perp()) == 0.0);
    CHECK(distance({1.0, 1.0}, {4.0, 5.0}) == 5.0);
}

TEST_CASE("bounce path length, delay and angle for a known layout") {
    const Vec2 tx{0.0, 0.0};
    const Vec2 rx{4.0, 0.0};
    const Vec2 s{2.0, 3.0};
    const PathGeometry g = path_geometry(tx, rx, s);

    // |tx-s| = |s-rx| = sqrt(13)
    CHECK(g.path_length_m == doctest::Approx(7.211102550927978).epsilon(1e-15));
    CHECK(g.delay_s == doctest::Approx(7.211102550927978 / 2.998e8).epsilon(1e-15));
    CHECK(g.delay_s == doctest::Approx(24.05304e-9).epsilon(1e-6));
    // Unit vector rx->s is (-2, 3)/sqrt(13); axis (1,0), broadside (0,1).
    CHECK(g.aoa_rad == doctest::Approx(std::atan2(-2.0, 3.0)).epsilon(1e-15));
}

TEST_CASE("broadside and endfire angles") {
    const Vec2 tx{0.0, 0.0};
    const Vec2 rx{4.0, 0.0};
    CHECK(path_geometry(tx, rx, {4.0, 5.0}).aoa_rad == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(path_geometry(tx, rx, {6.0, 0.0}).aoa_rad ==
          doctest::Approx(1.5707963267948966).epsilon(1e-12));
    CHECK(path_geometry(tx, rx, {4.0, -5.0}).aoa_rad ==
          doctest::Approx(3.141592653589793).epsilon(1e-12));
}

TEST_CASE("angle convention is independent of the array axis direction") {
    // Rotate the whole layout 90 degrees; the relative angle must not change.
    const PathGeometry ref = path_geometry({0.0, 0.0}, {4.0, 0.0}, {5.0, 2.0});
    const PathGeometry rot = path_geometry({0.0, 0.0}, {0.0, 4.0}, {-2.0, 5.0});
    CHECK(rot.aoa_rad == doctest::Approx(ref.aoa_rad).epsilon(1e-12));
    CHECK(rot.path_length_m == doctest::Approx(ref.path_length_m).epsilon(1e-12));
}

TEST_CASE("line-of-sight distance for the standard 4 m link") {
    CHECK(distance({0.0, 0.0}, {4.0, 0.0}) / kSpeedOfLight ==
          doctest::Approx(13.34223e-9).epsilon(1e-6));
}

TEST_CASE("degenerate layouts are rejected") {
    CHECK_THROWS_AS(path_geometry({1.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}), DegenerateGeometryError);
    CHECK_THROWS_AS(path_geometry({0.0, 0.0}, {4.0, 0.0}, {0.0, 0.0}), DegenerateGeometryError);
    CHECK_THROWS_AS(path_geometry({0.0, 0.0}, {4.0, 0.0}, {4.0, 1e-12}), DegenerateGeometryError);
}
