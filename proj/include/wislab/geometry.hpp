#pragma once

#include <cmath>

#include "wislab/errors.hpp"

namespace wislab {

/// 2-D point/vector, meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    /// Counterclockwise perpendicular.
    Vec2 perp() const { return {-y, x}; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Single-bounce bistatic path parameters.
/// aoa is measured at the receive array: the array axis points from tx to rx,
/// broadside is its counterclockwise perpendicular, and
/// aoa = atan2(s_hat . axis, s_hat . broadside) for s_hat = unit(rx -> scatterer).
struct PathGeometry {
    double path_length_m = 0.0;
    double delay_s = 0.0;
    double aoa_rad = 0.0;
};

/// Computes |tx - s| + |s - rx|, its delay at c = 2.998e8 m/s, and the AoA.
/// Throws DegenerateGeometryError when the scatterer coincides with tx or rx
/// (within 1e-9 m), where the bounce geometry is undefined.
PathGeometry path_geometry(Vec2 tx, Vec2 rx, Vec2 scatterer);

}  // namespace wislab
