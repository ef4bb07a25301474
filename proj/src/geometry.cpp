#include "wislab/geometry.hpp"

#include "wislab/types.hpp"

namespace wislab {

PathGeometry path_geometry(Vec2 tx, Vec2 rx, Vec2 scatterer) {
    constexpr double kMinSeparation = 1e-9;
    if (distance(tx, rx) <= kMinSeparation)
        throw DegenerateGeometryError("path_geometry: tx and rx coincide");
    const double d_tx = distance(tx, scatterer);
    const double d_rx = distance(scatterer, rx);
    if (d_tx <= kMinSeparation || d_rx <= kMinSeparation)
        throw DegenerateGeometryError("path_geometry: scatterer coincides with a terminal");

    PathGeometry out;
    out.path_length_m = d_tx + d_rx;
    out.delay_s = out.path_length_m / kSpeedOfLight;

    const Vec2 axis = (rx - tx).normalized();
    const Vec2 broadside = axis.perp();
    const Vec2 s_hat = (scatterer - rx).normalized();
    out.aoa_rad = std::atan2(s_hat.dot(axis), s_hat.dot(broadside));
    return out;
}

}  // namespace wislab
