#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "wislab/geometry.hpp"
#include "wislab/types.hpp"

namespace wislab {

/// Small sinusoidal displacement superposed on a trajectory at synthesis time
/// (limb/torso motion). Not part of position(): speed contracts are stated for
/// the waypoint path alone.
struct MicroMotion {
    double amplitude_m = 0.0;
    double freq_hz = 0.0;
    double phase_rad = 0.0;
    Vec2 direction{1.0, 0.0};  // unit vector

    Vec2 displacement(double t) const {
        const double s = amplitude_m * std::sin(6.283185307179586476925286766559 * freq_hz * t + phase_rad);
        return direction * s;
    }
};

/// Piecewise-linear 2-D path with constant-speed segments, plus an optional
/// micro-motion term and a time-independent complex reflectivity.
class ScattererTrajectory {
  public:
    /// waypoint_times must be strictly increasing and start the path; position
    /// holds at the endpoints outside [front, back].
    ScattererTrajectory(std::vector<double> waypoint_times, std::vector<Vec2> waypoints,
                        std::complex<double> reflectivity,
                        std::optional<MicroMotion> micro = std::nullopt);

    /// Stationary scatterer.
    static ScattererTrajectory fixed(Vec2 position, std::complex<double> reflectivity,
                                     std::optional<MicroMotion> micro = std::nullopt);

    /// Waypoint path only (no micro-motion): continuous, piecewise-linear.
    Vec2 position(double t) const;

    /// position(t) plus the micro-motion displacement; what the channel sees.
    Vec2 displaced_position(double t) const;

    std::complex<double> reflectivity() const { return reflectivity_; }
    const std::optional<MicroMotion>& micro_motion() const { return micro_; }
    const std::vector<double>& waypoint_times() const { return times_; }
    const std::vector<Vec2>& waypoints() const { return points_; }

  private:
    std::vector<double> times_;
    std::vector<Vec2> points_;
    std::complex<double> reflectivity_;
    std::optional<MicroMotion> micro_;
};

/// Non-geometric propagation path: fixed delay and gain, zero per-antenna
/// phase (broadside arrival). Models LOS and wall bounces.
struct StaticPath {
    double delay_s = 0.0;
    std::complex<double> gain{0.0, 0.0};
};

/// Bistatic scene: one tx, one rx array origin, static paths and first-order
/// moving point scatterers, all in 2-D.
struct Scene {
    Vec2 tx_pos{0.0, 0.0};
    Vec2 rx_pos{4.0, 0.0};
    std::vector<StaticPath> static_paths;
    std::vector<ScattererTrajectory> scatterers;
    ActivityClass label = ActivityClass::Empty;

    /// Throws std::invalid_argument on violated invariants (negative delays,
    /// coincident terminals, zero reflectivity).
    void validate() const;
};

/// Per-class speed ranges for generated trajectories, m/s.
inline constexpr double kWalkingSpeedMin = 1.0;
inline constexpr double kWalkingSpeedMax = 1.8;
inline constexpr double kRunningSpeedMin = 2.2;
inline constexpr double kRunningSpeedMax = 3.2;

/// Builds a seeded scene for one activity class over [0, duration]:
/// every class gets a line-of-sight path (tx-rx spacing 4 m) plus 2-4 wall
/// reflections; InPlace adds a stationary scatterer with micro-motion only;
/// Walking/Running add a random-waypoint scatterer whose segment speeds are
/// drawn from the class range, plus a gait-like micro-motion.
Scene generate_activity_scene(ActivityClass label, double duration_s, std::uint64_t seed);

}  // namespace wislab
