#include "wislab/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wislab/rng.hpp"

namespace wislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Rectangle the generated scatterers stay inside; keeps them in the array's
// broadside half-plane and away from both terminals.
constexpr double kAreaXMin = 0.6;
constexpr double kAreaXMax = 3.4;
constexpr double kAreaYMin = 0.8;
constexpr double kAreaYMax = 3.0;

Vec2 random_point(Rng& rng) {
    return {rng.uniform(kAreaXMin, kAreaXMax), rng.uniform(kAreaYMin, kAreaYMax)};
}

std::complex<double> random_phasor(Rng& rng, double mag_lo, double mag_hi) {
    const double mag = rng.uniform(mag_lo, mag_hi);
    const double ph = rng.uniform(0.0, kTwoPi);
    return std::polar(mag, ph);
}

}  // namespace

ScattererTrajectory::ScattererTrajectory(std::vector<double> waypoint_times, std::vector<Vec2> waypoints,
                                         std::complex<double> reflectivity,
                                         std::optional<MicroMotion> micro)
    : times_(std::move(waypoint_times)),
      points_(std::move(waypoints)),
      reflectivity_(reflectivity),
      micro_(std::move(micro)) {
    if (times_.empty() || times_.size() != points_.size())
        throw std::invalid_argument("trajectory: need matching, non-empty waypoint arrays");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("trajectory: waypoint times must be strictly increasing");
    if (std::abs(reflectivity_) <= 0.0)
        throw std::invalid_argument("trajectory: reflectivity must be non-zero");
    if (micro_ && std::abs(micro_->direction.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("trajectory: micro-motion direction must be a unit vector");
}

ScattererTrajectory ScattererTrajectory::fixed(Vec2 position, std::complex<double> reflectivity,
                                               std::optional<MicroMotion> micro) {
    return ScattererTrajectory({0.0}, {position}, reflectivity, std::move(micro));
}

Vec2 ScattererTrajectory::position(double t) const {
    if (points_.size() == 1 || t <= times_.front()) return points_.front();
    if (t >= times_.back()) return points_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double u = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return points_[lo] + (points_[hi] - points_[lo]) * u;
}

Vec2 ScattererTrajectory::displaced_position(double t) const {
    Vec2 p = position(t);
    if (micro_) p = p + micro_->displacement(t);
    return p;
}

void Scene::validate() const {
    if (distance(tx_pos, rx_pos) <= 1e-9)
        throw std::invalid_argument("scene: tx and rx must be separated");
    for (const auto& p : static_paths)
        if (!(p.delay_s >= 0.0)) throw std::invalid_argument("scene: static path delays must be >= 0");
    for (const auto& s : scatterers)
        if (std::abs(s.reflectivity()) <= 0.0)
            throw std::invalid_argument("scene: scatterer reflectivity must be non-zero");
}

namespace {

ScattererTrajectory random_waypoint_trajectory(Rng& rng, double duration_s, double speed_lo,
                                               double speed_hi, MicroMotion micro,
                                               std::complex<double> reflectivity) {
    std::vector<double> times{0.0};
    std::vector<Vec2> points{random_point(rng)};
    while (times.back() < duration_s) {
        Vec2 next = random_point(rng);
        // Re-draw very short hops so segments are long enough to carry the
        // commanded speed for a meaningful stretch.
        int guard = 0;
        while (distance(next, points.back()) < 0.5 && guard++ < 64) next = random_point(rng);
        const double speed = rng.uniform(speed_lo, speed_hi);
        times.push_back(times.back() + distance(next, points.back()) / speed);
        points.push_back(next);
    }
    return ScattererTrajectory(std::move(times), std::move(points), reflectivity, micro);
}

}  // namespace

Scene generate_activity_scene(ActivityClass label, double duration_s, std::uint64_t seed) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("scene: duration must be positive");
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(label), 1}));
    // Waypoint geometry uses a label-independent stream so that Walking and
    // Running scenes from the same seed traverse the same spatial path at
    // class-scaled speeds (their path-length rates then compare cleanly).
    Rng path_rng(derive_seed(seed, {2}));

    Scene scene;
    scene.label = label;
    scene.tx_pos = {0.0, 0.0};
    scene.rx_pos = {4.0, 0.0};

    // Line of sight plus 2-4 wall bounces. Non-LOS magnitudes sum below the
    // LOS gain so the composite response never passes through zero, which
    // keeps per-subcarrier phase steps small and unwrapping exact.
    scene.static_paths.push_back({distance(scene.tx_pos, scene.rx_pos) / kSpeedOfLight, {1.0, 0.0}});
    const int n_walls = static_cast<int>(rng.uniform_int(2, 4));
    for (int w = 0; w < n_walls; ++w) {
        const double extra_m = rng.uniform(2.0, 11.0);
        const double delay = (4.0 + extra_m) / kSpeedOfLight;
        scene.static_paths.push_back({delay, random_phasor(rng, 0.05, 0.15)});
    }

    if (label == ActivityClass::Empty) return scene;

    const std::complex<double> refl = random_phasor(rng, 0.2, 0.35);
    const double micro_dir_angle = rng.uniform(0.0, kTwoPi);
    const Vec2 micro_dir{std::cos(micro_dir_angle), std::sin(micro_dir_angle)};

    switch (label) {
        case ActivityClass::InPlace: {
            MicroMotion micro{rng.uniform(0.03, 0.06), rng.uniform(0.4, 0.9), rng.uniform(0.0, kTwoPi),
                              micro_dir};
            scene.scatterers.push_back(ScattererTrajectory::fixed(random_point(rng), refl, micro));
            break;
        }
        case ActivityClass::Walking: {
            MicroMotion micro{rng.uniform(0.10, 0.18), rng.uniform(1.4, 2.0), rng.uniform(0.0, kTwoPi),
                              micro_dir};
            scene.scatterers.push_back(random_waypoint_trajectory(
                path_rng, duration_s, kWalkingSpeedMin, kWalkingSpeedMax, micro, refl));
            break;
        }
        case ActivityClass::Running: {
            MicroMotion micro{rng.uniform(0.12, 0.22), rng.uniform(2.2, 3.0), rng.uniform(0.0, kTwoPi),
                              micro_dir};
            scene.scatterers.push_back(random_waypoint_trajectory(
                path_rng, duration_s, kRunningSpeedMin, kRunningSpeedMax, micro, refl));
            break;
        }
        default:
            break;
    }
    return scene;
}

}  // namespace wislab
