#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "doctest.h"
#include "wislab/channel.hpp"
#include "wislab/dsp.hpp"
#include "wislab/errors.hpp"
#include "wislab/geometry.hpp"
#include "wislab/scene.hpp"
#include "wislab/types.hpp"

using namespace wislab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

GridConfig tiny_grid(std::size_t n_subc, std::size_t n_ant = 1) {
    return GridConfig::make(5.785e9, 80e6, n_subc, n_ant, 0.0259118);
}

/// Tensor holding one complex tone exp(-j 2 pi f t_k) on a single channel:
/// the response of a path receding at rate f * lambda.
CfrTensor tone_tensor(double freq_hz, std::size_t n_snapshots, double period_s = 7.5e-3) {
    CfrTensor cfr(tiny_grid(1), {period_s, n_snapshots, 0.0});
    for (std::size_t k = 0; k < n_snapshots; ++k)
        cfr.at(k, 0, 0) = std::polar(1.0, -kTwoPi * freq_hz * period_s * static_cast<double>(k));
    return cfr;
}

std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

bool vectors_identical(const std::vector<DopplerVector>& a, const std::vector<DopplerVector>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].power != b[i].power) return false;
        if (a[i].bin_width_hz != b[i].bin_width_hz) return false;
        if (a[i].timestamp_s != b[i].timestamp_s) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("doppler config validation") {
    DopplerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.window_len = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.fft_len = 24;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.stride = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("constant series puts all power in the center bin") {
    CfrTensor cfr(tiny_grid(1), {7.5e-3, 25, 0.0});
    for (std::size_t k = 0; k < 25; ++k) cfr.at(k, 0, 0) = {1.0, 0.0};
    const DopplerConfig cfg;
    const DopplerVector v = doppler_spectrum(cfr, cfg);
    REQUIRE(v.power.size() == 64);
    CHECK(v.center_bin() == 32);
    // Hann window of length 25 sums to 12; the reassigned static term is
    // |mean * sum(w)|^2 = 144, and the mean-free windowed series is all zero.
    CHECK(v.power[32] == doctest::Approx(144.0).epsilon(1e-12));
    for (std::size_t b = 0; b < 64; ++b)
        if (b != 32) CHECK(v.power[b] == 0.0);
    CHECK(v.bin_width_hz == doctest::Approx(1.0 / (64.0 * 7.5e-3)).epsilon(1e-15));
    CHECK(v.timestamp_s == doctest::Approx(24.0 * 7.5e-3).epsilon(1e-15));
}

TEST_CASE("rectangular window without mean removal satisfies parseval") {
    const std::size_t W = 25;
    CfrTensor cfr(tiny_grid(1), {7.5e-3, W, 0.0});
    double energy = 0.0;
    for (std::size_t k = 0; k < W; ++k) {
        const auto v = std::polar(0.3 + 0.05 * static_cast<double>(k),
                                  0.7 * static_cast<double>(k * k % 13));
        cfr.at(k, 0, 0) = v;
        energy += std::norm(v);
    }
    DopplerConfig cfg;
    cfg.window = DopplerConfig::Window::Rectangular;
    cfg.remove_mean = false;
    const DopplerVector v = doppler_spectrum(cfr, cfg);
    double total = 0.0;
    for (double p : v.power) total += p;
    // Unnormalized length-64 transform: sum of bin powers = 64 * time energy.
    CHECK(total == doctest::Approx(64.0 * energy).epsilon(1e-12));
}

TEST_CASE("receding and approaching tones land on signed bins") {
    const double bin_width = 1.0 / (64.0 * 7.5e-3);

    SUBCASE("receding path: positive bin offset") {
        const DopplerVector v = doppler_spectrum(tone_tensor(9.0 * bin_width, 25), DopplerConfig{});
        CHECK(argmax(v.power) == v.center_bin() + 9);
        CHECK(v.bin_frequency_hz(argmax(v.power)) == doctest::Approx(9.0 * bin_width).epsilon(1e-12));
    }
    SUBCASE("approaching path: negative bin offset") {
        const DopplerVector v = doppler_spectrum(tone_tensor(-5.0 * bin_width, 25), DopplerConfig{});
        CHECK(argmax(v.power) == v.center_bin() - 5);
    }
    SUBCASE("beyond-nyquist tone aliases by the transform length") {
        // 36 bins of frequency folds to 36 - 64 = -28.
        const DopplerVector v = doppler_spectrum(tone_tensor(36.0 * bin_width, 25), DopplerConfig{});
        CHECK(argmax(v.power) == v.center_bin() - 28);
    }
}

TEST_CASE("doppler spectrum window-size contract") {
    const DopplerConfig cfg;
    CfrTensor too_few(tiny_grid(1), {7.5e-3, 10, 0.0});
    for (std::size_t k = 0; k < 10; ++k) too_few.at(k, 0, 0) = {1.0, 0.0};
    CHECK_THROWS_AS(doppler_spectrum(too_few, cfg), InsufficientDataError);
    CfrTensor too_many(tiny_grid(1), {7.5e-3, 26, 0.0});
    for (std::size_t k = 0; k < 26; ++k) too_many.at(k, 0, 0) = {1.0, 0.0};
    CHECK_THROWS_AS(doppler_spectrum(too_many, cfg), std::invalid_argument);
}

TEST_CASE("effective period override rescales the frequency axis") {
    CfrTensor cfr(tiny_grid(1), {7.5e-3, 25, 0.0});
    for (std::size_t k = 0; k < 25; ++k) cfr.at(k, 0, 0) = {1.0, 0.0};
    const DopplerVector v = doppler_spectrum(cfr, DopplerConfig{}, 3.0 * 7.5e-3);
    CHECK(v.bin_width_hz == doctest::Approx(1.0 / (64.0 * 3.0 * 7.5e-3)).epsilon(1e-15));
}

TEST_CASE("stream emits the documented number of windows") {
    const GridConfig grid = tiny_grid(2);
    CfrTensor cfr(grid, {7.5e-3, 280, 0.0});
    for (std::size_t k = 0; k < 280; ++k)
        for (std::size_t n = 0; n < 2; ++n) cfr.at(k, n, 0) = {1.0, 0.5};
    const DopplerConfig cfg;

    CHECK(doppler_vector_stream(cfr, cfg, 1).size() == 256);
    CHECK(doppler_vector_stream(cfr, cfg, 2).size() == 116);  // ceil(280/2)=140 kept
    CHECK(doppler_vector_stream(cfr, cfg, 5).size() == 32);   // 56 kept

    DopplerConfig strided = cfg;
    strided.stride = 4;
    CHECK(doppler_vector_stream(cfr, strided, 1).size() == 64);  // (280-25)/4+1

    const auto sub2 = doppler_vector_stream(cfr, cfg, 2);
    CHECK(sub2[0].bin_width_hz == doctest::Approx(1.0 / (64.0 * 2.0 * 7.5e-3)).epsilon(1e-15));
    CHECK(sub2[0].timestamp_s == doctest::Approx(48.0 * 7.5e-3).epsilon(1e-15));
    CHECK(sub2[1].timestamp_s == doctest::Approx(50.0 * 7.5e-3).epsilon(1e-15));
}

TEST_CASE("stream refuses captures shorter than one window") {
    CfrTensor cfr(tiny_grid(1), {7.5e-3, 40, 0.0});
    for (std::size_t k = 0; k < 40; ++k) cfr.at(k, 0, 0) = {1.0, 0.0};
    try {
        doppler_vector_stream(cfr, DopplerConfig{}, 2);
        FAIL("expected InsufficientDataError");
    } catch (const InsufficientDataError& e) {
        // Minimum for window 25 at subsample 2 is 2*24+1 = 49 snapshots.
        CHECK(std::string(e.what()).find("49") != std::string::npos);
        CHECK(std::string(e.what()).find("40") != std::string::npos);
    }
}

TEST_CASE("stream windows match standalone spectra bit for bit") {
    const GridConfig grid = tiny_grid(5, 2);
    const CaptureSchedule sched{7.5e-3, 61, 2.0};
    const Scene scene = generate_activity_scene(ActivityClass::Running, 0.5, 77);
    const CfrTensor cfr = add_noise(synthesize_cfr(scene, grid, sched), 12.0, 5);

    DopplerConfig cfg;
    cfg.stride = 3;
    const std::size_t subsample = 2;
    const auto stream = doppler_vector_stream(cfr, cfg, subsample);
    REQUIRE(stream.size() == (31 - 25) / 3 + 1);  // 61 snapshots -> 31 kept

    for (std::size_t w = 0; w < stream.size(); ++w) {
        // Gather the same decimated window into a standalone tensor whose
        // schedule reflects the effective sampling.
        const std::size_t first = w * cfg.stride * subsample;
        CaptureSchedule wsched{sched.inter_packet_period_s * static_cast<double>(subsample),
                               cfg.window_len, sched.snapshot_time(first)};
        CfrTensor window(grid, wsched);
        for (std::size_t i = 0; i < cfg.window_len; ++i)
            for (std::size_t n = 0; n < grid.n_subcarriers; ++n)
                for (std::size_t a = 0; a < grid.n_rx_antennas; ++a)
                    window.at(i, n, a) = cfr.at(first + i * subsample, n, a);
        const DopplerVector direct = doppler_spectrum(window, cfg);
        REQUIRE(direct.power.size() == stream[w].power.size());
        for (std::size_t b = 0; b < direct.power.size(); ++b)
            CHECK(direct.power[b] == stream[w].power[b]);
        CHECK(direct.bin_width_hz == stream[w].bin_width_hz);
        CHECK(direct.timestamp_s == stream[w].timestamp_s);
    }
}

TEST_CASE("stream is thread-count invariant") {
    const GridConfig grid = tiny_grid(3, 2);
    const Scene scene = generate_activity_scene(ActivityClass::Walking, 1.0, 13);
    const CfrTensor cfr = synthesize_cfr(scene, grid, {7.5e-3, 120, 0.0});
    const DopplerConfig cfg;
    CHECK(vectors_identical(doppler_vector_stream(cfr, cfg, 1, 1),
                            doppler_vector_stream(cfr, cfg, 1, 4)));
    CHECK(vectors_identical(doppler_vector_stream(cfr, cfg, 3, 2),
                            doppler_vector_stream(cfr, cfg, 3, 5)));
}

TEST_CASE("sanitize removes an exact linear-in-subcarrier phase") {
    const std::size_t n = 48;
    CfrTensor cfr(tiny_grid(n), {7.5e-3, 1, 0.0});
    const double amp = 0.8, intercept = 0.9, slope = 0.04;
    for (std::size_t i = 0; i < n; ++i)
        cfr.at(0, i, 0) = std::polar(amp, intercept + slope * static_cast<double>(i));
    const CfrTensor clean = sanitize_phase(cfr);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(clean.at(0, i, 0).real() == doctest::Approx(amp).epsilon(1e-12));
        CHECK(std::abs(clean.at(0, i, 0).imag()) < 1e-12);
    }
}

TEST_CASE("sanitize is idempotent and invariant to global rotations") {
    const GridConfig grid = tiny_grid(64);
    const Scene scene = generate_activity_scene(ActivityClass::InPlace, 0.5, 3);
    const CfrTensor cfr = synthesize_cfr(scene, grid, {7.5e-3, 4, 0.0});
    const CfrTensor once = sanitize_phase(cfr);
    const CfrTensor twice = sanitize_phase(once);
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(std::abs(once.data()[i] - twice.data()[i]) < 1e-9);

    CfrTensor rotated = cfr;
    for (std::size_t i = 0; i < rotated.size(); ++i)
        rotated.data()[i] *= std::polar(1.0, 1.234);
    const CfrTensor a = sanitize_phase(rotated);
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(std::abs(once.data()[i] - a.data()[i]) < 1e-9);
}

TEST_CASE("sanitized impaired capture matches the sanitized clean capture") {
    const GridConfig grid = tiny_grid(996);
    const CaptureSchedule sched{7.5e-3, 8, 0.0};
    const Scene scene = generate_activity_scene(ActivityClass::Walking, 0.1, 21);
    const CfrTensor clean = synthesize_cfr(scene, grid, sched);
    ImpairmentParams params;
    params.cfo_hz = 5000.0;
    params.timing_offset_s = 20e-9;
    params.timing_random = true;
    params.phase_jitter_std_rad = 0.1;
    const CfrTensor impaired = apply_impairments(clean, params, 99);

    const CfrTensor a = sanitize_phase(clean);
    const CfrTensor b = sanitize_phase(impaired);
    double max_abs = 0.0, max_diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        max_abs = std::max(max_abs, std::abs(a.data()[i]));
        max_diff = std::max(max_diff, std::abs(a.data()[i] - b.data()[i]));
    }
    CHECK(max_diff <= 1e-6 * max_abs);
}

TEST_CASE("sanitize skips and counts all-zero channels") {
    const GridConfig grid = tiny_grid(8, 2);
    CfrTensor cfr(grid, {7.5e-3, 2, 0.0});
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t n = 0; n < 8; ++n)
            for (std::size_t a = 0; a < 2; ++a)
                cfr.at(k, n, a) = std::polar(1.0, 0.1 * static_cast<double>(n + k + a));
    for (std::size_t n = 0; n < 8; ++n) cfr.at(1, n, 0) = {0.0, 0.0};

    std::size_t skipped = 123;
    const CfrTensor out = sanitize_phase(cfr, &skipped);
    CHECK(skipped == 1);
    for (std::size_t n = 0; n < 8; ++n) CHECK(out.at(1, n, 0) == std::complex<double>{0.0, 0.0});
    CHECK(std::abs(out.at(1, 3, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("range spectrum resolves two on-bin paths") {
    const std::size_t n = 64;
    const GridConfig grid = tiny_grid(n);
    const double bw = grid.bandwidth_hz;
    Scene scene;
    scene.static_paths.push_back({5.0 / bw, {1.0, 0.0}});
    scene.static_paths.push_back({20.0 / bw, {0.5, 0.0}});
    const CfrTensor cfr = synthesize_cfr(scene, grid, {7.5e-3, 1, 0.0});

    const RangeProfile prof = range_spectrum(cfr, 0, 0);
    REQUIRE(prof.power.size() == n);
    CHECK(prof.delay_bin_width_s == doctest::Approx(1.0 / 80e6).epsilon(1e-15));
    CHECK(argmax(prof.power) == 5);
    CHECK(prof.power[5] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(prof.power[20] == doctest::Approx(0.25).epsilon(1e-9));
    for (std::size_t b = 0; b < n; ++b)
        if (b != 5 && b != 20) CHECK(prof.power[b] < 1e-18);

    CHECK_THROWS_AS(range_spectrum(cfr, 1, 0), std::out_of_range);
    CHECK_THROWS_AS(range_spectrum(cfr, 0, 1), std::out_of_range);
}

TEST_CASE("beamscan peaks at the scatterer bearing") {
    const double half_wave = kSpeedOfLight / 5.785e9 / 2.0;
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 2, 4, half_wave);
    const double theta0 = 25.0 * kTwoPi / 360.0;
    Scene scene;
    // Subcarrier 1 of 2 sits exactly at the carrier, so the steering vector
    // built from the carrier wavelength matches the synthesized response.
    const Vec2 s{scene.rx_pos.x + 3.0 * std::sin(theta0), scene.rx_pos.y + 3.0 * std::cos(theta0)};
    scene.scatterers.push_back(ScattererTrajectory::fixed(s, {0.6, 0.0}));
    const CfrTensor cfr = synthesize_cfr(scene, grid, {7.5e-3, 1, 0.0});
    REQUIRE(path_geometry(scene.tx_pos, scene.rx_pos, s).aoa_rad ==
            doctest::Approx(theta0).epsilon(1e-12));

    const auto angles = uniform_angle_grid(-75.0 * kTwoPi / 360.0, 75.0 * kTwoPi / 360.0, 151);
    const AoaProfile prof = aoa_spectrum(cfr, 0, 1, angles);
    REQUIRE(prof.power.size() == 151);
    CHECK(prof.n_antennas == 4);
    CHECK(prof.antenna_spacing_m == half_wave);
    CHECK(argmax(prof.power) == 100);  // -75 deg + 100 * 1 deg = 25 deg

    // Spot-check against the delay-and-sum definition evaluated directly.
    for (std::size_t g : {0ul, 77ul, 100ul, 150ul}) {
        const double step = kTwoPi * (half_wave / grid.wavelength_m()) * std::sin(angles[g]);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t a = 0; a < 4; ++a)
            acc += cfr.at(0, 1, a) * std::polar(1.0, step * static_cast<double>(a));
        CHECK(prof.power[g] == doctest::Approx(std::norm(acc)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(aoa_spectrum(cfr, 5, 1, angles), std::out_of_range);
    CHECK_THROWS_AS(aoa_spectrum(cfr, 0, 2, angles), std::out_of_range);
    CHECK_THROWS_AS(aoa_spectrum(cfr, 0, 1, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(aoa_spectrum(cfr, 0, 1, {0.2, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(aoa_spectrum(cfr, 0, 1, {0.0, 1.8}), std::invalid_argument);

    const CfrTensor mono = synthesize_cfr(scene, tiny_grid(2, 1), {7.5e-3, 1, 0.0});
    CHECK_THROWS_AS(aoa_spectrum(mono, 0, 1, angles), InsufficientApertureError);
}

TEST_CASE("angle grid helper") {
    const auto g = uniform_angle_grid(-0.5, 0.5, 11);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == -0.5);
    CHECK(g.back() == 0.5);
    CHECK(g[5] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_angle_grid(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(uniform_angle_grid(1.0, 0.0, 5), std::invalid_argument);
}
