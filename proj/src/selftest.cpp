#include "wislab/selftest.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wislab/capture.hpp"
#include "wislab/channel.hpp"
#include "wislab/classifier.hpp"
#include "wislab/dsp.hpp"
#include "wislab/errors.hpp"
#include "wislab/eval.hpp"
#include "wislab/fft.hpp"
#include "wislab/ofdma.hpp"
#include "wislab/rng.hpp"
#include "wislab/scene.hpp"
#include "wislab/types.hpp"

namespace wislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void expect(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
        throw Error(what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
    }
}

void check_fft_roundtrip() {
    Rng rng(7);
    std::vector<std::complex<double>> x(64);
    for (auto& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto fwd = x;
    FftPlan(64, false).run(fwd.data());
    auto back = fwd;
    FftPlan(64, true).run(back.data());
    for (std::size_t i = 0; i < x.size(); ++i) {
        expect(std::abs(back[i] / 64.0 - x[i]) < 1e-12, "fft inverse(forward(x)) != n*x");
    }
    std::vector<std::complex<double>> y(12);
    for (auto& v : y) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto plan_out = y;
    FftPlan(12, false).run(plan_out.data());
    const auto ref = naive_dft(y, false);
    for (std::size_t i = 0; i < y.size(); ++i) {
        expect(std::abs(plan_out[i] - ref[i]) < 1e-10, "fft disagrees with direct DFT");
    }
}

void check_grid() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 996, 1, 0.0259);
    expect(grid.subcarrier_spacing_hz * 996.0 == 80e6, "subcarrier spacing must tile the band");
    expect_near(grid.wavelength_m(), 2.998e8 / 5.785e9, 1e-15, "wavelength");
}

void check_ru_layout() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 996, 1, 0.0259);
    const RuLayout layout = ru_layout(grid);
    expect(layout.entries.size() == 7, "layout must expose 7 resource units");
    const RuEntry* full = layout.find({1, 996});
    const RuEntry* last = layout.find({4, 242});
    expect(full && full->start == 0 && full->count == 996, "RU1-996 must span the channel");
    expect(last && last->start == 747 && last->count == 242, "RU4-242 must start at tone 747");
    expect(RuId{2, 484}.name() == "RU2-484", "resource unit naming");
    expect(RuId::parse("RU3-242").index == 3, "resource unit parsing");
}

void check_range_peak() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 996, 1, 0.0259);
    Scene scene;
    scene.tx_pos = {0.0, 0.0};
    scene.rx_pos = {4.0, 0.0};
    scene.static_paths.push_back({37.0 / 80e6, {1.0, 0.0}});
    CaptureSchedule sched;
    sched.inter_packet_period_s = 7.5e-3;
    sched.n_snapshots = 1;
    const CfrTensor cfr = synthesize_cfr(scene, grid, sched, 1);
    const RangeProfile profile = range_spectrum(cfr, 0, 0);
    const auto peak = static_cast<std::size_t>(
        std::max_element(profile.power.begin(), profile.power.end()) - profile.power.begin());
    expect(peak == 37, "range peak must land on the delay bin");
}

void check_doppler_peak() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 8, 1, 0.0259);
    CaptureSchedule sched;
    sched.inter_packet_period_s = 7.5e-3;
    sched.n_snapshots = 25;
    CfrTensor cfr(grid, sched);
    const double rate = 1.0;  // m/s of path-length growth
    const double f_d = rate / grid.wavelength_m();
    for (std::size_t k = 0; k < 25; ++k) {
        const auto tone = std::polar(1.0, -kTwoPi * f_d * sched.snapshot_time(k));
        for (std::size_t n = 0; n < 8; ++n) cfr.at(k, n, 0) = tone;
    }
    const DopplerVector vec = doppler_spectrum(cfr, DopplerConfig{});
    const auto peak = static_cast<std::size_t>(
        std::max_element(vec.power.begin(), vec.power.end()) - vec.power.begin());
    expect(peak == vec.center_bin() + 9, "receding path must peak above center");
    expect_near(vec.bin_width_hz, 1.0 / (64.0 * 7.5e-3), 1e-12, "Doppler bin width");
}

void check_sanitize_roundtrip() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 128, 1, 0.0259);
    CaptureSchedule sched;
    sched.inter_packet_period_s = 7.5e-3;
    sched.n_snapshots = 10;
    const Scene scene = generate_activity_scene(ActivityClass::Walking, 0.1, 42);
    const CfrTensor clean = synthesize_cfr(scene, grid, sched, 1);
    ImpairmentParams params;
    params.cfo_hz = 1000.0;
    params.timing_offset_s = 20e-9;
    params.timing_random = true;
    params.phase_jitter_std_rad = 0.0;
    const CfrTensor impaired = apply_impairments(clean, params, 99, 1);
    const CfrTensor a = sanitize_phase(clean, nullptr, 1);
    const CfrTensor b = sanitize_phase(impaired, nullptr, 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < clean.n_snapshots(); ++k) {
        for (std::size_t n = 0; n < clean.n_subcarriers(); ++n) {
            worst = std::max(worst, std::abs(a.at(k, n, 0) - b.at(k, n, 0)));
        }
    }
    expect(worst < 1e-6, "sanitizer must cancel CFO and timing offsets");
}

void check_splits() {
    const auto splits = make_splits(4, 9, 5);
    expect(splits.size() == 108, "protocol must yield 108 sets");
    for (const auto& s : splits) {
        expect(s.test != s.val && s.train[0] != s.test && s.train[0] != s.val &&
                   s.train[1] != s.test && s.train[1] != s.val && s.train[0] < s.train[1],
               "split roles must be disjoint");
    }
}

void check_zero_model() {
    Model model;
    model.fft_len = 4;
    model.feat_mean.assign(8, 0.0);
    model.feat_scale.assign(8, 1.0);
    model.weights.assign(kNumClasses * 8, 0.0);
    model.bias.assign(kNumClasses, 0.0);
    const Prediction p = predict(model, std::vector<double>(8, 0.3));
    for (double prob : p.probabilities) expect(prob == 0.25, "zero model must be uniform");
    expect(p.label == ActivityClass::Empty, "uniform tie must break to the lowest class");
}

void check_capture_roundtrip() {
    const GridConfig grid = GridConfig::make(5.785e9, 80e6, 16, 2, 0.0259);
    CaptureSchedule sched;
    sched.inter_packet_period_s = 7.5e-3;
    sched.n_snapshots = 3;
    CfrTensor t(grid, sched);
    Rng rng(3);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t n = 0; n < 16; ++n) {
            for (std::size_t a = 0; a < 2; ++a) {
                t.at(k, n, a) = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            }
        }
    }
    const auto path = std::filesystem::temp_directory_path() /
                      ("selftest-" + std::to_string(::getpid()) + ".wslb");
    write_capture(path.string(), t, ActivityClass::Running, 77);
    const CaptureFile file = read_capture(path.string());
    std::filesystem::remove(path);
    expect(file.label == ActivityClass::Running && file.seed == 77, "capture metadata round trip");
    expect(file.tensor.same_shape(t), "capture shape round trip");
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::complex<double> want = {
            static_cast<double>(static_cast<float>(t.data()[i].real())),
            static_cast<double>(static_cast<float>(t.data()[i].imag()))};
        expect(file.tensor.data()[i] == want, "capture samples round trip through binary32");
    }
}

void check_percentiles() {
    std::vector<double> values(100);
    for (int i = 0; i < 100; ++i) values[static_cast<std::size_t>(i)] = i + 1.0;
    const Percentiles p = summarize(values);
    expect_near(p.median, 50.5, 1e-12, "median");
    expect_near(p.p25, 25.75, 1e-12, "p25");
    expect_near(p.p75, 75.25, 1e-12, "p75");
    expect_near(p.p5, 5.95, 1e-12, "p5");
    expect_near(p.p95, 95.05, 1e-12, "p95");
}

}  // namespace

int run_selftest(std::ostream& out) {
    const std::vector<std::pair<std::string, std::function<void()>>> checks = {
        {"fft-roundtrip", check_fft_roundtrip},
        {"grid-invariants", check_grid},
        {"ru-layout", check_ru_layout},
        {"range-peak", check_range_peak},
        {"doppler-peak", check_doppler_peak},
        {"sanitize-roundtrip", check_sanitize_roundtrip},
        {"protocol-splits", check_splits},
        {"zero-model-softmax", check_zero_model},
        {"capture-roundtrip", check_capture_roundtrip},
        {"percentiles", check_percentiles},
    };
    int failures = 0;
    for (const auto& [name, fn] : checks) {
        try {
            fn();
            out << "[ok]   " << name << '\n';
        } catch (const std::exception& e) {
            ++failures;
            out << "[fail] " << name << ": " << e.what() << '\n';
        }
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << '\n';
    return failures;
}

}  // namespace wislab
