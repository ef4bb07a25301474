#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wislab/channel.hpp"
#include "wislab/classifier.hpp"
#include "wislab/dsp.hpp"
#include "wislab/ofdma.hpp"
#include "wislab/types.hpp"

namespace wislab {

/// Every tunable of the pipeline, with working defaults. Parsed from a flat
/// `key = value` file; '#' starts a comment, blank lines are skipped, keys are
/// single-valued and every key must be known.
struct RunConfig {
    std::uint64_t master_seed = 1;

    double carrier_freq_hz = 5.785e9;
    double bandwidth_hz = 80e6;
    std::size_t n_subcarriers = 996;
    std::size_t n_rx_antennas = 1;
    double antenna_spacing_m = 0.0;  // 0 selects half a wavelength
    double inter_packet_period_s = 7.5e-3;
    double campaign_duration_s = 120.0;

    double snr_db = 20.0;  // "inf" disables noise
    double cfo_hz = 200.0;
    double timing_offset_s = 10e-9;
    bool timing_random = true;
    double phase_jitter_std_rad = 0.05;

    std::size_t window_len = 25;
    std::size_t fft_len = 64;
    std::size_t stride = 1;
    std::size_t n_doppler_vectors = 256;

    double learning_rate = 0.5;
    int epochs = 200;
    int n_rounds = 9;
    int threads = 0;  // 0 selects the hardware concurrency

    std::vector<RuId> rus = {{1, 996}, {1, 484}, {2, 484}, {1, 242}, {2, 242}, {3, 242}, {4, 242}};
    std::vector<int> sampling_factors = {1, 2, 3, 4, 5};

    /// Grid with the half-wavelength default applied.
    GridConfig grid() const;
    CaptureSchedule schedule() const;
    ImpairmentParams impairments() const;
    DopplerConfig doppler() const;
    TrainHyper hyper() const;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/// Parses a config file; missing keys keep their defaults.
RunConfig load_config(const std::string& path);

/// Same grammar from an in-memory string.
RunConfig parse_config_text(const std::string& text);

}  // namespace wislab
