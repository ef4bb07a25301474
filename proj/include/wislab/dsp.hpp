#pragma once

#include <cstddef>
#include <vector>

#include "wislab/types.hpp"

namespace wislab {

/// Doppler analysis parameters. The defaults match the lab protocol: 25-deep
/// window at stride 1, zero-padded to 64 bins, Hann window, static component
/// reassigned to the center bin. `window` and `remove_mean` exist so the
/// rectangular/no-removal variants of the transform invariants are testable.
struct DopplerConfig {
    enum class Window { Hann, Rectangular };

    std::size_t window_len = 25;
    std::size_t fft_len = 64;
    std::size_t stride = 1;
    Window window = Window::Hann;
    bool remove_mean = true;

    void validate() const;
};

/// Zero-frequency-centered Doppler power spectrum of one window.
/// Axis convention: a path whose length grows at rate r m/s peaks at
/// +r/lambda Hz, i.e. at bin center + round(r / (lambda * bin_width)).
struct DopplerVector {
    std::vector<double> power;   // fft_len bins, centered
    double bin_width_hz = 0.0;   // 1 / (fft_len * effective_period)
    double timestamp_s = 0.0;    // capture time of the window's last snapshot

    std::size_t center_bin() const { return power.size() / 2; }
    /// Signed frequency of a centered bin index.
    double bin_frequency_hz(std::size_t bin) const {
        return (static_cast<double>(bin) - static_cast<double>(center_bin())) * bin_width_hz;
    }
};

/// Power versus delay bin: bin b spans delays around b / bandwidth.
struct RangeProfile {
    std::vector<double> power;      // n_subcarriers bins
    double delay_bin_width_s = 0.0; // 1 / bandwidth
};

/// Beamscan power over a strictly increasing angle grid in [-pi/2, pi/2].
struct AoaProfile {
    std::vector<double> angles_rad;
    std::vector<double> power;
    std::size_t n_antennas = 0;
    double antenna_spacing_m = 0.0;
};

/// Removes per-snapshot, per-antenna phase impairments: a least-squares
/// linear-in-subcarrier phase (unwrapped) is subtracted, then the snapshot is
/// rotated so its first subcarrier has zero phase. Cancels timing offsets and
/// CFO/common phase exactly; magnitudes are untouched. All-zero
/// (snapshot, antenna) pairs are passed through and counted in *skipped.
/// Idempotent; invariant to global phase rotations.
CfrTensor sanitize_phase(const CfrTensor& cfr, std::size_t* skipped = nullptr, int threads = 0);

/// Power of the inverse DFT across subcarriers for one (snapshot, antenna).
/// Expects raw (unsanitized) input when absolute delay matters.
RangeProfile range_spectrum(const CfrTensor& cfr, std::size_t snapshot, std::size_t antenna);

/// Doppler power spectrum of a tensor holding exactly window_len snapshots:
/// per (subcarrier, antenna) time series: subtract the temporal mean, apply
/// the window, zero-pad to fft_len, DFT across time, |.|^2; the removed static
/// component's power is reassigned to the center bin (the windowed series' DC
/// term), and the per-channel spectra are averaged. effective_period <= 0
/// means the tensor's own inter-packet period.
DopplerVector doppler_spectrum(const CfrTensor& window, const DopplerConfig& cfg,
                               double effective_period_s = 0.0);

/// Slides the Doppler window over the capture, keeping every k-th snapshot
/// first (effective period k * inter_packet_period). Emits
/// floor((ceil(n/k) - W) / stride) + 1 vectors; bit-identical to calling
/// doppler_spectrum on each window slice, for any thread count.
std::vector<DopplerVector> doppler_vector_stream(const CfrTensor& cfr, const DopplerConfig& cfg,
                                                 std::size_t subsample = 1, int threads = 0);

/// Delay-and-sum beamscan across the rx array at one (snapshot, subcarrier):
/// power(theta) = |sum_a H[a] * exp(+j 2 pi (d/lambda) a sin theta)|^2.
/// Requires at least two antennas and a strictly increasing grid.
AoaProfile aoa_spectrum(const CfrTensor& cfr, std::size_t snapshot, std::size_t subcarrier,
                        const std::vector<double>& angle_grid_rad);

/// Uniform angle grid helper, n points spanning [lo, hi].
std::vector<double> uniform_angle_grid(double lo_rad, double hi_rad, std::size_t n);

}  // namespace wislab
