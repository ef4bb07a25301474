#include "wislab/dsp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "wislab/fft.hpp"
#include "wislab/parallel.hpp"

namespace wislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> make_window(DopplerConfig::Window kind, std::size_t w) {
    std::vector<double> out(w, 1.0);
    if (kind == DopplerConfig::Window::Hann && w > 1) {
        for (std::size_t k = 0; k < w; ++k)
            out[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(w - 1)));
    }
    return out;
}

/// Channels transformed per batched FFT call; sized so the split re/im
/// scratch stays cache-resident.
constexpr std::size_t kDopplerBlock = 64;

/// Reused buffers for the window kernel, one set per worker thread.
struct DopplerScratch {
    std::vector<double> re;                    // fft_len x kDopplerBlock
    std::vector<double> im;                    // fft_len x kDopplerBlock
    std::vector<double> acc;                   // fft_len
    std::vector<std::complex<double>> series;  // window_len gathered samples
    std::vector<std::complex<double>> dc;      // kDopplerBlock raw DC terms

    DopplerScratch(std::size_t window_len, std::size_t fft_len)
        : re(fft_len * kDopplerBlock, 0.0),
          im(fft_len * kDopplerBlock, 0.0),
          acc(fft_len),
          series(window_len),
          dc(kDopplerBlock) {}
};

/// Accumulates one window's averaged power spectrum. Rows of the input are
/// taken at original indices start + i * step for i in [0, W). The output is
/// written zero-frequency-centered. Shared by doppler_spectrum and the
/// stream so the two are bit-identical per window; channels are batched
/// through the FFT purely for speed, in ascending-channel accumulation order.
void doppler_window_kernel(const CfrTensor& cfr, std::size_t start, std::size_t step,
                           const DopplerConfig& cfg, const std::vector<double>& win, double win_sum,
                           const FftPlan& plan, DopplerScratch& s, std::vector<double>& out_power) {
    const std::size_t W = cfg.window_len;
    const std::size_t M = cfg.fft_len;
    const std::size_t row_len = cfr.n_subcarriers() * cfr.n_antennas();
    const std::complex<double>* base = cfr.data() + start * row_len;
    const std::size_t row_step = step * row_len;

    std::fill(s.acc.begin(), s.acc.end(), 0.0);
    for (std::size_t block = 0; block < row_len; block += kDopplerBlock) {
        const std::size_t bc = std::min(kDopplerBlock, row_len - block);
        // The fill below rewrites rows < W; the zero padding must be restored
        // because the in-place FFT dirtied it on the previous block.
        std::fill(s.re.begin() + static_cast<std::ptrdiff_t>(W * kDopplerBlock), s.re.end(), 0.0);
        std::fill(s.im.begin() + static_cast<std::ptrdiff_t>(W * kDopplerBlock), s.im.end(), 0.0);
        for (std::size_t c = 0; c < bc; ++c) {
            const std::complex<double>* src = base + block + c;
            for (std::size_t i = 0; i < W; ++i) s.series[i] = src[i * row_step];
            std::complex<double> mean{0.0, 0.0};
            if (cfg.remove_mean) {
                for (std::size_t i = 0; i < W; ++i) mean += s.series[i];
                mean /= static_cast<double>(W);
            }
            std::complex<double> removed{0.0, 0.0};
            for (std::size_t i = 0; i < W; ++i) {
                const std::complex<double> v = win[i] * (s.series[i] - mean);
                s.re[i * kDopplerBlock + c] = v.real();
                s.im[i * kDopplerBlock + c] = v.imag();
                removed += v;
            }
            // Static power belongs in the center bin, not spread through the
            // window's main lobe: DFT(w.(x - mean))[0] + mean * sum(w) is the
            // windowed raw series' DC term and replaces bin zero below.
            s.dc[c] = removed + mean * win_sum;
        }
        plan.run_batch(s.re.data(), s.im.data(), bc, kDopplerBlock);
        if (cfg.remove_mean) {
            for (std::size_t c = 0; c < bc; ++c) {
                s.re[c] = s.dc[c].real();
                s.im[c] = s.dc[c].imag();
            }
        }
        for (std::size_t m = 0; m < M; ++m) {
            const double* rr = s.re.data() + m * kDopplerBlock;
            const double* ii = s.im.data() + m * kDopplerBlock;
            for (std::size_t c = 0; c < bc; ++c) s.acc[m] += rr[c] * rr[c] + ii[c] * ii[c];
        }
    }
    const double scale = 1.0 / static_cast<double>(row_len);
    const std::size_t half = M / 2;
    for (std::size_t i = 0; i < M; ++i) out_power[i] = s.acc[(i + half) % M] * scale;
}

}  // namespace

void DopplerConfig::validate() const {
    if (window_len < 2) throw std::invalid_argument("doppler: window_len must be at least 2");
    if (fft_len < window_len) throw std::invalid_argument("doppler: fft_len must be >= window_len");
    if (stride < 1) throw std::invalid_argument("doppler: stride must be at least 1");
}

CfrTensor sanitize_phase(const CfrTensor& cfr, std::size_t* skipped, int threads) {
    CfrTensor out = cfr;
    const std::size_t n_subc = cfr.n_subcarriers();
    const std::size_t n_ant = cfr.n_antennas();
    std::atomic<std::size_t> skip_count{0};

    // Closed-form least-squares denominators over x = 0..n-1.
    const double n = static_cast<double>(n_subc);
    const double x_mean = (n - 1.0) / 2.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n_subc; ++i) {
        const double d = static_cast<double>(i) - x_mean;
        sxx += d * d;
    }

    parallel_chunks(cfr.n_snapshots(), threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> unwrapped(n_subc);
        for (std::size_t k = lo; k < hi; ++k) {
            std::complex<double>* row = out.snapshot_row(k);
            for (std::size_t a = 0; a < n_ant; ++a) {
                double max_mag = 0.0;
                for (std::size_t i = 0; i < n_subc; ++i)
                    max_mag = std::max(max_mag, std::abs(row[i * n_ant + a]));
                if (max_mag == 0.0) {
                    skip_count.fetch_add(1, std::memory_order_relaxed);
                    continue;
                }
                double prev = std::arg(row[a]);
                unwrapped[0] = prev;
                for (std::size_t i = 1; i < n_subc; ++i) {
                    const double cur = std::arg(row[i * n_ant + a]);
                    unwrapped[i] = unwrapped[i - 1] + std::remainder(cur - prev, kTwoPi);
                    prev = cur;
                }
                double slope = 0.0;
                if (n_subc >= 2) {
                    double sxy = 0.0;
                    for (std::size_t i = 0; i < n_subc; ++i)
                        sxy += (static_cast<double>(i) - x_mean) * unwrapped[i];
                    slope = sxy / sxx;
                }
                const double first = unwrapped[0];
                for (std::size_t i = 0; i < n_subc; ++i)
                    row[i * n_ant + a] *=
                        std::polar(1.0, -(slope * static_cast<double>(i) + first));
            }
        }
    });
    if (skipped) *skipped = skip_count.load();
    return out;
}

RangeProfile range_spectrum(const CfrTensor& cfr, std::size_t snapshot, std::size_t antenna) {
    if (snapshot >= cfr.n_snapshots() || antenna >= cfr.n_antennas())
        throw std::out_of_range("range_spectrum: snapshot/antenna out of range");
    const std::size_t n = cfr.n_subcarriers();
    if (n < 1) throw InsufficientDataError("range_spectrum: need at least 1 subcarrier");

    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cfr.at(snapshot, i, antenna);
    FftPlan plan(n, /*inverse=*/true);
    plan.run(buf.data());
    RangeProfile out;
    out.delay_bin_width_s = 1.0 / cfr.grid().bandwidth_hz;
    out.power.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t b = 0; b < n; ++b) out.power[b] = std::norm(buf[b] * scale);
    return out;
}

DopplerVector doppler_spectrum(const CfrTensor& window, const DopplerConfig& cfg,
                               double effective_period_s) {
    cfg.validate();
    if (window.n_snapshots() < cfg.window_len)
        throw InsufficientDataError("doppler_spectrum: need at least " + std::to_string(cfg.window_len) +
                                    " snapshots, got " + std::to_string(window.n_snapshots()));
    if (window.n_snapshots() != cfg.window_len)
        throw std::invalid_argument("doppler_spectrum: window must hold exactly window_len snapshots");
    const double period =
        effective_period_s > 0.0 ? effective_period_s : window.schedule().inter_packet_period_s;

    const std::vector<double> win = make_window(cfg.window, cfg.window_len);
    double win_sum = 0.0;
    for (double w : win) win_sum += w;
    const FftPlan plan(cfg.fft_len, /*inverse=*/true);
    DopplerScratch scratch(cfg.window_len, cfg.fft_len);

    DopplerVector v;
    v.power.resize(cfg.fft_len);
    v.bin_width_hz = 1.0 / (static_cast<double>(cfg.fft_len) * period);
    v.timestamp_s = window.schedule().snapshot_time(cfg.window_len - 1);
    doppler_window_kernel(window, 0, 1, cfg, win, win_sum, plan, scratch, v.power);
    return v;
}

std::vector<DopplerVector> doppler_vector_stream(const CfrTensor& cfr, const DopplerConfig& cfg,
                                                 std::size_t subsample, int threads) {
    cfg.validate();
    if (subsample < 1) throw std::invalid_argument("doppler_vector_stream: subsample must be >= 1");
    const std::size_t n = cfr.n_snapshots();
    const std::size_t kept = (n + subsample - 1) / subsample;
    if (kept < cfg.window_len)
        throw InsufficientDataError(
            "doppler_vector_stream: need at least " +
            std::to_string(subsample * (cfg.window_len - 1) + 1) + " snapshots at subsample " +
            std::to_string(subsample) + ", got " + std::to_string(n));
    const std::size_t count = (kept - cfg.window_len) / cfg.stride + 1;
    const double period = static_cast<double>(subsample) * cfr.schedule().inter_packet_period_s;
    const double bin_width = 1.0 / (static_cast<double>(cfg.fft_len) * period);

    const std::vector<double> win = make_window(cfg.window, cfg.window_len);
    double win_sum = 0.0;
    for (double w : win) win_sum += w;
    const FftPlan plan(cfg.fft_len, /*inverse=*/true);

    std::vector<DopplerVector> out(count);
    parallel_chunks(count, threads, [&](std::size_t lo, std::size_t hi) {
        DopplerScratch scratch(cfg.window_len, cfg.fft_len);
        for (std::size_t w = lo; w < hi; ++w) {
            const std::size_t first_kept = w * cfg.stride;
            DopplerVector& v = out[w];
            v.power.resize(cfg.fft_len);
            v.bin_width_hz = bin_width;
            // Composed exactly like a slice schedule (start at the window's
            // first snapshot, step the effective period) so the result is
            // bit-identical to doppler_spectrum on that slice.
            v.timestamp_s = cfr.schedule().snapshot_time(first_kept * subsample) +
                            static_cast<double>(cfg.window_len - 1) * period;
            doppler_window_kernel(cfr, first_kept * subsample, subsample, cfg, win, win_sum, plan,
                                  scratch, v.power);
        }
    });
    return out;
}

AoaProfile aoa_spectrum(const CfrTensor& cfr, std::size_t snapshot, std::size_t subcarrier,
                        const std::vector<double>& angle_grid_rad) {
    if (cfr.n_antennas() < 2)
        throw InsufficientApertureError("aoa_spectrum: need at least 2 antennas, got " +
                                        std::to_string(cfr.n_antennas()));
    if (snapshot >= cfr.n_snapshots() || subcarrier >= cfr.n_subcarriers())
        throw std::out_of_range("aoa_spectrum: snapshot/subcarrier out of range");
    if (angle_grid_rad.size() < 2)
        throw std::invalid_argument("aoa_spectrum: angle grid needs at least 2 points");
    for (std::size_t i = 0; i < angle_grid_rad.size(); ++i) {
        if (std::abs(angle_grid_rad[i]) > 1.5707963267948966 + 1e-12)
            throw std::invalid_argument("aoa_spectrum: grid angle outside [-pi/2, pi/2]");
        if (i > 0 && !(angle_grid_rad[i] > angle_grid_rad[i - 1]))
            throw std::invalid_argument("aoa_spectrum: angle grid must be strictly increasing");
    }

    const std::size_t n_ant = cfr.n_antennas();
    const double d_over_lambda = cfr.grid().antenna_spacing_m / cfr.grid().wavelength_m();
    AoaProfile out;
    out.angles_rad = angle_grid_rad;
    out.n_antennas = n_ant;
    out.antenna_spacing_m = cfr.grid().antenna_spacing_m;
    out.power.resize(angle_grid_rad.size());
    for (std::size_t g = 0; g < angle_grid_rad.size(); ++g) {
        const double phase_step = kTwoPi * d_over_lambda * std::sin(angle_grid_rad[g]);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t a = 0; a < n_ant; ++a)
            acc += cfr.at(snapshot, subcarrier, a) *
                   std::polar(1.0, phase_step * static_cast<double>(a));
        out.power[g] = std::norm(acc);
    }
    return out;
}

std::vector<double> uniform_angle_grid(double lo_rad, double hi_rad, std::size_t n) {
    if (n < 2 || !(hi_rad > lo_rad)) throw std::invalid_argument("angle grid: need n >= 2 and hi > lo");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo_rad + (hi_rad - lo_rad) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

}  // namespace wislab
