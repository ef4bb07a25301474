#include "wislab/channel.hpp"

#include <cmath>
#include <limits>

#include "wislab/parallel.hpp"
#include "wislab/rng.hpp"

namespace wislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Accumulates gain * exp(-j 2 pi (carrier + f_n) tau) over all subcarriers
/// into `row` (stride n_antennas), via a one-multiply-per-subcarrier phase
/// recurrence: the per-step rotation is constant because f_n is affine in n.
void accumulate_path(std::complex<double>* row, std::size_t n_subc, std::size_t stride,
                     const GridConfig& grid, std::complex<double> gain, double tau) {
    const double f0 = grid.subcarrier_offset_hz(0);
    const double phase0 = -kTwoPi * (grid.carrier_freq_hz + f0) * tau;
    const double step = -kTwoPi * grid.subcarrier_spacing_hz * tau;
    std::complex<double> cur = gain * std::polar(1.0, phase0);
    const std::complex<double> rot = std::polar(1.0, step);
    for (std::size_t n = 0; n < n_subc; ++n) {
        row[n * stride] += cur;
        cur *= rot;
    }
}

}  // namespace

CfrTensor synthesize_cfr(const Scene& scene, const GridConfig& grid, const CaptureSchedule& schedule,
                         int threads) {
    scene.validate();
    CfrTensor out(grid, schedule);
    const std::size_t n_subc = grid.n_subcarriers;
    const std::size_t n_ant = grid.n_rx_antennas;
    const double d_over_c = grid.antenna_spacing_m / kSpeedOfLight;

    parallel_chunks(schedule.n_snapshots, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double t = schedule.snapshot_time(k);
            std::complex<double>* row = out.snapshot_row(k);
            for (const auto& p : scene.static_paths) {
                // Broadside arrival: identical response on every antenna.
                for (std::size_t a = 0; a < n_ant; ++a)
                    accumulate_path(row + a, n_subc, n_ant, grid, p.gain, p.delay_s);
            }
            for (const auto& s : scene.scatterers) {
                const PathGeometry geo = path_geometry(scene.tx_pos, scene.rx_pos, s.displaced_position(t));
                const double sin_aoa = std::sin(geo.aoa_rad);
                for (std::size_t a = 0; a < n_ant; ++a) {
                    const double tau = geo.delay_s + static_cast<double>(a) * d_over_c * sin_aoa;
                    accumulate_path(row + a, n_subc, n_ant, grid, s.reflectivity(), tau);
                }
            }
        }
    });
    return out;
}

CfrTensor apply_impairments(const CfrTensor& cfr, const ImpairmentParams& params, std::uint64_t seed,
                            int threads) {
    CfrTensor out = cfr;
    const GridConfig& grid = cfr.grid();
    const std::size_t n_subc = cfr.n_subcarriers();
    const std::size_t n_ant = cfr.n_antennas();

    parallel_chunks(cfr.n_snapshots(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            // Per-snapshot derived stream: draws do not depend on how
            // snapshots are partitioned across threads.
            Rng rng(derive_seed(seed, {k}));
            const double jitter = params.phase_jitter_std_rad * rng.normal();
            const double tau = params.timing_random
                                   ? rng.uniform(-params.timing_offset_s, params.timing_offset_s)
                                   : params.timing_offset_s;
            const double t = cfr.schedule().snapshot_time(k);
            const std::complex<double> common = std::polar(1.0, kTwoPi * params.cfo_hz * t + jitter);
            const std::complex<double> rot = std::polar(1.0, -kTwoPi * grid.subcarrier_spacing_hz * tau);
            std::complex<double> ramp =
                common * std::polar(1.0, -kTwoPi * grid.subcarrier_offset_hz(0) * tau);
            std::complex<double>* row = out.snapshot_row(k);
            for (std::size_t n = 0; n < n_subc; ++n) {
                for (std::size_t a = 0; a < n_ant; ++a) row[n * n_ant + a] *= ramp;
                ramp *= rot;
            }
        }
    });
    return out;
}

CfrTensor add_noise(const CfrTensor& cfr, double snr_db, std::uint64_t seed, int threads) {
    if (std::isinf(snr_db) && snr_db > 0.0) return cfr;
    const double signal = cfr.mean_power();
    if (signal <= 0.0)
        throw UndefinedSnrError("add_noise: all-zero tensor has no defined SNR");
    const double variance = signal / std::pow(10.0, snr_db / 10.0);

    CfrTensor out = cfr;
    const std::size_t row_len = cfr.n_subcarriers() * cfr.n_antennas();
    parallel_chunks(cfr.n_snapshots(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            Rng rng(derive_seed(seed, {k}));
            std::complex<double>* row = out.snapshot_row(k);
            for (std::size_t i = 0; i < row_len; ++i) row[i] += rng.complex_normal(variance);
        }
    });
    return out;
}

}  // namespace wislab
