#pragma once

#include <cstdint>

#include "wislab/scene.hpp"
#include "wislab/types.hpp"

namespace wislab {

/// Oscillator/timing hardware defects applied per snapshot.
struct ImpairmentParams {
    double cfo_hz = 0.0;               // carrier frequency offset
    double timing_offset_s = 0.0;      // symbol-timing offset (per-snapshot ramp)
    bool timing_random = false;        // true: per-snapshot U[-timing, +timing]; false: fixed
    double phase_jitter_std_rad = 0.0; // common phase jitter sigma

    bool is_identity() const {
        return cfo_hz == 0.0 && timing_offset_s == 0.0 && phase_jitter_std_rad == 0.0;
    }
};

/// Evaluates the frequency response of every path at every snapshot:
///   H[k, n, a] = sum_p gain_p(t_k) * exp(-j 2 pi (carrier + f_n) tau_p_a(t_k))
/// with f_n the baseband subcarrier offset. Scatterer paths add the uniform
/// linear array's per-antenna delay a * spacing * sin(aoa) / c; static paths
/// arrive at broadside. Pure function of (scene, grid, schedule); paths are
/// accumulated in scene order so superposition is exact.
CfrTensor synthesize_cfr(const Scene& scene, const GridConfig& grid, const CaptureSchedule& schedule,
                         int threads = 0);

/// Multiplies snapshot k by exp(j(2 pi cfo t_k + phi_k)), phi_k ~ N(0, sigma^2),
/// and by the per-subcarrier ramp exp(-j 2 pi f_n tau_k). Unit-modulus factors
/// only: magnitudes are preserved. Deterministic in (input, params, seed).
CfrTensor apply_impairments(const CfrTensor& cfr, const ImpairmentParams& params, std::uint64_t seed,
                            int threads = 0);

/// Adds circularly symmetric complex Gaussian noise with per-element variance
/// mean(|H|^2) / 10^(snr_db/10). snr_db = +infinity returns the input
/// unchanged; an all-zero tensor has no defined SNR and throws.
CfrTensor add_noise(const CfrTensor& cfr, double snr_db, std::uint64_t seed, int threads = 0);

}  // namespace wislab
