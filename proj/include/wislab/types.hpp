#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wislab/errors.hpp"

namespace wislab {

/// Propagation speed used for all delay/wavelength conversions, m/s.
inline constexpr double kSpeedOfLight = 2.998e8;

/// Activity categories the lab senses and classifies.
enum class ActivityClass : std::uint32_t { Empty = 0, InPlace = 1, Walking = 2, Running = 3 };

inline constexpr std::size_t kNumClasses = 4;

const char* to_string(ActivityClass c);
ActivityClass activity_from_string(const std::string& name);

/// Idealized contiguous OFDM grid: subcarrier n sits at baseband offset
/// n * spacing - bandwidth / 2. No DC hole, guards or pilots.
struct GridConfig {
    double carrier_freq_hz = 5.785e9;
    double bandwidth_hz = 80e6;
    std::size_t n_subcarriers = 996;
    double subcarrier_spacing_hz = 80e6 / 996.0;
    std::size_t n_rx_antennas = 1;
    double antenna_spacing_m = kSpeedOfLight / 5.785e9 / 2.0;

    /// Builds a validated grid; spacing is derived as bandwidth / n_subcarriers.
    static GridConfig make(double carrier_freq_hz, double bandwidth_hz, std::size_t n_subcarriers,
                           std::size_t n_rx_antennas, double antenna_spacing_m);

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;

    double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }

    /// Baseband frequency offset of subcarrier n.
    double subcarrier_offset_hz(std::size_t n) const {
        return static_cast<double>(n) * subcarrier_spacing_hz - bandwidth_hz / 2.0;
    }
};

/// Uniform snapshot timing: snapshot k is captured at start + k * period.
struct CaptureSchedule {
    double inter_packet_period_s = 7.5e-3;
    std::size_t n_snapshots = 0;
    double start_time_s = 0.0;

    void validate() const;

    double snapshot_time(std::size_t k) const {
        return start_time_s + static_cast<double>(k) * inter_packet_period_s;
    }
};

/// Channel frequency response over (snapshot, subcarrier, antenna), row-major
/// in that order. subcarrier_offset records where this tensor's first
/// subcarrier sits inside the mother 996-tone channel (0 for a full capture),
/// so resource-unit slices compose exactly.
class CfrTensor {
  public:
    CfrTensor() = default;
    CfrTensor(GridConfig grid, CaptureSchedule schedule, std::size_t subcarrier_offset = 0);

    const GridConfig& grid() const { return grid_; }
    const CaptureSchedule& schedule() const { return schedule_; }
    std::size_t subcarrier_offset() const { return subcarrier_offset_; }

    std::size_t n_snapshots() const { return schedule_.n_snapshots; }
    std::size_t n_subcarriers() const { return grid_.n_subcarriers; }
    std::size_t n_antennas() const { return grid_.n_rx_antennas; }
    std::size_t size() const { return data_.size(); }

    std::complex<double>& at(std::size_t snapshot, std::size_t subcarrier, std::size_t antenna) {
        return data_[(snapshot * grid_.n_subcarriers + subcarrier) * grid_.n_rx_antennas + antenna];
    }
    const std::complex<double>& at(std::size_t snapshot, std::size_t subcarrier, std::size_t antenna) const {
        return data_[(snapshot * grid_.n_subcarriers + subcarrier) * grid_.n_rx_antennas + antenna];
    }

    std::complex<double>* data() { return data_.data(); }
    const std::complex<double>* data() const { return data_.data(); }

    /// Pointer to the first element of one snapshot (subcarrier-major row).
    const std::complex<double>* snapshot_row(std::size_t k) const {
        return data_.data() + k * grid_.n_subcarriers * grid_.n_rx_antennas;
    }
    std::complex<double>* snapshot_row(std::size_t k) {
        return data_.data() + k * grid_.n_subcarriers * grid_.n_rx_antennas;
    }

    /// Copies snapshots [start, start + count) into a new tensor whose
    /// schedule starts at the corresponding capture time.
    CfrTensor time_slice(std::size_t start, std::size_t count) const;

    /// Mean of |H|^2 over all elements.
    double mean_power() const;

    bool same_shape(const CfrTensor& other) const {
        return n_snapshots() == other.n_snapshots() && n_subcarriers() == other.n_subcarriers() &&
               n_antennas() == other.n_antennas();
    }

  private:
    GridConfig grid_{};
    CaptureSchedule schedule_{};
    std::size_t subcarrier_offset_ = 0;
    std::vector<std::complex<double>> data_;
};

}  // namespace wislab
