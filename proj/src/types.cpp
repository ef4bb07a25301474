#include "wislab/types.hpp"

#include <cmath>
#include <stdexcept>

namespace wislab {

const char* to_string(ActivityClass c) {
    switch (c) {
        case ActivityClass::Empty: return "Empty";
        case ActivityClass::InPlace: return "InPlace";
        case ActivityClass::Walking: return "Walking";
        case ActivityClass::Running: return "Running";
    }
    throw std::invalid_argument("unknown activity class value");
}

ActivityClass activity_from_string(const std::string& name) {
    if (name == "Empty") return ActivityClass::Empty;
    if (name == "InPlace") return ActivityClass::InPlace;
    if (name == "Walking") return ActivityClass::Walking;
    if (name == "Running") return ActivityClass::Running;
    throw std::invalid_argument("unknown activity class name: " + name);
}

GridConfig GridConfig::make(double carrier_freq_hz, double bandwidth_hz, std::size_t n_subcarriers,
                            std::size_t n_rx_antennas, double antenna_spacing_m) {
    GridConfig g;
    g.carrier_freq_hz = carrier_freq_hz;
    g.bandwidth_hz = bandwidth_hz;
    g.n_subcarriers = n_subcarriers;
    g.subcarrier_spacing_hz = bandwidth_hz / static_cast<double>(n_subcarriers);
    g.n_rx_antennas = n_rx_antennas;
    g.antenna_spacing_m = antenna_spacing_m;
    g.validate();
    return g;
}

void GridConfig::validate() const {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("grid: bandwidth must be positive");
    if (n_subcarriers == 0) throw std::invalid_argument("grid: n_subcarriers must be positive");
    if (!(carrier_freq_hz > bandwidth_hz / 2.0))
        throw std::invalid_argument("grid: carrier_freq must exceed bandwidth/2");
    if (n_rx_antennas < 1) throw std::invalid_argument("grid: need at least one rx antenna");
    if (!(antenna_spacing_m > 0.0)) throw std::invalid_argument("grid: antenna spacing must be positive");
    const double recon = subcarrier_spacing_hz * static_cast<double>(n_subcarriers);
    // spacing is derived by division; allow one rounding step each way.
    const double tol = 2.0 * std::abs(bandwidth_hz) * 2.220446049250313e-16;
    if (std::abs(recon - bandwidth_hz) > tol)
        throw std::invalid_argument("grid: spacing * n_subcarriers must reproduce bandwidth");
}

void CaptureSchedule::validate() const {
    if (!(inter_packet_period_s > 0.0))
        throw std::invalid_argument("schedule: inter-packet period must be positive");
    if (n_snapshots == 0)
        throw std::invalid_argument("schedule: must describe at least one snapshot");
}

CfrTensor::CfrTensor(GridConfig grid, CaptureSchedule schedule, std::size_t subcarrier_offset)
    : grid_(grid), schedule_(schedule), subcarrier_offset_(subcarrier_offset) {
    grid_.validate();
    schedule_.validate();
    data_.assign(schedule_.n_snapshots * grid_.n_subcarriers * grid_.n_rx_antennas,
                 std::complex<double>{0.0, 0.0});
}

CfrTensor CfrTensor::time_slice(std::size_t start, std::size_t count) const {
    if (start + count > n_snapshots())
        throw std::out_of_range("time_slice: window exceeds available snapshots");
    CaptureSchedule s = schedule_;
    s.start_time_s = schedule_.snapshot_time(start);
    s.n_snapshots = count;
    CfrTensor out(grid_, s, subcarrier_offset_);
    const std::size_t row = grid_.n_subcarriers * grid_.n_rx_antennas;
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < row; ++i) out.data_[k * row + i] = data_[(start + k) * row + i];
    return out;
}

double CfrTensor::mean_power() const {
    if (data_.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : data_) acc += std::norm(v);
    return acc / static_cast<double>(data_.size());
}

}  // namespace wislab
