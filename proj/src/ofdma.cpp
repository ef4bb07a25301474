#include "wislab/ofdma.hpp"

#include <charconv>
#include <stdexcept>

namespace wislab {

namespace {

constexpr std::size_t kFullChannelTones = 996;

}  // namespace

std::string RuId::name() const {
    return "RU" + std::to_string(index) + "-" + std::to_string(tones);
}

RuId RuId::parse(const std::string& name) {
    const auto dash = name.find('-');
    if (name.size() < 5 || name.compare(0, 2, "RU") != 0 || dash == std::string::npos)
        throw UnknownRuError("not a resource unit name: " + name);
    RuId id;
    const char* idx_begin = name.data() + 2;
    const char* idx_end = name.data() + dash;
    auto r1 = std::from_chars(idx_begin, idx_end, id.index);
    const char* tones_begin = name.data() + dash + 1;
    const char* tones_end = name.data() + name.size();
    auto r2 = std::from_chars(tones_begin, tones_end, id.tones);
    if (r1.ec != std::errc{} || r1.ptr != idx_end || r2.ec != std::errc{} || r2.ptr != tones_end)
        throw UnknownRuError("not a resource unit name: " + name);
    return id;
}

const RuEntry* RuLayout::find(const RuId& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

RuLayout ru_layout(const GridConfig& grid) {
    if (grid.n_subcarriers != kFullChannelTones)
        throw UnsupportedChannelizationError(
            "ru_layout: only the 996-tone channelization is supported, got " +
            std::to_string(grid.n_subcarriers) + " subcarriers");
    RuLayout layout;
    layout.channel_bandwidth_hz = grid.bandwidth_hz;
    layout.entries.push_back({{1, 996}, 0, 996});
    for (int k = 1; k <= 2; ++k)
        layout.entries.push_back({{k, 484}, static_cast<std::size_t>((k - 1) * 498), 484});
    for (int k = 1; k <= 4; ++k)
        layout.entries.push_back({{k, 242}, static_cast<std::size_t>((k - 1) * 249), 242});
    return layout;
}

CfrTensor slice_ru(const CfrTensor& cfr, const RuId& id) {
    const std::size_t lo = cfr.subcarrier_offset();
    const std::size_t hi = lo + cfr.n_subcarriers();
    GridConfig full = cfr.grid();
    full.n_subcarriers = kFullChannelTones;
    full.bandwidth_hz = full.subcarrier_spacing_hz * static_cast<double>(kFullChannelTones);
    const RuLayout layout = ru_layout(full);
    // The input must be the full channel or itself a resource unit of it;
    // arbitrary sub-grids have no defined channelization.
    if (!(lo == 0 && cfr.n_subcarriers() == kFullChannelTones)) {
        bool known = false;
        for (const auto& e : layout.entries)
            if (e.start == lo && e.count == cfr.n_subcarriers()) known = true;
        if (!known)
            throw UnsupportedChannelizationError(
                "slice_ru: input is neither the 996-tone channel nor one of its resource units");
    }
    const RuEntry* entry = layout.find(id);
    if (entry == nullptr)
        throw UnknownRuError("slice_ru: no such resource unit: " + id.name());
    if (entry->start < lo || entry->start + entry->count > hi)
        throw UnknownRuError("slice_ru: " + id.name() + " lies outside the sliced band");

    GridConfig g = cfr.grid();
    g.n_subcarriers = entry->count;
    g.bandwidth_hz = g.subcarrier_spacing_hz * static_cast<double>(entry->count);
    CfrTensor out(g, cfr.schedule(), entry->start);
    const std::size_t local_start = entry->start - lo;
    const std::size_t n_ant = cfr.n_antennas();
    for (std::size_t k = 0; k < cfr.n_snapshots(); ++k) {
        const std::complex<double>* src = cfr.snapshot_row(k) + local_start * n_ant;
        std::complex<double>* dst = out.snapshot_row(k);
        for (std::size_t i = 0; i < entry->count * n_ant; ++i) dst[i] = src[i];
    }
    return out;
}

double range_granularity_m(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("range_granularity: bandwidth must be positive");
    return kSpeedOfLight / bandwidth_hz;
}

}  // namespace wislab
