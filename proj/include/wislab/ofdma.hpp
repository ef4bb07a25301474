#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wislab/types.hpp"

namespace wislab {

/// Resource unit identity, serialized as "RU{index}-{tones}" (e.g. "RU2-484").
struct RuId {
    int index = 1;
    int tones = 996;

    std::string name() const;
    static RuId parse(const std::string& name);

    bool operator==(const RuId& o) const { return index == o.index && tones == o.tones; }
};

/// One resource unit's contiguous subcarrier span within the full channel.
struct RuEntry {
    RuId id;
    std::size_t start = 0;  // first subcarrier index in the 996-tone channel
    std::size_t count = 0;  // number of tones
};

/// All resource units of one channelization, ordered by size then index.
struct RuLayout {
    double channel_bandwidth_hz = 0.0;
    std::vector<RuEntry> entries;

    const RuEntry* find(const RuId& id) const;
};

/// Idealized-contiguous RU table for the 996-tone channel: the full-band unit,
/// two 484-tone units at (k-1)*498, and four 242-tone units at (k-1)*249.
/// Any other subcarrier count is an unsupported channelization.
RuLayout ru_layout(const GridConfig& grid);

/// Projects the tensor onto one RU's subcarriers: values are copied
/// bit-identically, the grid shrinks to tones * spacing bandwidth, and the
/// slice records its offset in the mother channel so nested slices compose.
/// The RU must exist in the 996-tone layout and lie inside the input slice.
CfrTensor slice_ru(const CfrTensor& cfr, const RuId& id);

/// Finest resolvable delay ring width, c / bandwidth, meters.
double range_granularity_m(double bandwidth_hz);

}  // namespace wislab
