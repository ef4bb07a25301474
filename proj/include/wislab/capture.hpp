#pragma once

#include <cstdint>
#include <string>

#include "wislab/types.hpp"

namespace wislab {

/// Recording loaded from disk. Samples are binary32 on disk, so a write/read
/// round trip reproduces exactly the float-rounded tensor.
struct CaptureFile {
    CfrTensor tensor;
    ActivityClass label = ActivityClass::Empty;
    std::uint64_t seed = 0;
};

/// Header metadata only (payload untouched).
struct CaptureInfo {
    GridConfig grid;
    double inter_packet_period_s = 0.0;
    std::size_t n_snapshots = 0;
    ActivityClass label = ActivityClass::Empty;
    std::uint64_t seed = 0;
};

/// Fixed 64-byte little-endian header ("WSLB", version 1) followed by
/// interleaved re/im binary32 samples, row-major (snapshot, subcarrier,
/// antenna). Full-channel recordings only: the tensor must not be a subband
/// slice and must start at t = 0.
void write_capture(const std::string& path, const CfrTensor& tensor, ActivityClass label,
                   std::uint64_t seed);

/// Reads and validates a capture. Throws BadMagicError, VersionMismatchError,
/// or TruncatedPayloadError for the matching defect, CaptureFormatError for
/// other malformed fields.
CaptureFile read_capture(const std::string& path);

/// Header-only read, for discovering recordings without loading payloads.
CaptureInfo read_capture_info(const std::string& path);

}  // namespace wislab
