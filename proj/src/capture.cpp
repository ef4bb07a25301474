#include "wislab/capture.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "wislab/errors.hpp"

namespace wislab {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 64;

// Field offsets within the 64-byte header.
constexpr std::size_t kOffMagic = 0;
constexpr std::size_t kOffVersion = 4;
constexpr std::size_t kOffCarrier = 8;
constexpr std::size_t kOffBandwidth = 16;
constexpr std::size_t kOffSubcarriers = 24;
constexpr std::size_t kOffAntennas = 28;
constexpr std::size_t kOffSpacing = 32;
constexpr std::size_t kOffPeriod = 40;
constexpr std::size_t kOffSnapshots = 48;
constexpr std::size_t kOffLabel = 52;
constexpr std::size_t kOffSeed = 56;

void store_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void store_u64(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void store_f64(unsigned char* p, double v) { store_u64(p, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t load_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t load_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

double load_f64(const unsigned char* p) { return std::bit_cast<double>(load_u64(p)); }

void store_f32(unsigned char* p, float v) { store_u32(p, std::bit_cast<std::uint32_t>(v)); }

float load_f32(const unsigned char* p) { return std::bit_cast<float>(load_u32(p)); }

CaptureInfo parse_header(const unsigned char* h, const std::string& path) {
    if (std::memcmp(h + kOffMagic, kMagic, 4) != 0) {
        throw BadMagicError("capture " + path + ": bad magic '" +
                            std::string(reinterpret_cast<const char*>(h), 4) + "', expected WSLB");
    }
    const std::uint32_t version = load_u32(h + kOffVersion);
    if (version != kVersion) {
        throw VersionMismatchError("capture " + path + ": version " + std::to_string(version) +
                                   ", reader supports " + std::to_string(kVersion));
    }
    CaptureInfo info;
    try {
        info.grid = GridConfig::make(load_f64(h + kOffCarrier), load_f64(h + kOffBandwidth),
                                     load_u32(h + kOffSubcarriers), load_u32(h + kOffAntennas),
                                     load_f64(h + kOffSpacing));
    } catch (const std::invalid_argument& e) {
        throw CaptureFormatError("capture " + path + ": invalid grid header: " + e.what());
    }
    info.inter_packet_period_s = load_f64(h + kOffPeriod);
    if (!(info.inter_packet_period_s > 0.0)) {
        throw CaptureFormatError("capture " + path + ": inter_packet_period must be > 0");
    }
    info.n_snapshots = load_u32(h + kOffSnapshots);
    if (info.n_snapshots == 0) {
        throw CaptureFormatError("capture " + path + ": n_snapshots must be >= 1");
    }
    const std::uint32_t label = load_u32(h + kOffLabel);
    if (label >= kNumClasses) {
        throw CaptureFormatError("capture " + path + ": class_label " + std::to_string(label) +
                                 " out of range");
    }
    info.label = static_cast<ActivityClass>(label);
    info.seed = load_u64(h + kOffSeed);
    return info;
}

}  // namespace

void write_capture(const std::string& path, const CfrTensor& tensor, ActivityClass label,
                   std::uint64_t seed) {
    if (tensor.subcarrier_offset() != 0) {
        throw std::invalid_argument("captures hold full-channel recordings, not subband slices");
    }
    if (tensor.schedule().start_time_s != 0.0) {
        throw std::invalid_argument("captures must start at t = 0");
    }
    const auto& grid = tensor.grid();
    const auto& sched = tensor.schedule();
    if (sched.n_snapshots > 0xffffffffu || grid.n_subcarriers > 0xffffffffu) {
        throw std::invalid_argument("capture dimensions exceed the header field width");
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open capture for writing: " + path);

    std::array<unsigned char, kHeaderSize> header{};
    std::memcpy(header.data() + kOffMagic, kMagic, 4);
    store_u32(header.data() + kOffVersion, kVersion);
    store_f64(header.data() + kOffCarrier, grid.carrier_freq_hz);
    store_f64(header.data() + kOffBandwidth, grid.bandwidth_hz);
    store_u32(header.data() + kOffSubcarriers, static_cast<std::uint32_t>(grid.n_subcarriers));
    store_u32(header.data() + kOffAntennas, static_cast<std::uint32_t>(grid.n_rx_antennas));
    store_f64(header.data() + kOffSpacing, grid.antenna_spacing_m);
    store_f64(header.data() + kOffPeriod, sched.inter_packet_period_s);
    store_u32(header.data() + kOffSnapshots, static_cast<std::uint32_t>(sched.n_snapshots));
    store_u32(header.data() + kOffLabel, static_cast<std::uint32_t>(label));
    store_u64(header.data() + kOffSeed, seed);
    out.write(reinterpret_cast<const char*>(header.data()), kHeaderSize);

    const std::size_t row = grid.n_subcarriers * grid.n_rx_antennas;
    std::vector<unsigned char> chunk(row * 8);
    for (std::size_t k = 0; k < sched.n_snapshots; ++k) {
        const std::complex<double>* src = tensor.snapshot_row(k);
        for (std::size_t i = 0; i < row; ++i) {
            store_f32(chunk.data() + 8 * i, static_cast<float>(src[i].real()));
            store_f32(chunk.data() + 8 * i + 4, static_cast<float>(src[i].imag()));
        }
        out.write(reinterpret_cast<const char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
    }
    if (!out) throw Error("failed writing capture: " + path);
}

CaptureFile read_capture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open capture: " + path);

    std::array<unsigned char, kHeaderSize> header{};
    in.read(reinterpret_cast<char*>(header.data()), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
        throw TruncatedPayloadError("capture " + path + ": file shorter than the 64-byte header");
    }
    const CaptureInfo info = parse_header(header.data(), path);

    CaptureFile file;
    file.label = info.label;
    file.seed = info.seed;
    CaptureSchedule sched;
    sched.inter_packet_period_s = info.inter_packet_period_s;
    sched.n_snapshots = info.n_snapshots;
    file.tensor = CfrTensor(info.grid, sched);

    const std::size_t row = info.grid.n_subcarriers * info.grid.n_rx_antennas;
    std::vector<unsigned char> chunk(row * 8);
    for (std::size_t k = 0; k < info.n_snapshots; ++k) {
        in.read(reinterpret_cast<char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
        if (in.gcount() != static_cast<std::streamsize>(chunk.size())) {
            throw TruncatedPayloadError("capture " + path + ": payload ends inside snapshot " +
                                        std::to_string(k) + " of " +
                                        std::to_string(info.n_snapshots));
        }
        std::complex<double>* dst = file.tensor.snapshot_row(k);
        for (std::size_t i = 0; i < row; ++i) {
            dst[i] = {static_cast<double>(load_f32(chunk.data() + 8 * i)),
                      static_cast<double>(load_f32(chunk.data() + 8 * i + 4))};
        }
    }
    char extra = 0;
    if (in.read(&extra, 1) && in.gcount() > 0) {
        throw CaptureFormatError("capture " + path + ": trailing bytes after the payload");
    }
    return file;
}

CaptureInfo read_capture_info(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open capture: " + path);
    std::array<unsigned char, kHeaderSize> header{};
    in.read(reinterpret_cast<char*>(header.data()), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
        throw TruncatedPayloadError("capture " + path + ": file shorter than the 64-byte header");
    }
    return parse_header(header.data(), path);
}

}  // namespace wislab
