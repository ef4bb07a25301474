#include "wislab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wislab/errors.hpp"

namespace wislab {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value, bool allow_inf = false) {
    if (allow_inf && (value == "inf" || value == "+inf")) {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
    return v;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
    T v{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& schema() {
    static const std::map<std::string, Setter> table = {
        {"master_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.master_seed = parse_integer<std::uint64_t>(k, v);
         }},
        {"carrier_freq_hz",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.carrier_freq_hz = parse_double(k, v);
         }},
        {"bandwidth_hz",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.bandwidth_hz = parse_double(k, v);
         }},
        {"n_subcarriers",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.n_subcarriers = parse_integer<std::size_t>(k, v);
         }},
        {"n_rx_antennas",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.n_rx_antennas = parse_integer<std::size_t>(k, v);
         }},
        {"antenna_spacing_m",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.antenna_spacing_m = parse_double(k, v);
         }},
        {"inter_packet_period_s",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.inter_packet_period_s = parse_double(k, v);
         }},
        {"campaign_duration_s",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.campaign_duration_s = parse_double(k, v);
         }},
        {"snr_db",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.snr_db = parse_double(k, v, true);
         }},
        {"cfo_hz",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.cfo_hz = parse_double(k, v);
         }},
        {"timing_offset_s",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.timing_offset_s = parse_double(k, v);
         }},
        {"timing_random",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.timing_random = parse_bool(k, v);
         }},
        {"phase_jitter_std_rad",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.phase_jitter_std_rad = parse_double(k, v);
         }},
        {"window_len",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.window_len = parse_integer<std::size_t>(k, v);
         }},
        {"fft_len",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.fft_len = parse_integer<std::size_t>(k, v);
         }},
        {"stride",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.stride = parse_integer<std::size_t>(k, v);
         }},
        {"n_doppler_vectors",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.n_doppler_vectors = parse_integer<std::size_t>(k, v);
         }},
        {"learning_rate",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.learning_rate = parse_double(k, v);
         }},
        {"epochs",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.epochs = parse_integer<int>(k, v);
         }},
        {"n_rounds",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.n_rounds = parse_integer<int>(k, v);
         }},
        {"threads",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.threads = parse_integer<int>(k, v);
         }},
        {"rus",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.rus.clear();
             for (const auto& item : split_list(v)) c.rus.push_back(RuId::parse(item));
             if (c.rus.empty()) throw ConfigError("key '" + k + "': list is empty");
         }},
        {"sampling_factors",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sampling_factors.clear();
             for (const auto& item : split_list(v)) {
                 c.sampling_factors.push_back(parse_integer<int>(k, item));
             }
             if (c.sampling_factors.empty()) throw ConfigError("key '" + k + "': list is empty");
         }},
    };
    return table;
}

RunConfig parse_stream(std::istream& in) {
    RunConfig config;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                              line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' has no value");
        }
        const auto it = schema().find(key);
        if (it == schema().end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        it->second(config, key, value);
    }
    config.validate();
    return config;
}

}  // namespace

GridConfig RunConfig::grid() const {
    double spacing = antenna_spacing_m;
    if (spacing == 0.0) spacing = kSpeedOfLight / carrier_freq_hz / 2.0;
    return GridConfig::make(carrier_freq_hz, bandwidth_hz, n_subcarriers, n_rx_antennas, spacing);
}

CaptureSchedule RunConfig::schedule() const {
    CaptureSchedule s;
    s.inter_packet_period_s = inter_packet_period_s;
    s.n_snapshots =
        static_cast<std::size_t>(std::llround(campaign_duration_s / inter_packet_period_s));
    s.validate();
    return s;
}

ImpairmentParams RunConfig::impairments() const {
    ImpairmentParams p;
    p.cfo_hz = cfo_hz;
    p.timing_offset_s = timing_offset_s;
    p.timing_random = timing_random;
    p.phase_jitter_std_rad = phase_jitter_std_rad;
    return p;
}

DopplerConfig RunConfig::doppler() const {
    DopplerConfig d;
    d.window_len = window_len;
    d.fft_len = fft_len;
    d.stride = stride;
    return d;
}

TrainHyper RunConfig::hyper() const {
    TrainHyper h;
    h.learning_rate = learning_rate;
    h.epochs = epochs;
    h.seed = master_seed;
    return h;
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(carrier_freq_hz > 0.0, "carrier_freq_hz must be > 0");
    require(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
    require(n_subcarriers >= 1, "n_subcarriers must be >= 1");
    require(n_rx_antennas >= 1, "n_rx_antennas must be >= 1");
    require(antenna_spacing_m >= 0.0, "antenna_spacing_m must be >= 0 (0 = half wavelength)");
    require(inter_packet_period_s > 0.0, "inter_packet_period_s must be > 0");
    require(campaign_duration_s > 0.0, "campaign_duration_s must be > 0");
    require(campaign_duration_s >= inter_packet_period_s,
            "campaign_duration_s must cover at least one snapshot");
    require(!std::isnan(snr_db), "snr_db must be a number or inf");
    require(phase_jitter_std_rad >= 0.0, "phase_jitter_std_rad must be >= 0");
    require(timing_offset_s >= 0.0 || !timing_random,
            "timing_offset_s must be >= 0 when timing_random is set");
    require(window_len >= 2, "window_len must be >= 2");
    require(fft_len >= window_len, "fft_len must be >= window_len");
    require(stride >= 1, "stride must be >= 1");
    require(n_doppler_vectors >= 1, "n_doppler_vectors must be >= 1");
    require(learning_rate > 0.0, "learning_rate must be > 0");
    require(epochs >= 1, "epochs must be >= 1");
    require(n_rounds >= 1, "n_rounds must be >= 1");
    require(threads >= 0, "threads must be >= 0 (0 = hardware concurrency)");
    require(!rus.empty(), "rus must list at least one resource unit");
    require(!sampling_factors.empty(), "sampling_factors must list at least one factor");
    for (int k : sampling_factors) {
        require(k >= 1, "sampling_factors entries must be >= 1");
        require(n_doppler_vectors / static_cast<std::size_t>(k) >= 1,
                "sampling factor " + std::to_string(k) + " leaves no vectors to pool");
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_stream(in);
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_stream(in);
}

}  // namespace wislab
