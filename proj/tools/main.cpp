#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wislab/capture.hpp"
#include "wislab/channel.hpp"
#include "wislab/config.hpp"
#include "wislab/dsp.hpp"
#include "wislab/errors.hpp"
#include "wislab/eval.hpp"
#include "wislab/ofdma.hpp"
#include "wislab/rng.hpp"
#include "wislab/scene.hpp"
#include "wislab/selftest.hpp"

namespace fs = std::filesystem;
using namespace wislab;

namespace {

// Per-campaign derivation tags for the impairment and noise streams.
constexpr std::uint64_t kImpairStream = 11;
constexpr std::uint64_t kNoiseStream = 12;

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

RunConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) {
        RunConfig cfg;
        cfg.validate();
        return cfg;
    }
    return load_config(config_path);
}

CfrTensor simulate_campaign(const RunConfig& cfg, const Campaign& campaign) {
    const Scene scene = generate_activity_scene(campaign.label, campaign.duration_s, campaign.seed);
    CfrTensor cfr = synthesize_cfr(scene, cfg.grid(), cfg.schedule(), cfg.threads);
    const ImpairmentParams params = cfg.impairments();
    if (!params.is_identity()) {
        cfr = apply_impairments(cfr, params, derive_seed(campaign.seed, {kImpairStream}),
                                cfg.threads);
    }
    if (std::isfinite(cfg.snr_db)) {
        cfr = add_noise(cfr, cfg.snr_db, derive_seed(campaign.seed, {kNoiseStream}), cfg.threads);
    }
    return cfr;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto campaigns = make_campaigns(4, cfg.campaign_duration_s, cfg.master_seed);
    for (const auto& campaign : campaigns) {
        const CfrTensor cfr = simulate_campaign(cfg, campaign);
        const fs::path path = fs::path(out_dir) / (campaign.id + ".wslb");
        write_capture(path.string(), cfr, campaign.label, campaign.seed);
        std::cout << "wrote " << path.string() << " (" << cfr.n_snapshots() << " snapshots, "
                  << cfr.n_subcarriers() << " subcarriers, " << cfr.n_antennas() << " antennas)\n";
    }
    return 0;
}

int cmd_spectra(const RunConfig& cfg, const std::string& capture_path, const std::string& out_dir,
                std::size_t snapshot) {
    const CaptureFile file = read_capture(capture_path);
    const CfrTensor& raw = file.tensor;
    if (snapshot >= raw.n_snapshots()) {
        throw Error("snapshot " + std::to_string(snapshot) + " out of range, capture has " +
                    std::to_string(raw.n_snapshots()));
    }
    fs::create_directories(out_dir);

    {
        const RangeProfile profile = range_spectrum(raw, snapshot, 0);
        std::ofstream out(fs::path(out_dir) / "range.csv", std::ios::trunc);
        out << "bin,delay_s,power\n";
        for (std::size_t b = 0; b < profile.power.size(); ++b) {
            out << b << ',' << fmt_double(static_cast<double>(b) * profile.delay_bin_width_s)
                << ',' << fmt_double(profile.power[b]) << '\n';
        }
        if (!out) throw Error("failed writing range.csv");
    }

    if (raw.n_antennas() >= 2) {
        const auto grid = uniform_angle_grid(-1.5707963267948966, 1.5707963267948966, 181);
        const AoaProfile profile = aoa_spectrum(raw, snapshot, raw.n_subcarriers() / 2, grid);
        std::ofstream out(fs::path(out_dir) / "aoa.csv", std::ios::trunc);
        out << "angle_rad,angle_deg,power\n";
        for (std::size_t g = 0; g < profile.angles_rad.size(); ++g) {
            out << fmt_double(profile.angles_rad[g]) << ','
                << fmt_double(profile.angles_rad[g] * 180.0 / 3.141592653589793) << ','
                << fmt_double(profile.power[g]) << '\n';
        }
        if (!out) throw Error("failed writing aoa.csv");
    } else {
        std::cout << "aoa.csv skipped: capture has a single antenna\n";
    }

    {
        const CfrTensor clean = sanitize_phase(raw, nullptr, cfg.threads);
        const DopplerConfig dcfg = cfg.doppler();
        const std::size_t last_start = clean.n_snapshots() >= dcfg.window_len
                                           ? clean.n_snapshots() - dcfg.window_len
                                           : 0;
        const std::size_t start = std::min(snapshot, last_start);
        const DopplerVector vec =
            doppler_spectrum(clean.time_slice(start, dcfg.window_len), dcfg);
        const double lambda = raw.grid().wavelength_m();
        std::ofstream out(fs::path(out_dir) / "doppler.csv", std::ios::trunc);
        out << "bin,freq_hz,rate_mps,power\n";
        for (std::size_t b = 0; b < vec.power.size(); ++b) {
            const double f = vec.bin_frequency_hz(b);
            out << b << ',' << fmt_double(f) << ',' << fmt_double(f * lambda) << ','
                << fmt_double(vec.power[b]) << '\n';
        }
        if (!out) throw Error("failed writing doppler.csv");
    }

    std::cout << "spectra written to " << out_dir << '\n';
    return 0;
}

struct DiscoveredCampaigns {
    std::vector<Campaign> campaigns;
    std::map<std::string, fs::path> paths;  // campaign id -> capture file
};

DiscoveredCampaigns discover_campaigns(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wslb") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .wslb captures found in " + dir);

    DiscoveredCampaigns out;
    std::array<int, kNumClasses> counts{};
    for (const auto& path : files) {
        const CaptureInfo info = read_capture_info(path.string());
        Campaign campaign;
        campaign.label = info.label;
        campaign.campaign_index = counts[static_cast<std::size_t>(info.label)]++;
        campaign.id = path.stem().string();
        campaign.duration_s =
            static_cast<double>(info.n_snapshots) * info.inter_packet_period_s;
        campaign.seed = info.seed;
        out.paths[campaign.id] = path;
        out.campaigns.push_back(std::move(campaign));
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (counts[c] != 4) {
            throw UnsupportedProtocolError("evaluation needs exactly 4 captures of class " +
                                           std::string(to_string(static_cast<ActivityClass>(c))) +
                                           ", found " + std::to_string(counts[c]));
        }
    }
    return out;
}

SweepOptions sweep_options(const RunConfig& cfg) {
    SweepOptions options;
    options.doppler = cfg.doppler();
    options.n_vectors = cfg.n_doppler_vectors;
    options.hyper = cfg.hyper();
    options.n_rounds = cfg.n_rounds;
    options.eval_seed = cfg.master_seed;
    options.threads = cfg.threads;
    return options;
}

void print_reports(const std::vector<ConfigReport>& reports) {
    for (const auto& r : reports) {
        std::cout << r.label << ": median accuracy " << fmt_double(r.accuracy_pct.median)
                  << ", median macro-F1 " << fmt_double(r.macro_f1_pct.median) << " over "
                  << r.sets.size() << " sets\n";
    }
}

int cmd_sweep_ru(const RunConfig& cfg, const std::string& captures_dir,
                 const std::string& out_dir) {
    const DiscoveredCampaigns found = discover_campaigns(captures_dir);
    fs::create_directories(out_dir);
    const TensorProvider provider = [&found](const Campaign& campaign) {
        return read_capture(found.paths.at(campaign.id).string()).tensor;
    };
    const auto reports = sweep_ru(found.campaigns, provider, cfg.rus, sweep_options(cfg));
    write_results_csv((fs::path(out_dir) / "ru_results.csv").string(), reports);
    write_summary_json((fs::path(out_dir) / "ru_summary.json").string(), reports);
    print_reports(reports);
    return 0;
}

int cmd_sweep_sampling(const RunConfig& cfg, const std::string& captures_dir,
                       const std::string& out_dir) {
    const DiscoveredCampaigns found = discover_campaigns(captures_dir);
    fs::create_directories(out_dir);
    const TensorProvider provider = [&found](const Campaign& campaign) {
        return read_capture(found.paths.at(campaign.id).string()).tensor;
    };
    const auto reports =
        sweep_sampling(found.campaigns, provider, cfg.sampling_factors, sweep_options(cfg));
    write_results_csv((fs::path(out_dir) / "sampling_results.csv").string(), reports);
    write_summary_json((fs::path(out_dir) / "sampling_summary.json").string(), reports);
    print_reports(reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wi-Fi channel-response sensing laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string capture_path;
    std::string captures_dir;
    std::size_t snapshot = 0;

    auto* simulate = app.add_subcommand(
        "simulate", "Synthesize the 16-session activity roster and write captures");
    simulate->add_option("--config", config_path, "Config file (defaults when omitted)");
    simulate->add_option("--out", out_dir, "Output directory for .wslb captures")->required();

    auto* spectra = app.add_subcommand(
        "spectra", "Export range, angle and Doppler spectra of one capture as CSV");
    spectra->add_option("--config", config_path, "Config file (defaults when omitted)");
    spectra->add_option("--capture", capture_path, "Input .wslb capture")
        ->required()
        ->check(CLI::ExistingFile);
    spectra->add_option("--out", out_dir, "Output directory for CSV files")->required();
    spectra->add_option("--snapshot", snapshot, "Snapshot index to analyze (default 0)");

    auto* sweep_ru_cmd = app.add_subcommand(
        "sweep-ru", "Cross-validated accuracy for every configured resource unit");
    sweep_ru_cmd->add_option("--config", config_path, "Config file (defaults when omitted)");
    sweep_ru_cmd->add_option("--captures", captures_dir, "Directory of .wslb captures")
        ->required()
        ->check(CLI::ExistingDirectory);
    sweep_ru_cmd->add_option("--out", out_dir, "Output directory for reports")->required();

    auto* sweep_sampling_cmd = app.add_subcommand(
        "sweep-sampling", "Cross-validated accuracy under temporal subsampling");
    sweep_sampling_cmd->add_option("--config", config_path, "Config file (defaults when omitted)");
    sweep_sampling_cmd->add_option("--captures", captures_dir, "Directory of .wslb captures")
        ->required()
        ->check(CLI::ExistingDirectory);
    sweep_sampling_cmd->add_option("--out", out_dir, "Output directory for reports")->required();

    auto* validate = app.add_subcommand("validate", "Run built-in consistency checks");
    validate->add_option("--config", config_path, "Config file to check (defaults when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const RunConfig cfg = load_or_default(config_path);
        if (simulate->parsed()) return cmd_simulate(cfg, out_dir);
        if (spectra->parsed()) return cmd_spectra(cfg, capture_path, out_dir, snapshot);
        if (sweep_ru_cmd->parsed()) return cmd_sweep_ru(cfg, captures_dir, out_dir);
        if (sweep_sampling_cmd->parsed()) return cmd_sweep_sampling(cfg, captures_dir, out_dir);
        if (validate->parsed()) return run_selftest(std::cout) == 0 ? 0 : 2;
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
