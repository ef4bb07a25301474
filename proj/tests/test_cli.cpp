#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

// Populated by the test runner's --cli-path flag; empty when not provided.
extern std::string g_cli_path;

namespace fs = std::filesystem;

namespace {

// Runs the tool through the shell, returns its exit code (-1 when the shell
// itself could not run it).
int run_cli(const std::string& args) {
    const std::string cmd = '"' + g_cli_path + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += (c == '\n');
    return n;
}

// One simulated roster shared by the capture-consuming cases. Built lazily so
// the binary is invoked only once for it.
struct CliWorkspace {
    fs::path base;
    fs::path config;
    fs::path captures;
    bool simulated = false;
};

const CliWorkspace& workspace() {
    static const CliWorkspace ws = [] {
        CliWorkspace w;
        w.base = fs::path("/tmp") / ("wislab_cli_" + std::to_string(getpid()));
        fs::remove_all(w.base);
        fs::create_directories(w.base);
        w.config = w.base / "lab.cfg";
        {
            std::ofstream out(w.config);
            out << "campaign_duration_s = 0.42\n"  // 56 snapshots at 7.5 ms
                   "n_rx_antennas = 2\n"
                   "n_doppler_vectors = 8\n"
                   "epochs = 10\n"
                   "n_rounds = 2\n"
                   "rus = RU1-242\n"
                   "sampling_factors = 1, 2\n";
        }
        w.captures = w.base / "captures";
        w.simulated =
            run_cli("simulate --config " + w.config.string() + " --out " + w.captures.string()) ==
            0;
        return w;
    }();
    return ws;
}

#define SKIP_WITHOUT_CLI()                                        \
    if (g_cli_path.empty()) {                                     \
        MESSAGE("skipping: runner started without --cli-path");   \
        return;                                                   \
    }

}  // namespace

TEST_CASE("usage errors exit with code 1, help with 0") {
    SKIP_WITHOUT_CLI();
    CHECK(run_cli("") == 1);                    // a subcommand is required
    CHECK(run_cli("frobnicate") == 1);          // unknown subcommand
    CHECK(run_cli("simulate") == 1);            // --out is required
    CHECK(run_cli("spectra --capture /nonexistent.wslb --out /tmp") == 1);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("simulate --help") == 0);
}

TEST_CASE("validate runs the built-in checks") {
    SKIP_WITHOUT_CLI();
    const auto& ws = workspace();
    REQUIRE(ws.simulated);
    CHECK(run_cli("validate") == 0);
    CHECK(run_cli("validate --config " + ws.config.string()) == 0);

    // A config that fails validation surfaces as a tool error, not a crash.
    const fs::path bad = ws.base / "bad.cfg";
    std::ofstream(bad) << "epochs = 0\n";
    CHECK(run_cli("validate --config " + bad.string()) == 2);
}

TEST_CASE("simulate writes the 16-session roster deterministically") {
    SKIP_WITHOUT_CLI();
    const auto& ws = workspace();
    REQUIRE(ws.simulated);

    const char* labels[] = {"Empty", "InPlace", "Walking", "Running"};
    for (const char* label : labels) {
        for (int idx = 0; idx < 4; ++idx) {
            const fs::path file =
                ws.captures / (std::string(label) + "_" + std::to_string(idx) + ".wslb");
            REQUIRE_MESSAGE(fs::exists(file), file.string());
            // 64-byte header + 56 snapshots of 996 x 2 binary32 pairs.
            CHECK(fs::file_size(file) == 64 + 56u * 996u * 2u * 2u * 4u);
        }
    }

    std::size_t n_files = 0;
    for (const auto& entry : fs::directory_iterator(ws.captures)) {
        n_files += entry.is_regular_file();
    }
    CHECK(n_files == 16);

    // A second run from the same config reproduces every capture bit for bit.
    const fs::path again = ws.base / "captures_again";
    REQUIRE(run_cli("simulate --config " + ws.config.string() + " --out " + again.string()) == 0);
    for (const char* label : labels) {
        for (int idx = 0; idx < 4; ++idx) {
            const std::string name = std::string(label) + "_" + std::to_string(idx) + ".wslb";
            CHECK_MESSAGE(slurp(ws.captures / name) == slurp(again / name), name);
        }
    }
    fs::remove_all(again);
}

TEST_CASE("spectra exports range, angle and Doppler CSVs") {
    SKIP_WITHOUT_CLI();
    const auto& ws = workspace();
    REQUIRE(ws.simulated);

    const fs::path capture = ws.captures / "Walking_0.wslb";
    const fs::path out = ws.base / "spectra";
    REQUIRE(run_cli("spectra --config " + ws.config.string() + " --capture " + capture.string() +
                    " --out " + out.string() + " --snapshot 3") == 0);

    const std::string range = slurp(out / "range.csv");
    CHECK(range.rfind("bin,delay_s,power\n", 0) == 0);
    CHECK(count_lines(range) == 1 + 996);
    CHECK(range.find("\n0,0,") != std::string::npos);

    const std::string aoa = slurp(out / "aoa.csv");
    CHECK(aoa.rfind("angle_rad,angle_deg,power\n", 0) == 0);
    CHECK(count_lines(aoa) == 1 + 181);

    const std::string doppler = slurp(out / "doppler.csv");
    CHECK(doppler.rfind("bin,freq_hz,rate_mps,power\n", 0) == 0);
    CHECK(count_lines(doppler) == 1 + 64);

    // Analysis errors map to exit code 2.
    CHECK(run_cli("spectra --capture " + capture.string() + " --out " + out.string() +
                  " --snapshot 999") == 2);
    const fs::path garbage = ws.base / "garbage.wslb";
    std::ofstream(garbage) << "not a capture";
    CHECK(run_cli("spectra --capture " + garbage.string() + " --out " + out.string()) == 2);
}

TEST_CASE("sweep-ru reports are reproducible byte for byte") {
    SKIP_WITHOUT_CLI();
    const auto& ws = workspace();
    REQUIRE(ws.simulated);

    const fs::path out1 = ws.base / "sweep_ru_1";
    const fs::path out2 = ws.base / "sweep_ru_2";
    const std::string args = "sweep-ru --config " + ws.config.string() + " --captures " +
                             ws.captures.string() + " --out ";
    REQUIRE(run_cli(args + out1.string()) == 0);
    REQUIRE(run_cli(args + out2.string()) == 0);

    const std::string csv = slurp(out1 / "ru_results.csv");
    CHECK(csv.rfind("config_label,round,test_campaign,accuracy,macro_f1\n", 0) == 0);
    CHECK(count_lines(csv) == 1 + 2 * 12);  // one RU, 2 rounds of 12 splits
    CHECK(csv.find("RU1-242,1,") != std::string::npos);
    CHECK(csv.find("RU1-242,2,") != std::string::npos);

    CHECK(slurp(out2 / "ru_results.csv") == csv);
    const std::string json = slurp(out1 / "ru_summary.json");
    CHECK(slurp(out2 / "ru_summary.json") == json);
    CHECK(json.find("\"RU1-242\"") != std::string::npos);
    CHECK(json.find("\"n_sets\": 24") != std::string::npos);

    // An incomplete roster (one capture instead of 4 per class) is rejected.
    const fs::path partial = ws.base / "partial";
    fs::create_directories(partial);
    fs::copy_file(ws.captures / "Empty_0.wslb", partial / "Empty_0.wslb");
    CHECK(run_cli("sweep-ru --config " + ws.config.string() + " --captures " + partial.string() +
                  " --out " + (ws.base / "sweep_partial").string()) == 2);

    // So is an empty directory.
    const fs::path empty = ws.base / "no_captures";
    fs::create_directories(empty);
    CHECK(run_cli("sweep-ru --config " + ws.config.string() + " --captures " + empty.string() +
                  " --out " + (ws.base / "sweep_empty").string()) == 2);
}

TEST_CASE("sweep-sampling reports cover each factor") {
    SKIP_WITHOUT_CLI();
    const auto& ws = workspace();
    REQUIRE(ws.simulated);

    const fs::path out = ws.base / "sweep_sampling";
    REQUIRE(run_cli("sweep-sampling --config " + ws.config.string() + " --captures " +
                    ws.captures.string() + " --out " + out.string()) == 0);

    const std::string csv = slurp(out / "sampling_results.csv");
    CHECK(csv.rfind("config_label,round,test_campaign,accuracy,macro_f1\n", 0) == 0);
    CHECK(count_lines(csv) == 1 + 2 * 2 * 12);  // two factors, 2 rounds of 12 splits
    CHECK(csv.find("k1-N8,") != std::string::npos);
    CHECK(csv.find("k2-N4,") != std::string::npos);

    const std::string json = slurp(out / "sampling_summary.json");
    CHECK(json.find("\"k1-N8\"") != std::string::npos);
    CHECK(json.find("\"k2-N4\"") != std::string::npos);
}

TEST_CASE("cli workspace cleanup") {
    if (g_cli_path.empty()) return;
    fs::remove_all(workspace().base);
    CHECK(true);
}
