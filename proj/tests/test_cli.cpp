#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(AFESIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path make_config(const fs::path& dir, const std::string& extra) {
    const fs::path p = dir / "run.cfg";
    std::ofstream out(p);
    out << "duration_samples=32768\nn_fft=8192\n" << extra;
    return p;
}

}  // namespace

TEST_CASE("simulate produces the three artifacts and exits 0") {
    const fs::path dir = fs::temp_directory_path() / "afesim_cli_sim";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = make_config(dir, "");
    CHECK(run("simulate --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out/bitstream.txt"));
    CHECK(fs::exists(dir / "out/psd.csv"));
    CHECK(fs::exists(dir / "out/metrics_report.txt"));
    const std::string rep = slurp(dir / "out/metrics_report.txt");
    CHECK(rep.find("snr_db=") != std::string::npos);
    CHECK(rep.find("fs_hz=") != std::string::npos);  // resolved config echoed
    fs::remove_all(dir);
}

TEST_CASE("seeded runs are byte-identical; the seed flag changes them") {
    const fs::path dir = fs::temp_directory_path() / "afesim_cli_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = make_config(dir, "noise_enabled=1\ns_dda_th=1e-13\n");
    const std::string base = "simulate --config " + cfg.string();
    CHECK(run(base + " --seed 7 --out " + (dir / "a").string()) == 0);
    CHECK(run(base + " --seed 7 --out " + (dir / "b").string()) == 0);
    CHECK(run(base + " --seed 8 --out " + (dir / "c").string()) == 0);
    CHECK(slurp(dir / "a/bitstream.txt") == slurp(dir / "b/bitstream.txt"));
    CHECK(slurp(dir / "a/psd.csv") == slurp(dir / "b/psd.csv"));
    CHECK(slurp(dir / "a/bitstream.txt") != slurp(dir / "c/bitstream.txt"));
    fs::remove_all(dir);
}

TEST_CASE("invalid configuration exits 1") {
    const fs::path dir = fs::temp_directory_path() / "afesim_cli_bad";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto bad_key = make_config(dir, "nonsense_key=1\n");
    CHECK(run("simulate --config " + bad_key.string() + " --out " + (dir / "o").string()) == 1);
    const auto bad_rc = make_config(dir, "r_ohm=9e4\n");  // violates 1/(RC)=G*fs
    CHECK(run("simulate --config " + bad_rc.string() + " --out " + (dir / "o").string()) == 1);
    CHECK(run("simulate --config " + (dir / "missing.cfg").string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("overload exits 2") {
    const fs::path dir = fs::temp_directory_path() / "afesim_cli_ovl";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = make_config(dir, "amp_dbfs=40\n");  // 100x full scale
    CHECK(run("simulate --config " + cfg.string() + " --out " + (dir / "o").string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("remaining subcommands succeed and write their csvs") {
    const fs::path dir = fs::temp_directory_path() / "afesim_cli_misc";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = make_config(dir, "amps_dbfs=-40,-20,-3\nduration_samples=16384\n");
    CHECK(run("noise-psd --out " + (dir / "n").string()) == 0);
    CHECK(fs::exists(dir / "n/noise_psd_chopped.csv"));
    CHECK(fs::exists(dir / "n/noise_psd_unchopped.csv"));
    CHECK(run("linmodel --out " + (dir / "l").string()) == 0);
    CHECK(fs::exists(dir / "l/linmodel_hi.csv"));
    CHECK(fs::exists(dir / "l/linmodel_hf.csv"));
    CHECK(run("sweep --config " + cfg.string() + " --out " + (dir / "s").string()) == 0);
    CHECK(fs::exists(dir / "s/drcurve.csv"));
    const std::string records = std::string(AFESIM_SOURCE_DIR) + "/data/table4.csv";
    CHECK(run("fom --records " + records + " --out " + (dir / "f").string()) == 0);
    CHECK(fs::exists(dir / "f/comparison.csv"));
    CHECK(fs::exists(dir / "f/comparison.txt"));
    fs::remove_all(dir);
}
