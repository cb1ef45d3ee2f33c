// Command-line front end for the delta-sigma AFE behavioral toolkit.
//
// Subcommands: simulate, noise-psd, linmodel, sweep, fom.
// Exit codes: 0 ok, 1 invalid config/arguments, 2 overload beyond threshold.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "afesim/decim.hpp"
#include "afesim/io.hpp"
#include "afesim/linmodel.hpp"
#include "afesim/loopsim.hpp"
#include "afesim/metrics.hpp"
#include "afesim/noisemodel.hpp"
#include "afesim/sigproc.hpp"

namespace {

constexpr const char* kToolVersion = "afesim 0.1.0";

using afesim::Window;

// File-sourced key/value configuration. Units are part of the key names to
// keep the 20-300 mV reference ladder unambiguous. Unknown keys are
// rejected.
struct RunConfig {
    afesim::ModulatorConfig mod;
    bool noise_enabled = false;
    double temp_k = 300.0;
    double s_dda_th = 1e-16;
    double fc_hz = 10e3;
    double amp_dbfs = -3.0;
    double sig_freq_hz = 854.5;
    int n_fft = 8192;
    Window window = Window::hann;
    double bw_hz = 1000.0;
    double overload_frac = 0.01;
    std::vector<double> amps_dbfs = {-80, -70, -60, -50, -40, -30, -20, -10, -6, -3, -1, 0};

    afesim::NoiseInjection noise() const {
        afesim::NoiseInjection inj;
        inj.enabled = noise_enabled;
        inj.params.T = temp_k;
        inj.params.S_dda_th = s_dda_th;
        inj.params.fc_hz = fc_hz;
        inj.params.f_ch_hz = mod.f_ch_hz;
        inj.params.amp = mod.integrator();
        return inj;
    }
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto ws = line.find_last_not_of(" \t\r");
        if (ws == std::string::npos) continue;
        line = line.substr(0, ws + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "fs_hz") cfg.mod.fs_hz = std::stod(val);
        else if (key == "substeps") cfg.mod.substeps = std::stoi(val);
        else if (key == "g") cfg.mod.G = std::stod(val);
        else if (key == "r_ohm") cfg.mod.R = std::stod(val);
        else if (key == "c_farad") cfg.mod.C = std::stod(val);
        else if (key == "a_i") cfg.mod.A_i = std::stod(val);
        else if (key == "a_f") cfg.mod.A_f = std::stod(val);
        else if (key == "vfb_mv") cfg.mod.vfb_mv = std::stod(val);
        else if (key == "chopper_on") cfg.mod.chopper_on = std::stoi(val) != 0;
        else if (key == "f_ch_hz") cfg.mod.f_ch_hz = std::stod(val);
        else if (key == "seed") cfg.mod.seed = std::stoull(val);
        else if (key == "duration_samples") cfg.mod.duration_samples = std::stoll(val);
        else if (key == "clip_factor") cfg.mod.clip_factor = std::stod(val);
        else if (key == "noise_enabled") cfg.noise_enabled = std::stoi(val) != 0;
        else if (key == "temp_k") cfg.temp_k = std::stod(val);
        else if (key == "s_dda_th") cfg.s_dda_th = std::stod(val);
        else if (key == "fc_hz") cfg.fc_hz = std::stod(val);
        else if (key == "amp_dbfs") cfg.amp_dbfs = std::stod(val);
        else if (key == "sig_freq_hz") cfg.sig_freq_hz = std::stod(val);
        else if (key == "n_fft") cfg.n_fft = std::stoi(val);
        else if (key == "window") {
            if (val == "hann") cfg.window = Window::hann;
            else if (val == "rectangular") cfg.window = Window::rectangular;
            else throw std::runtime_error("window must be hann or rectangular");
        }
        else if (key == "bw_hz") cfg.bw_hz = std::stod(val);
        else if (key == "overload_frac") cfg.overload_frac = std::stod(val);
        else if (key == "amps_dbfs") cfg.amps_dbfs = parse_list(val);
        else throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return cfg;
}

std::string resolved_config_text(const RunConfig& c) {
    std::ostringstream out;
    out.precision(12);
    out << "fs_hz=" << c.mod.fs_hz << "\nsubsteps=" << c.mod.substeps << "\ng=" << c.mod.G
        << "\nr_ohm=" << c.mod.R << "\nc_farad=" << c.mod.C << "\na_i=" << c.mod.A_i
        << "\na_f=" << c.mod.A_f << "\nvfb_mv=" << c.mod.vfb_mv
        << "\nchopper_on=" << (c.mod.chopper_on ? 1 : 0) << "\nf_ch_hz=" << c.mod.f_ch_hz
        << "\nseed=" << c.mod.seed << "\nduration_samples=" << c.mod.duration_samples
        << "\nclip_factor=" << c.mod.clip_factor << "\nnoise_enabled=" << (c.noise_enabled ? 1 : 0)
        << "\ntemp_k=" << c.temp_k << "\ns_dda_th=" << c.s_dda_th << "\nfc_hz=" << c.fc_hz
        << "\namp_dbfs=" << c.amp_dbfs << "\nsig_freq_hz=" << c.sig_freq_hz
        << "\nn_fft=" << c.n_fft
        << "\nwindow=" << (c.window == Window::hann ? "hann" : "rectangular")
        << "\nbw_hz=" << c.bw_hz << "\noverload_frac=" << c.overload_frac << "\n";
    return out.str();
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const double amp_v = std::pow(10.0, cfg.amp_dbfs / 20.0) * cfg.mod.vfb_v();
    const afesim::SampleStream input =
        afesim::gen_sine(amp_v, cfg.sig_freq_hz, cfg.mod.fs_hz, cfg.mod.duration_samples);
    const afesim::ModTrace tr = afesim::simulate(cfg.mod, input, cfg.noise());
    const afesim::Spectrum sp = afesim::periodogram(tr.q.to_stream(), cfg.n_fft, cfg.window);
    const afesim::SnrResult snr = afesim::snr_enob(sp, cfg.sig_freq_hz, cfg.bw_hz);

    afesim::write_bitstream(tr.q, out_dir + "/bitstream.txt");
    afesim::write_spectrum_csv(sp, out_dir + "/psd.csv", kToolVersion);

    std::ostringstream rep;
    rep.precision(12);
    rep << "# " << kToolVersion << " metrics report (reusable as a config file)\n";
    rep << resolved_config_text(cfg);
    rep << "# snr_db=" << snr.snr_db << "\n# enob_bits=" << snr.enob_bits
        << "\n# signal_resolved=" << (snr.signal_resolved ? 1 : 0)
        << "\n# signal_bin=" << snr.signal_bin
        << "\n# signal_halfwidth_bins=" << snr.signal_halfwidth_bins
        << "\n# dc_exclusion_bins=" << snr.dc_exclusion_bins
        << "\n# overload_events=" << tr.overload_events.size() << "\n";
    afesim::atomic_write(out_dir + "/metrics_report.txt", rep.str());

    const double frac = static_cast<double>(tr.overload_events.size()) /
                        static_cast<double>(cfg.mod.duration_samples);
    if (frac > cfg.overload_frac) {
        std::cerr << "overload fraction " << frac << " exceeds threshold " << cfg.overload_frac
                  << "\n";
        return 2;
    }
    std::cout << "snr_db=" << snr.snr_db << " enob_bits=" << snr.enob_bits << "\n";
    return 0;
}

int cmd_noise_psd(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    afesim::NoiseParams p = cfg.noise().params;
    const double f_lo = 1.0;
    const double f_hi = 2.0 * p.f_ch_hz;
    afesim::write_noise_psd_csv(p, false, f_lo, f_hi, 600, out_dir + "/noise_psd_unchopped.csv",
                                kToolVersion);
    afesim::write_noise_psd_csv(p, true, f_lo, f_hi, 600, out_dir + "/noise_psd_chopped.csv",
                                kToolVersion);
    return 0;
}

int cmd_linmodel(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const afesim::IntegratorParams p = cfg.mod.integrator();
    const double pole_hz = 1.0 / (2.0 * std::numbers::pi * p.tau());
    const double zero_hz = 1.0 / (2.0 * std::numbers::pi * p.R * p.C);
    std::vector<afesim::ResponsePoint> hi, hf;
    const double f_lo = pole_hz / 100.0;
    const double f_hi = zero_hz * 100.0;
    const int n_pts = 600;
    const double lr = std::log(f_hi / f_lo) / (n_pts - 1);
    for (int i = 0; i < n_pts; ++i) {
        const double f = f_lo * std::exp(lr * i);
        const afesim::PortResponse r = afesim::dda_integrator_response(p, f);
        hi.push_back({f, 20.0 * std::log10(std::abs(r.H_i)),
                      std::arg(r.H_i) * 180.0 / std::numbers::pi});
        hf.push_back({f, 20.0 * std::log10(std::abs(r.H_f)),
                      std::arg(r.H_f) * 180.0 / std::numbers::pi});
    }
    std::ostringstream hdr;
    hdr.precision(10);
    hdr << kToolVersion << " pole_hz=" << pole_hz << " zero_hz=" << zero_hz;
    afesim::write_response_csv(hi, out_dir + "/linmodel_hi.csv", hdr.str());
    afesim::write_response_csv(hf, out_dir + "/linmodel_hf.csv", hdr.str());
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    afesim::SweepAnalysis an;
    an.sig_freq_hz = cfg.sig_freq_hz;
    an.bw_hz = cfg.bw_hz;
    an.n_fft = cfg.n_fft;
    an.window = cfg.window;
    const afesim::DrCurve c = afesim::dr_sweep(cfg.mod, cfg.amps_dbfs, an, cfg.noise());
    afesim::write_dr_curve_csv(c, out_dir + "/drcurve.csv", kToolVersion);
    std::cout << "dr_db=" << c.dr_db << " peak_snr_db=" << c.peak_snr_db << "\n";
    return 0;
}

int cmd_fom(const std::string& records_path, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto rows = afesim::comparison_table(afesim::read_records_csv(records_path));
    afesim::write_comparison_csv(rows, out_dir + "/comparison.csv");
    afesim::atomic_write(out_dir + "/comparison.txt", afesim::format_comparison_text(rows));
    std::cout << afesim::format_comparison_text(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{kToolVersion};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--config", config_path, "key=value config file")->configurable(false);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_flag, "override the config seed");

    auto* sim = app.add_subcommand("simulate", "run the modulator and report SNR/ENOB");
    auto* noise = app.add_subcommand("noise-psd", "analytic device-noise PSD sweep CSVs");
    auto* lin = app.add_subcommand("linmodel", "integrator frequency-response CSVs");
    auto* sweep = app.add_subcommand("sweep", "SNR versus amplitude sweep");
    auto* fom = app.add_subcommand("fom", "comparison table with recomputed FOMs");
    std::string records_path = "data/table4.csv";
    fom->add_option("--records", records_path, "converter records CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_flag) cfg.mod.seed = *seed_flag;
        if (sim->parsed()) return cmd_simulate(cfg, out_dir);
        if (noise->parsed()) return cmd_noise_psd(cfg, out_dir);
        if (lin->parsed()) return cmd_linmodel(cfg, out_dir);
        if (sweep->parsed()) return cmd_sweep(cfg, out_dir);
        if (fom->parsed()) return cmd_fom(records_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
