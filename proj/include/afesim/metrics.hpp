#pragma once

#include <optional>
#include <string>
#include <vector>

#include "afesim/loopsim.hpp"
#include "afesim/sigproc.hpp"

namespace afesim {

/// Walden figure of merit: power / (2^enob * nyquist) in pJ/conversion.
double fom_walden(double power_w, double enob_bits, double nyquist_sps);

/// Schreier figure of merit: dr_db + 10*log10(bw/power) in dB.
double fom_schreier(double dr_db, double bw_hz, double power_w);

struct ConverterRecord {
    std::string label;
    double power_w = 0.0;
    std::optional<double> enob_bits;  // missing -> blank FOM_W
    std::optional<double> dr_db;      // missing -> blank FOM_S
    double bw_hz = 0.0;
    double nyquist_sps = 0.0;  // = 2*bw
};

struct ComparisonRow {
    ConverterRecord rec;
    std::optional<double> fom_w_pj;
    std::optional<double> fom_s_db;
};

/// Recomputes both FOMs per record; sorted by FOM_S descending (rows
/// without a FOM_S last), ties broken by label.
std::vector<ComparisonRow> comparison_table(std::vector<ConverterRecord> records);

std::vector<ConverterRecord> read_records_csv(const std::string& path);
void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path);
std::string format_comparison_text(const std::vector<ComparisonRow>& rows);

/// SNR-vs-amplitude sweep result. dBFS is relative to the configured
/// feedback amplitude.
struct DrCurve {
    std::vector<std::pair<double, double>> points;  // (amp_dbfs, snr_db)
    double dr_db = 0.0;
    double peak_snr_db = 0.0;
    double peak_amp_dbfs = 0.0;
};

struct SweepAnalysis {
    double sig_freq_hz = 854.5;
    double bw_hz = 1000.0;
    int n_fft = 1 << 16;
    Window window = Window::hann;
};

/// Runs the loop simulation per amplitude and measures SNR. dr_db =
/// 20*log10(a_max/a_min) with a_max the largest amplitude within 6 dB of
/// the peak SNR (overload knee) and a_min the smallest with SNR > 0 dB.
/// Runs with an unresolved signal bin are excluded from knee detection.
DrCurve dr_sweep(const ModulatorConfig& cfg_template, const std::vector<double>& amps_dbfs,
                 const SweepAnalysis& analysis, const NoiseInjection& noise = {});

void write_dr_curve_csv(const DrCurve& c, const std::string& path,
                        const std::string& header_comment = {});

}  // namespace afesim
