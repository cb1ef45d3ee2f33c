#pragma once

#include <Eigen/Core>
#include <set>
#include <string>

namespace afesim {

/// Uniformly sampled real-valued differential waveform (volts).
struct SampleStream {
    double rate_hz = 0.0;
    Eigen::ArrayXd samples;
    std::string label;

    Eigen::Index size() const { return samples.size(); }
};

enum class Window { rectangular, hann };

/// One-sided power spectral density. Bins run from DC to Nyquist
/// (n_fft/2 + 1 values); the DC and Nyquist bins carry no doubling factor.
struct Spectrum {
    double df_hz = 0.0;
    Eigen::ArrayXd psd;  // V^2/Hz
    int n_fft = 0;
    Window window = Window::hann;
    double enbw_bins = 1.5;  // 1.5 for hann, 1.0 for rectangular
    int segments = 1;        // averaging count

    double rate_hz() const { return df_hz * n_fft; }
    double freq(Eigen::Index k) const { return static_cast<double>(k) * df_hz; }
    Eigen::Index bins() const { return psd.size(); }
};

/// samples[k] = amp_v * sin(2*pi*freq_hz*k/rate_hz + phase_rad).
/// Rejects freq_hz >= rate_hz/2 (aliased stimulus).
SampleStream gen_sine(double amp_v, double freq_hz, double rate_hz, Eigen::Index n,
                      double phase_rad = 0.0);

/// Windowed one-sided PSD with window power normalization: a coherent sine
/// of amplitude A integrates to A^2/2 across its leakage bins. When the
/// stream is longer than n_fft, non-overlapping segments are averaged.
Spectrum periodogram(const SampleStream& x, int n_fft, Window window);

/// Sum of psd*df over bins whose center frequency lies in [f_lo, f_hi],
/// minus excluded bins.
double band_power(const Spectrum& s, double f_lo_hz, double f_hi_hz,
                  const std::set<Eigen::Index>& excluded_bins = {});

struct SnrResult {
    double snr_db = 0.0;
    double enob_bits = 0.0;
    bool signal_resolved = true;  // false when signal power <= adjacent noise
    Eigen::Index signal_bin = 0;
    int signal_halfwidth_bins = 0;  // recorded binning choices
    int dc_exclusion_bins = 0;
};

/// SNR over [f_min, bw_hz] with the signal taken as signal bin +/- 3 bins
/// and the first 2 bins excluded as DC; enob = (snr - 1.76)/6.02 reported
/// to 0.1 bit.
SnrResult snr_enob(const Spectrum& s, double sig_freq_hz, double bw_hz);

double enob_from_snr(double snr_db);

/// CSV export: header `freq_hz,psd_v2_per_hz,psd_dbv2_per_hz`, one row per
/// bin, >= 9 significant digits. Written atomically (write-then-rename).
void write_spectrum_csv(const Spectrum& s, const std::string& path,
                        const std::string& header_comment = {});

}  // namespace afesim
