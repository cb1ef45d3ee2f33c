#include "afesim/sigproc.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "afesim/fft.hpp"
#include "afesim/io.hpp"

namespace afesim {

SampleStream gen_sine(double amp_v, double freq_hz, double rate_hz, Eigen::Index n,
                      double phase_rad) {
    if (rate_hz <= 0.0) throw std::invalid_argument("gen_sine: rate_hz must be > 0");
    if (n < 1) throw std::invalid_argument("gen_sine: n must be >= 1");
    if (freq_hz < 0.0 || freq_hz >= rate_hz / 2.0) {
        throw std::invalid_argument("gen_sine: freq_hz must satisfy 0 <= f < rate/2");
    }
    SampleStream s;
    s.rate_hz = rate_hz;
    s.samples.resize(n);
    const double w = 2.0 * std::numbers::pi * freq_hz / rate_hz;
    for (Eigen::Index k = 0; k < n; ++k) {
        s.samples[k] = amp_v * std::sin(w * static_cast<double>(k) + phase_rad);
    }
    return s;
}

Spectrum periodogram(const SampleStream& x, int n_fft, Window window) {
    if (!is_pow2(static_cast<std::size_t>(n_fft))) {
        throw std::invalid_argument("periodogram: n_fft must be a power of two");
    }
    if (static_cast<Eigen::Index>(n_fft) > x.size()) {
        throw std::invalid_argument("periodogram: n_fft exceeds stream length");
    }
    const Eigen::Index n_seg = x.size() / n_fft;

    Eigen::ArrayXd w(n_fft);
    if (window == Window::hann) {
        for (int i = 0; i < n_fft; ++i) {
            w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n_fft));
        }
    } else {
        w.setOnes();
    }
    const double u = w.square().mean();  // window power normalization

    const Eigen::Index n_bins = n_fft / 2 + 1;
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n_bins);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_fft));
    for (Eigen::Index seg = 0; seg < n_seg; ++seg) {
        for (int i = 0; i < n_fft; ++i) {
            buf[static_cast<std::size_t>(i)] = x.samples[seg * n_fft + i] * w[i];
        }
        fft_inplace(buf);
        for (Eigen::Index k = 0; k < n_bins; ++k) {
            acc[k] += std::norm(buf[static_cast<std::size_t>(k)]);
        }
    }
    acc /= static_cast<double>(n_seg);

    Spectrum s;
    s.n_fft = n_fft;
    s.window = window;
    s.enbw_bins = (window == Window::hann) ? 1.5 : 1.0;
    s.segments = static_cast<int>(n_seg);
    s.df_hz = x.rate_hz / n_fft;
    const double scale = 1.0 / (x.rate_hz * n_fft * u);
    s.psd.resize(n_bins);
    for (Eigen::Index k = 0; k < n_bins; ++k) {
        const bool edge = (k == 0) || (k == n_bins - 1);
        s.psd[k] = acc[k] * scale * (edge ? 1.0 : 2.0);
    }
    return s;
}

double band_power(const Spectrum& s, double f_lo_hz, double f_hi_hz,
                  const std::set<Eigen::Index>& excluded_bins) {
    if (!(f_lo_hz >= 0.0 && f_lo_hz < f_hi_hz && f_hi_hz <= s.rate_hz() / 2.0 + s.df_hz / 2.0)) {
        throw std::invalid_argument("band_power: need 0 <= f_lo < f_hi <= rate/2");
    }
    const auto k_lo = static_cast<Eigen::Index>(std::ceil(f_lo_hz / s.df_hz - 1e-9));
    const auto k_hi = static_cast<Eigen::Index>(std::floor(f_hi_hz / s.df_hz + 1e-9));
    if (k_hi < k_lo) throw std::invalid_argument("band_power: empty band");
    double p = 0.0;
    for (Eigen::Index k = k_lo; k <= std::min(k_hi, s.bins() - 1); ++k) {
        if (excluded_bins.count(k)) continue;
        p += s.psd[k] * s.df_hz;
    }
    return p;
}

double enob_from_snr(double snr_db) {
    return std::round((snr_db - 1.76) / 6.02 * 10.0) / 10.0;
}

SnrResult snr_enob(const Spectrum& s, double sig_freq_hz, double bw_hz) {
    if (!(sig_freq_hz < bw_hz && bw_hz <= s.rate_hz() / 2.0 + s.df_hz / 2.0)) {
        throw std::invalid_argument("snr_enob: need sig_freq < bw <= rate/2");
    }
    SnrResult r;
    r.signal_halfwidth_bins = 3;  // hann leakage window
    r.dc_exclusion_bins = 2;
    r.signal_bin = static_cast<Eigen::Index>(std::llround(sig_freq_hz / s.df_hz));

    std::set<Eigen::Index> sig_bins;
    double p_sig = 0.0;
    for (Eigen::Index k = std::max<Eigen::Index>(0, r.signal_bin - r.signal_halfwidth_bins);
         k <= std::min(s.bins() - 1, r.signal_bin + r.signal_halfwidth_bins); ++k) {
        sig_bins.insert(k);
        p_sig += s.psd[k] * s.df_hz;
    }

    double p_noise = 0.0;
    Eigen::Index n_noise_bins = 0;
    const auto k_hi = std::min<Eigen::Index>(
        s.bins() - 1, static_cast<Eigen::Index>(std::floor(bw_hz / s.df_hz + 1e-9)));
    for (Eigen::Index k = r.dc_exclusion_bins; k <= k_hi; ++k) {
        if (sig_bins.count(k)) continue;
        p_noise += s.psd[k] * s.df_hz;
        ++n_noise_bins;
    }
    if (n_noise_bins == 0) throw std::invalid_argument("snr_enob: no noise bins in band");

    // signal indistinguishable from the floor: flag, do not silently return
    const double noise_per_bin = p_noise / static_cast<double>(n_noise_bins);
    const double sig_per_bin = p_sig / static_cast<double>(sig_bins.size());
    r.signal_resolved = sig_per_bin > noise_per_bin;

    r.snr_db = 10.0 * std::log10(p_sig / p_noise);
    r.enob_bits = enob_from_snr(r.snr_db);
    return r;
}

void write_spectrum_csv(const Spectrum& s, const std::string& path,
                        const std::string& header_comment) {
    std::ostringstream out;
    out.precision(10);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "freq_hz,psd_v2_per_hz,psd_dbv2_per_hz\n";
    for (Eigen::Index k = 0; k < s.bins(); ++k) {
        const double p = s.psd[k];
        const double db = p > 0.0 ? 10.0 * std::log10(p) : -400.0;
        out << s.freq(k) << ',' << p << ',' << db << '\n';
    }
    atomic_write(path, out.str());
}

}  // namespace afesim
