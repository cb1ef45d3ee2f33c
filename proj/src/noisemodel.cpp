#include "afesim/noisemodel.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "afesim/fft.hpp"
#include "afesim/io.hpp"

namespace afesim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double sq(double x) { return x * x; }

// first-harmonic power fraction of a +/-1 square wave
constexpr double chop_factor = 8.0 / (std::numbers::pi * std::numbers::pi);

double flicker_shape(double fc, double f) { return 1.0 + fc / f; }

}  // namespace

void NoiseParams::validate() const {
    amp.validate();
    if (!(T > 0.0 && S_dda_th > 0.0 && fc_hz > 0.0 && f_ch_hz > 0.0)) {
        throw std::invalid_argument("NoiseParams: all quantities must be strictly positive");
    }
    if (!(fc_hz < f_ch_hz)) {
        throw std::invalid_argument("NoiseParams: need fc_hz < f_ch_hz");
    }
}

double out_psd(const NoiseParams& p, double f_hz, bool chopped, double clamp_hz) {
    p.validate();
    if (f_hz <= 0.0) {
        throw std::invalid_argument("out_psd: f_hz must be > 0 (flicker divergence at DC)");
    }
    const double rc = p.amp.R * p.amp.C;
    const double arc = (p.amp.A_f + 1.0) * rc;
    const double res = p.resistor_psd() * sq(p.amp.A_f) / (1.0 + sq(two_pi * f_hz * arc));
    if (!chopped) {
        const double dda = p.S_dda_th * flicker_shape(p.fc_hz, f_hz) * sq(p.amp.A_i) *
                           (1.0 + sq(two_pi * f_hz * rc)) / (1.0 + sq(two_pi * f_hz * arc));
        return res + dda;
    }
    const double off = std::max(std::abs(f_hz - p.f_ch_hz), clamp_hz);
    if (off == 0.0) throw std::invalid_argument("out_psd: f at f_ch needs a nonzero clamp");
    const double dda = chop_factor * p.S_dda_th * flicker_shape(p.fc_hz, off) * sq(p.amp.A_i) *
                       (1.0 + sq(two_pi * off * rc)) / (1.0 + sq(two_pi * off * arc));
    return res + dda;
}

double in_psd(const NoiseParams& p, double f_hz, bool chopped, double clamp_hz) {
    p.validate();
    if (f_hz <= 0.0) {
        throw std::invalid_argument("in_psd: f_hz must be > 0 (flicker divergence at DC)");
    }
    const double rc = p.amp.R * p.amp.C;
    const double arc = (p.amp.A_f + 1.0) * rc;
    const double res = p.resistor_psd() * sq(p.amp.A_f) /
                       (sq(p.amp.A_i) * (1.0 + sq(two_pi * f_hz * rc)));
    if (!chopped) {
        return res + p.S_dda_th * flicker_shape(p.fc_hz, f_hz);
    }
    const double off = std::max(std::abs(f_hz - p.f_ch_hz), clamp_hz);
    if (off == 0.0) throw std::invalid_argument("in_psd: f at f_ch needs a nonzero clamp");
    const double dda = chop_factor * p.S_dda_th * flicker_shape(p.fc_hz, off) *
                       (1.0 + sq(two_pi * off * rc)) * (1.0 + sq(two_pi * f_hz * arc)) /
                       ((1.0 + sq(two_pi * off * arc)) * (1.0 + sq(two_pi * f_hz * rc)));
    return res + dda;
}

SampleStream synth_thermal(double psd, double rate_hz, Eigen::Index n, std::uint64_t seed) {
    if (psd < 0.0) throw std::invalid_argument("synth_thermal: psd must be >= 0");
    SampleStream s;
    s.rate_hz = rate_hz;
    s.samples = Eigen::ArrayXd::Zero(n);
    if (psd == 0.0) return s;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(psd * rate_hz / 2.0));
    for (Eigen::Index i = 0; i < n; ++i) s.samples[i] = gauss(rng);
    return s;
}

namespace {

// Frequency-domain synthesis of Gaussian noise whose one-sided PSD at bin
// frequency f is given by shape(f). No DC power; the Nyquist bin is real.
SampleStream synth_shaped(double rate_hz, Eigen::Index n, std::uint64_t seed,
                          const std::function<double(double)>& one_sided_psd) {
    if (!is_pow2(static_cast<std::size_t>(n))) {
        throw std::invalid_argument("noise synthesis: n must be a power of two");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double df = rate_hz / static_cast<double>(n);
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n), {0.0, 0.0});
    for (Eigen::Index k = 1; k <= n / 2; ++k) {
        const double f = df * static_cast<double>(k);
        // E|X_k|^2 = S(f) * rate * n / 2 reproduces the target periodogram
        const double mag = std::sqrt(one_sided_psd(f) * rate_hz * static_cast<double>(n) / 2.0);
        if (k == n / 2) {
            spec[static_cast<std::size_t>(k)] = mag * gauss(rng);
        } else {
            const std::complex<double> g(gauss(rng), gauss(rng));
            spec[static_cast<std::size_t>(k)] = mag / std::numbers::sqrt2 * g;
            spec[static_cast<std::size_t>(n - k)] = std::conj(spec[static_cast<std::size_t>(k)]);
        }
    }
    fft_inplace(spec, /*inverse=*/true);
    SampleStream s;
    s.rate_hz = rate_hz;
    s.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) s.samples[i] = spec[static_cast<std::size_t>(i)].real();
    return s;
}

}  // namespace

SampleStream synth_flicker(double S_th, double fc_hz, double rate_hz, Eigen::Index n,
                           std::uint64_t seed) {
    if (!(fc_hz < rate_hz / 2.0)) {
        throw std::invalid_argument("synth_flicker: need fc_hz < rate/2");
    }
    return synth_shaped(rate_hz, n, seed,
                        [&](double f) { return S_th * fc_hz / f; });
}

SampleStream chop_modulate(const SampleStream& x, double f_ch_hz, ChopPhase phase) {
    if (!(f_ch_hz > 0.0 && f_ch_hz <= x.rate_hz / 2.0)) {
        throw std::invalid_argument("chop_modulate: need 0 < f_ch <= rate/2");
    }
    const double per = x.rate_hz / f_ch_hz;
    const auto period = static_cast<Eigen::Index>(std::llround(per));
    if (std::abs(per - static_cast<double>(period)) > 1e-9 || period % 2 != 0) {
        throw std::invalid_argument("chop_modulate: rate must be an even multiple of f_ch");
    }
    const Eigen::Index half = period / 2;
    const Eigen::Index offset = (phase == ChopPhase::half) ? half : 0;
    SampleStream y;
    y.rate_hz = x.rate_hz;
    y.label = x.label;
    y.samples.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Eigen::Index ph = (i + offset) % period;
        y.samples[i] = (ph < half) ? x.samples[i] : -x.samples[i];
    }
    return y;
}

NoiseRealization build_noise_realization(const NoiseParams& p, double rate_hz, Eigen::Index n,
                                         std::uint64_t seed) {
    p.validate();
    NoiseRealization r;
    r.resistor_thermal = synth_thermal(p.resistor_psd(), rate_hz, n, seed);
    r.dda_thermal = synth_thermal(p.S_dda_th, rate_hz, n, seed + 1);
    r.dda_flicker = synth_flicker(p.S_dda_th, p.fc_hz, rate_hz, n, seed + 2);
    r.resistor_thermal.label = "resistor_thermal";
    r.dda_thermal.label = "dda_thermal";
    r.dda_flicker.label = "dda_flicker";
    r.input_referred.rate_hz = rate_hz;
    r.input_referred.label = "input_referred";
    r.input_referred.samples =
        r.resistor_thermal.samples + r.dda_thermal.samples + r.dda_flicker.samples;
    return r;
}

SampleStream synth_device_output_noise(const NoiseParams& p, bool chopped, double rate_hz,
                                       Eigen::Index n, std::uint64_t seed) {
    p.validate();
    const double clamp = rate_hz / static_cast<double>(n) / 2.0;
    return synth_shaped(rate_hz, n, seed,
                        [&](double f) { return out_psd(p, f, chopped, clamp); });
}

SampleStream synth_device_input_noise(const NoiseParams& p, bool chopped, double rate_hz,
                                      Eigen::Index n, std::uint64_t seed) {
    p.validate();
    const double clamp = rate_hz / static_cast<double>(n) / 2.0;
    return synth_shaped(rate_hz, n, seed,
                        [&](double f) { return in_psd(p, f, chopped, clamp); });
}

double integrate_in_psd(const NoiseParams& p, bool chopped, double f_lo_hz, double f_hi_hz) {
    if (!(0.0 < f_lo_hz && f_lo_hz < f_hi_hz)) {
        throw std::invalid_argument("integrate_in_psd: need 0 < f_lo < f_hi");
    }
    const int n_pts = 4000;  // log-spaced trapezoid
    const double lr = std::log(f_hi_hz / f_lo_hz) / n_pts;
    double acc = 0.0;
    double f_prev = f_lo_hz;
    double v_prev = in_psd(p, f_prev, chopped);
    for (int i = 1; i <= n_pts; ++i) {
        const double f = f_lo_hz * std::exp(lr * i);
        const double v = in_psd(p, f, chopped);
        acc += 0.5 * (v + v_prev) * (f - f_prev);
        f_prev = f;
        v_prev = v;
    }
    return acc;
}

double calibrate_dda_thermal(const NoiseParams& p, bool chopped, double target_snr_db,
                             double amp_v, double f_lo_hz, double f_hi_hz) {
    const double budget = (amp_v * amp_v / 2.0) / std::pow(10.0, target_snr_db / 10.0);
    NoiseParams q = p;
    q.S_dda_th = 1.0;  // unit DDA noise to extract the linear coefficient
    const double dda_unit = integrate_in_psd(q, chopped, f_lo_hz, f_hi_hz);
    NoiseParams r = p;
    r.S_dda_th = 1e-300;  // resistor-only baseline
    const double res_part = integrate_in_psd(r, chopped, f_lo_hz, f_hi_hz);
    const double s = (budget - res_part) / dda_unit;
    if (!(s > 0.0)) {
        throw std::domain_error(
            "calibrate_dda_thermal: resistor noise alone exceeds the target budget");
    }
    return s;
}

void write_noise_psd_csv(const NoiseParams& p, bool chopped, double f_lo_hz, double f_hi_hz,
                         int points, const std::string& path,
                         const std::string& header_comment) {
    std::ostringstream out;
    out.precision(10);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "freq_hz,out_psd,in_psd\n";
    const double lr = std::log(f_hi_hz / f_lo_hz) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double f = f_lo_hz * std::exp(lr * i);
        const double clamp = f_lo_hz / 2.0;
        out << f << ',' << out_psd(p, f, chopped, clamp) << ',' << in_psd(p, f, chopped, clamp)
            << '\n';
    }
    atomic_write(path, out.str());
}

}  // namespace afesim
