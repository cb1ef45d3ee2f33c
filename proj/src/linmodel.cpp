#include "afesim/linmodel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "afesim/io.hpp"

namespace afesim {

void IntegratorParams::validate() const {
    if (!(A_i >= A_f && A_f > 0.0)) {
        throw std::invalid_argument("IntegratorParams: need A_i >= A_f > 0");
    }
    if (!(R > 0.0 && C > 0.0)) {
        throw std::invalid_argument("IntegratorParams: need R > 0 and C > 0");
    }
}

void LoopParams::validate() const {
    if (!(G > 0.0 && G <= 1.0)) throw std::invalid_argument("LoopParams: need 0 < G <= 1");
    if (!(N >= 1.0)) throw std::invalid_argument("LoopParams: need N >= 1");
    if (!(n >= 1.0)) throw std::invalid_argument("LoopParams: need n >= 1");
}

PortResponse dda_integrator_response(const IntegratorParams& p, double f_hz) {
    p.validate();
    if (f_hz < 0.0) throw std::invalid_argument("dda_integrator_response: f_hz must be >= 0");
    const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
    const std::complex<double> src = s * (p.R * p.C);
    const std::complex<double> den = 1.0 + (p.A_f + 1.0) * src;
    PortResponse r;
    r.H_i = p.A_i * (1.0 + src) / den;
    r.H_f = -p.A_f / den;
    return r;
}

StfNtf stf_ntf_eq3(const LoopParams& lp, std::complex<double> z) {
    lp.validate();
    if (lp.n != 1.0) {
        throw std::invalid_argument("stf_ntf_eq3: exact form is derived for n = 1");
    }
    const double G = lp.G;
    const double N = lp.N;
    const std::complex<double> zi = 1.0 / z;
    const std::complex<double> zi2 = zi * zi;
    const std::complex<double> d = (G * G - G + N) * zi2 + (G - 2.0 * N) * zi + N;
    if (std::abs(d) == 0.0) {
        throw std::domain_error("stf_ntf_eq3: loop resonance, denominator is zero");
    }
    StfNtf r;
    r.stf = G * G * N * zi2 / d;
    const std::complex<double> one_m_zi = 1.0 - zi;
    r.ntf = N * one_m_zi * one_m_zi / d;
    return r;
}

StfNtf stf_ntf_eq4(const LoopParams& lp, std::complex<double> z) {
    lp.validate();
    const std::complex<double> zi = 1.0 / z;
    StfNtf r;
    r.stf = lp.n * lp.N * zi * zi;
    const std::complex<double> one_m_zi = 1.0 - zi;
    r.ntf = one_m_zi * one_m_zi * (lp.n * lp.N / (lp.G * lp.G));
    return r;
}

double sqnr_predict(const LoopParams& lp, double osr, double amp_dbfs) {
    lp.validate();
    if (!(osr >= 8.0)) throw std::invalid_argument("sqnr_predict: need osr >= 8");

    // fs normalized to 1; quantizer step 2 (+/-1 output), one-sided PSD
    const double s_e = 4.0 / 12.0 / 0.5;
    const double f_band = 0.5 / osr;

    const auto ntf_mag2 = [&](double f) {
        const std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * f);
        const StfNtf t = (lp.n == 1.0) ? stf_ntf_eq3(lp, z) : stf_ntf_eq4(lp, z);
        return std::norm(t.ntf);
    };

    // Simpson quadrature of the in-band shaped noise power
    const int n_iv = 4096;
    const double h = f_band / n_iv;
    double acc = ntf_mag2(1e-12) + ntf_mag2(f_band);
    for (int i = 1; i < n_iv; ++i) acc += ntf_mag2(i * h) * (i % 2 ? 4.0 : 2.0);
    const double p_noise = acc * h / 3.0 * s_e;

    const double f_sig = 0.8 * f_band;
    const std::complex<double> z_sig = std::polar(1.0, 2.0 * std::numbers::pi * f_sig);
    const StfNtf t = (lp.n == 1.0) ? stf_ntf_eq3(lp, z_sig) : stf_ntf_eq4(lp, z_sig);
    const double amp = std::pow(10.0, amp_dbfs / 20.0);  // full scale = feedback reference
    const double p_sig = std::norm(t.stf) * amp * amp / 2.0;
    return 10.0 * std::log10(p_sig / p_noise);
}

void write_response_csv(const std::vector<ResponsePoint>& pts, const std::string& path,
                        const std::string& header_comment) {
    std::ostringstream out;
    out.precision(10);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "freq_hz,mag_db,phase_deg\n";
    for (const auto& p : pts) {
        out << p.freq_hz << ',' << p.mag_db << ',' << p.phase_deg << '\n';
    }
    atomic_write(path, out.str());
}

}  // namespace afesim
