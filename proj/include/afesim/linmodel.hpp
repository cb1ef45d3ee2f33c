#pragma once

#include <complex>
#include <string>
#include <vector>

namespace afesim {

/// DDA R-C integrator parameters. A_i and A_f are the DC gains from the
/// non-inverting and inverting input ports; the skew ratio n = A_i/A_f.
struct IntegratorParams {
    double A_i = 1000.0;
    double A_f = 1000.0;
    double R = 100e3;
    double C = 20e-12;

    double skew() const { return A_i / A_f; }
    double tau() const { return (A_f + 1.0) * R * C; }  // closed-loop pole time constant
    void validate() const;
};

struct PortResponse {
    std::complex<double> H_i;  // from the non-inverting port
    std::complex<double> H_f;  // from the inverting (feedback) port
};

/// H_i(s) = A_i(1+sRC)/(1+(A_f+1)sRC), H_f(s) = -A_f/(1+(A_f+1)sRC)
/// at s = j*2*pi*f. With A_i = A_f the two ports share the pole at
/// 1/((A+1)RC) rad/s and H_i keeps the zero at 1/RC rad/s.
PortResponse dda_integrator_response(const IntegratorParams& p, double f_hz);

/// Loop linearization factors: G integrator pre-gain, N feedback
/// attenuation (= signal gain), n transconductance-skew gain.
struct LoopParams {
    double G = 0.5;
    double N = 1.0;
    double n = 1.0;
    void validate() const;
};

struct StfNtf {
    std::complex<double> stf;
    std::complex<double> ntf;
};

/// Exact two-integrator loop transfer functions (requires n = 1):
///   STF = G^2 N z^-2 / D,  NTF = N (1 - z^-1)^2 / D,
///   D = (G^2 - G + N) z^-2 + (G - 2N) z^-1 + N.
StfNtf stf_ntf_eq3(const LoopParams& lp, std::complex<double> z);

/// Low-frequency approximation (z near 1): STF = nN z^-2,
/// NTF = (1 - z^-1)^2 nN / G^2.
StfNtf stf_ntf_eq4(const LoopParams& lp, std::complex<double> z);

/// Linearized white-quantization-noise SNR prediction in dB. The quantizer
/// error is modeled as uniform white with step 2 (one-sided PSD
/// S_E = 4/12/(fs/2)); amplitude is in dB relative to the feedback
/// reference.
double sqnr_predict(const LoopParams& lp, double osr, double amp_dbfs);

/// Frequency-response table export: `freq_hz,mag_db,phase_deg` rows for
/// one transfer function.
struct ResponsePoint {
    double freq_hz;
    double mag_db;
    double phase_deg;
};
void write_response_csv(const std::vector<ResponsePoint>& pts, const std::string& path,
                        const std::string& header_comment = {});

}  // namespace afesim
