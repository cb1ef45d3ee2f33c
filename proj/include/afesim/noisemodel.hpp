#pragma once

#include <cstdint>
#include <string>

#include "afesim/linmodel.hpp"
#include "afesim/sigproc.hpp"

namespace afesim {

inline constexpr double k_boltzmann = 1.380649e-23;  // J/K

/// Device-noise description of the DDA R-C integrator. S_dda_th is the DDA
/// thermal PSD referred to its non-inverting input (one-sided, V^2/Hz);
/// fc_hz is the flicker corner where the 1/f spectrum crosses it.
struct NoiseParams {
    double T = 300.0;          // kelvin
    double S_dda_th = 1e-16;   // V^2/Hz
    double fc_hz = 10e3;       // flicker corner
    double f_ch_hz = 1e6;      // chopper frequency
    IntegratorParams amp;      // A_i, A_f, R, C

    double resistor_psd() const { return 8.0 * k_boltzmann * T * amp.R; }  // two resistors, differential
    void validate() const;
};

/// Device-noise PSD at the integrator output. The chopped form keeps only
/// the first chopper harmonic; |f - f_ch| is clamped to clamp_hz near the
/// flicker singularity.
double out_psd(const NoiseParams& p, double f_hz, bool chopped, double clamp_hz = 0.0);

/// Same noise referred to the DDA non-inverting input port.
double in_psd(const NoiseParams& p, double f_hz, bool chopped, double clamp_hz = 0.0);

/// i.i.d. zero-mean Gaussian samples with variance psd*rate/2 (one-sided).
SampleStream synth_thermal(double psd, double rate_hz, Eigen::Index n, std::uint64_t seed);

/// Gaussian noise with one-sided PSD S_th*fc/f over [rate/n, rate/2],
/// synthesized by frequency-domain shaping (no DC power). n must be a
/// power of two.
SampleStream synth_flicker(double S_th, double fc_hz, double rate_hz, Eigen::Index n,
                           std::uint64_t seed);

enum class ChopPhase { zero, half };

/// Multiplies samples by a +/-1 square wave at f_ch (50% duty). The sample
/// rate must be an even integer multiple of f_ch.
SampleStream chop_modulate(const SampleStream& x, double f_ch_hz, ChopPhase phase = ChopPhase::zero);

/// Time-domain noise source streams at the given rate; components sum to
/// input_referred.
struct NoiseRealization {
    SampleStream input_referred;
    SampleStream resistor_thermal;
    SampleStream dda_thermal;
    SampleStream dda_flicker;
};
NoiseRealization build_noise_realization(const NoiseParams& p, double rate_hz, Eigen::Index n,
                                         std::uint64_t seed);

/// Gaussian noise frequency-shaped to the analytic output-referred device
/// PSD (chopped or unchopped); used to inject device noise into the
/// sampled loop. n must be a power of two.
SampleStream synth_device_output_noise(const NoiseParams& p, bool chopped, double rate_hz,
                                       Eigen::Index n, std::uint64_t seed);

/// Gaussian noise shaped to the analytic input-referred device PSD; used
/// by the loop simulation so device noise and signal share the same
/// forward path. n must be a power of two.
SampleStream synth_device_input_noise(const NoiseParams& p, bool chopped, double rate_hz,
                                      Eigen::Index n, std::uint64_t seed);

/// Solves for S_dda_th such that the integrated in-band input-referred
/// noise over [f_lo, f_hi] equals the budget implied by target_snr_db at
/// a sine amplitude amp_v. fc_hz is held at its configured value.
double calibrate_dda_thermal(const NoiseParams& p, bool chopped, double target_snr_db,
                             double amp_v, double f_lo_hz, double f_hi_hz);

/// Integrated in-band input-referred noise (analytic), trapezoid on a log
/// grid.
double integrate_in_psd(const NoiseParams& p, bool chopped, double f_lo_hz, double f_hi_hz);

/// Analytic PSD sweep CSV: `freq_hz,out_psd,in_psd`.
void write_noise_psd_csv(const NoiseParams& p, bool chopped, double f_lo_hz, double f_hi_hz,
                         int points, const std::string& path,
                         const std::string& header_comment = {});

}  // namespace afesim
