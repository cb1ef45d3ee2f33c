#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afesim/linmodel.hpp"
#include "afesim/noisemodel.hpp"
#include "afesim/sigproc.hpp"

namespace afesim {

/// Full loop configuration. The R-C product must satisfy the UGF-matching
/// constraint 1/(RC) = G*fs (checked by validate()).
struct ModulatorConfig {
    double fs_hz = 1e6;
    int substeps = 16;  // CT sub-steps per T_s; >= 4 and even
    double G = 0.5;
    double R = 100e3;
    double C = 2e-12 * 10.0;  // 20 pF
    double A_i = 1000.0;
    double A_f = 1000.0;
    double vfb_mv = 100.0;  // differential feedback amplitude
    bool chopper_on = false;
    double f_ch_hz = 1e6;
    std::uint64_t seed = 0;
    std::int64_t duration_samples = 1 << 18;
    double clip_factor = 10.0;       // overload bound, in units of vfb
    bool record_waveforms = false;   // keep w1/w2 traces in the ModTrace

    double vfb_v() const { return vfb_mv * 1e-3; }
    double ts() const { return 1.0 / fs_hz; }
    IntegratorParams integrator() const { return {A_i, A_f, R, C}; }
    void validate() const;
};

/// +/-1 modulator output at fs.
struct BitStream {
    double rate_hz = 0.0;
    std::vector<std::int8_t> bits;

    /// As a SampleStream for spectral analysis.
    SampleStream to_stream() const;
    double ones_density() const;
    double mean() const;
};

struct ModTrace {
    SampleStream w1;  // first-integrator output at substep rate (optional)
    SampleStream w2;  // second-integrator output at fs (optional)
    BitStream q;
    std::vector<std::int64_t> overload_events;
};

/// One-state exact-ZOH realization of the DDA R-C integrator.
struct CtState {
    double x = 0.0;
};

/// Advances the state by dt with piecewise-constant inputs and returns the
/// stage output:
///   out = A_i/(A_f+1) * v_i + x
///   x'  = x*e^{-dt/tau} + (1-e^{-dt/tau})*(A_f*A_i/(A_f+1)*v_i - A_f*v_f)
/// with tau = (A_f+1)RC. Exact for ZOH inputs.
double ct_stage_step(CtState& state, double v_i, double v_f, double dt,
                     const IntegratorParams& p);

/// Delaying switched-capacitor integrator update: w2 + G*(u - v_fb).
double dt_stage_step(double w2_prev, double u_sampled, double v_fb, double G);

struct QuantDac {
    std::int8_t bit;  // +1 if w2 >= 0 (tie at 0 -> +1)
    double v_fb;      // bit * vfb_amp, held for the full next T_s (NRZ)
};
QuantDac quantize_and_dac(double w2, double vfb_amp);

/// Device-noise injection settings for simulate(). When enabled, a seeded
/// input-referred device-noise realization (chopped per the modulator
/// config) is added to the signal at the loop input, held over each T_s.
struct NoiseInjection {
    bool enabled = false;
    NoiseParams params;
};

/// Sample-accurate simulation of the hybrid CT/DT second-order loop.
/// The input stream must be at fs (zero-order-held across substeps) or at
/// fs*substeps. The DT stage models an SC sampler by averaging the
/// first-stage output over the second half of each T_s (track phase).
/// Deterministic for a fixed config and seed.
ModTrace simulate(const ModulatorConfig& cfg, const SampleStream& input,
                  const NoiseInjection& noise = {});

/// Bitstream file format: header `rate_hz=<value>`, then ASCII 0/1
/// characters (0 encodes -1), newline every 64 bits.
void write_bitstream(const BitStream& q, const std::string& path);
BitStream read_bitstream(const std::string& path);

}  // namespace afesim
