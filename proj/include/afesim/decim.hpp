#pragma once

#include "afesim/loopsim.hpp"
#include "afesim/sigproc.hpp"

namespace afesim {

/// sinc^N (CIC) decimator configuration. Three stages cover a second-order
/// loop (modulator order + 1).
struct DecimConfig {
    int osr = 500;
    int stages = 3;
    void validate() const;
};

/// Cascaded integrators at fs, downsample by osr, cascaded combs at
/// fs/osr. Output is scaled by osr^stages so a constant +/-1 input maps to
/// +/-1.0. Integer accumulators wrap; 64-bit width covers the
/// stages*log2(osr) growth for any practical osr.
SampleStream cic_decimate(const BitStream& q, const DecimConfig& cfg);

/// |sin(pi f osr/fs) / (osr sin(pi f/fs))|^stages, the analytic magnitude
/// response of the scaled CIC.
double cic_response_mag(const DecimConfig& cfg, double f_hz, double fs_hz);

}  // namespace afesim
