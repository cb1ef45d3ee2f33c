#include "afesim/decim.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace afesim {

void DecimConfig::validate() const {
    if (osr < 2) throw std::invalid_argument("DecimConfig: osr must be >= 2");
    if (stages < 1) throw std::invalid_argument("DecimConfig: stages must be >= 1");
    if (stages > 6) throw std::invalid_argument("DecimConfig: stages > 6 would overflow 64-bit growth");
}

SampleStream cic_decimate(const BitStream& q, const DecimConfig& cfg) {
    cfg.validate();
    const std::int64_t n = static_cast<std::int64_t>(q.bits.size());
    if (n < static_cast<std::int64_t>(cfg.osr) * cfg.stages) {
        throw std::invalid_argument("cic_decimate: input shorter than osr*stages");
    }

    std::vector<std::int64_t> integ(static_cast<std::size_t>(cfg.stages), 0);
    std::vector<std::int64_t> comb_prev(static_cast<std::size_t>(cfg.stages), 0);
    SampleStream out;
    out.rate_hz = q.rate_hz / cfg.osr;
    out.label = "decimated";
    const std::int64_t n_out = n / cfg.osr;
    out.samples.resize(n_out);

    const double scale = 1.0 / std::pow(static_cast<double>(cfg.osr), cfg.stages);
    std::int64_t oi = 0;
    for (std::int64_t i = 0; i < n_out * cfg.osr; ++i) {
        std::int64_t v = q.bits[static_cast<std::size_t>(i)];
        for (auto& acc : integ) {
            acc += v;  // two's-complement wraparound is part of the CIC arithmetic
            v = acc;
        }
        if ((i + 1) % cfg.osr == 0) {
            for (auto& prev : comb_prev) {
                const std::int64_t d = v - prev;
                prev = v;
                v = d;
            }
            out.samples[oi++] = static_cast<double>(v) * scale;
        }
    }
    return out;
}

double cic_response_mag(const DecimConfig& cfg, double f_hz, double fs_hz) {
    const double x = std::numbers::pi * f_hz / fs_hz;
    if (f_hz == 0.0) return 1.0;
    const double num = std::sin(x * cfg.osr);
    const double den = cfg.osr * std::sin(x);
    return std::pow(std::abs(num / den), cfg.stages);
}

}  // namespace afesim
