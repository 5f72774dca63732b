#pragma once

#include <cmath>
#include <cstdint>

#include "fnlc/common.hpp"

namespace fnlc {

// PCG64: the pcg_setseq_128_xsl_rr_64 member of the PCG family.
// 128-bit LCG state with stream selection, 64-bit XSL-RR output.
// Implemented here so every stochastic draw in the toolkit is pinned to this
// file rather than to standard-library internals.
class Pcg64 {
  public:
    using u128 = unsigned __int128;

    explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = 0;
        inc_ = (static_cast<u128>(stream) << 1) | 1u;
        step();
        state_ += static_cast<u128>(seed);
        step();
    }

    std::uint64_t next() {
        step();
        return output(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal pair via Box-Muller. u1 is kept away from zero so the
    // log stays finite.
    void gaussian_pair(double& g0, double& g1) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        g0 = r * std::cos(2.0 * kPi * u2);
        g1 = r * std::sin(2.0 * kPi * u2);
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double g0, g1;
        gaussian_pair(g0, g1);
        spare_ = g1;
        have_spare_ = true;
        return g0;
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    static constexpr u128 mult_ =
        (static_cast<u128>(2549297995355413924ull) << 64) | 4865540595714422341ull;

    void step() { state_ = state_ * mult_ + inc_; }

    static std::uint64_t output(u128 st) {
        const std::uint64_t xored =
            static_cast<std::uint64_t>(st >> 64) ^ static_cast<std::uint64_t>(st);
        const unsigned rot = static_cast<unsigned>(st >> 122);
        return (xored >> rot) | (xored << ((-rot) & 63u));
    }

    u128 state_ = 0;
    u128 inc_ = 1;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Deterministic sub-stream derivation so one run seed fans out into
// independent generators (data, noise, weights, ...).
inline Pcg64 derive_rng(std::uint64_t seed, std::uint64_t purpose) {
    return Pcg64(seed, purpose);
}

}  // namespace fnlc
