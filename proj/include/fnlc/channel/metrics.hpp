#pragma once

#include "fnlc/channel/dsp.hpp"

namespace fnlc {

// Q floor reported when the BER estimate is 0.5 (nothing detectable).
inline constexpr double kQSentinelDb = -100.0;

struct QResult {
    double q_db = 0.0;
    double ber = 0.0;
    long bit_errors = 0;
    long bits = 0;
    double evm = 0.0;      // rms error / rms reference, linear
    double evm_db = 0.0;   // 20*log10(evm)
    bool evm_fallback = false;
};

double erfc_inv(double y);
double q_from_ber_db(double ber);

// Error-vector magnitude of rx against tx over both polarizations.
double frame_evm(const SymbolFrame& f);

// Gray-bit BER against the hard-decided reference, mapped to a Q factor.
// Zero counted errors falls back to the EVM-based Gaussian estimate so
// near-noiseless frames report a finite, meaningful figure.
QResult q_factor(const SymbolFrame& f);

// Same metric over a single polarization given I/Q column pairs.
QResult q_factor_pair(const MatX& rx2, const MatX& tx2, Modulation m);

}  // namespace fnlc
