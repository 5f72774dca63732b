#pragma once

#include "fnlc/channel/link.hpp"
#include "fnlc/channel/modulation.hpp"
#include "fnlc/channel/waveform.hpp"
#include "fnlc/common.hpp"

namespace fnlc {

// In-place FFT pair (unitary up to the usual 1/N on the inverse).
CArr fft(const CArr& x);
CArr ifft(const CArr& X);

// DFT bin frequencies in THz, negative half wrapped to the upper bins.
Arr fft_freq_thz(int n, double fs_thz);

// Square-root raised-cosine amplitude spectrum sampled on the DFT grid,
// peak-normalized. A matched pair cascades to a Nyquist (ISI-free) response
// under circular convolution.
Arr rrc_spectrum(int n, double fs_thz, double baud_thz, double rolloff);

CArr upsample_zero_stuff(const CVec& symbols, int os);
CVec downsample(const CArr& x, int os, int phase = 0);

// Multiplies a real spectral mask onto the signal in the frequency domain.
CArr apply_spectrum(const CArr& x, const Arr& mag);

// Chromatic dispersion of km kilometres of fiber with the given beta2.
// Positive km applies the forward-propagation phase; negative km undoes it.
void apply_cd(CArr& x, double fs_thz, double beta2_ps2_km, double km);
void apply_cd(DualPolWave& w, double beta2_ps2_km, double km);

// Scales both polarizations so mean total power equals the target.
void scale_to_power(DualPolWave& w, double power_w);

// Shapes symbols onto the sample grid: zero-stuff, RRC filter, launch-power
// scaling, then electronic CD pre-compensation of pre_cd_fraction of the link.
DualPolWave shape_transmit(const DualPolSymbols& syms, const TxConfig& tx,
                           const LinkConfig& link);

// Matched RRC filter followed by symbol-rate decimation at phase 0.
DualPolSymbols matched_filter_downsample(const DualPolWave& w, const TxConfig& tx);

}  // namespace fnlc
