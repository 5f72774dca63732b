#pragma once

#include <cstdint>

#include "fnlc/channel/dsp.hpp"

namespace fnlc {

// One full simulated frame: symbols, shaping, propagation, receive chain.
// The seed drives both the symbol stream and the ASE draws, so a (config,
// seed) pair pins the frame bit for bit.
SymbolFrame simulate_frame(const LinkConfig& link, TxConfig tx, long symbols,
                           std::uint64_t seed, const RxOptions& opt = {});

}  // namespace fnlc
