#pragma once

#include <vector>

#include "fnlc/channel/dsp.hpp"

namespace fnlc {

// Tiled training view over a received frame. Target block i covers symbols
// [starts[i], starts[i] + block); its input slab extends tap symbols to both
// sides. Targets are the X-polarization distortions rx - tx.
struct Dataset {
    MatX rx, tx;
    int tap = 0;
    int block = 0;
    Modulation modulation = Modulation::Qam16;
    double launch_dbm = 0.0;
    std::vector<long> starts;

    long count() const { return static_cast<long>(starts.size()); }

    MatX input_block(long i) const {
        return rx.middleRows(starts[static_cast<size_t>(i)] - tap, block + 2 * tap);
    }

    MatX targets(long i) const {
        const long s = starts[static_cast<size_t>(i)];
        return rx.block(s, 0, block, 2) - tx.block(s, 0, block, 2);
    }
};

Dataset build_dataset(const SymbolFrame& frame, int tap, int block);

// Same tiling over the frame and its polarization swap, interleaved so block
// 2i is the X view of position i and block 2i+1 the Y view. One model then
// learns both orientations; the tail split still holds out whole positions.
Dataset build_dataset_dual(const SymbolFrame& frame, int tap, int block);

}  // namespace fnlc
