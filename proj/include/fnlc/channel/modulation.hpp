#pragma once

#include <cstdint>
#include <vector>

#include "fnlc/channel/link.hpp"
#include "fnlc/common.hpp"
#include "fnlc/pcg64.hpp"

namespace fnlc {

// Square Gray-coded QAM with unit average symbol energy.
struct Constellation {
    Modulation modulation;
    int bits_per_axis;                // 2 for 16QAM, 3 for 64QAM
    double level_scale;               // 1/sqrt(10) or 1/sqrt(42)
    std::vector<double> levels;       // amplitude levels, ascending
    std::vector<int> gray_of_index;   // level index -> gray code

    int order() const { return 1 << (2 * bits_per_axis); }
    int bits_per_symbol() const { return 2 * bits_per_axis; }

    cplx point(int i_idx, int q_idx) const {
        return {levels[i_idx], levels[q_idx]};
    }

    // Nearest-level index for one axis (uniform grid slicer).
    int slice(double v) const;

    // Hamming distance between the Gray labels of two level indices.
    int bit_diff(int idx_a, int idx_b) const {
        int x = gray_of_index[idx_a] ^ gray_of_index[idx_b];
        int n = 0;
        while (x) { n += x & 1; x >>= 1; }
        return n;
    }
};

Constellation make_constellation(Modulation m);

struct DualPolSymbols {
    CVec x, y;
};

// Uniform i.i.d. symbols on both polarizations. Per symbol the draw order is
// x-axis I, x-axis Q, y-axis I, y-axis Q, so sequences are reproducible from
// the seed alone.
DualPolSymbols generate_symbols(int count, Modulation m, std::uint64_t seed);

}  // namespace fnlc
