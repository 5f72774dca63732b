#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fnlc/common.hpp"

namespace fnlc {

// Attention mask as an additive score bias (0 kept, -inf suppressed) plus
// compressed row index lists so sparse attention can skip suppressed
// coordinates outright.
struct AttentionMask {
    MatX bias;
    std::vector<std::vector<int>> allowed;
    std::int64_t unmasked = 0;

    Eigen::Index size() const { return bias.rows(); }
    std::int64_t total() const {
        return static_cast<std::int64_t>(size()) * size();
    }
    double unmasked_ratio() const {
        return static_cast<double>(unmasked) / static_cast<double>(total());
    }
};

// Single-symbol selection rule on lag pair (m, n), m the query offset and n
// the probed offset, both in [-l/2, l/2]. The m = 0 column of self-terms is
// excluded; the reach in n shrinks hyperbolically with |m|.
bool pair_selected(int l, double rho, int m, int n);

// (l+1)^2 mask for one target symbol.
AttentionMask individual_mask(int l, double rho);

// (l+b)^2 mask for a block of b targets: element-wise union of the b
// diagonally shifted single-target masks.
AttentionMask block_mask(int l, double rho, int b);

// 8-bit PGM, white = kept coordinate.
void mask_to_pgm(const AttentionMask& m, const std::string& path);

// One line per row: space-separated kept column indices.
void mask_to_rowlist(const AttentionMask& m, const std::string& path);

}  // namespace fnlc
