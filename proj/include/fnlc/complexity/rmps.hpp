#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fnlc/model/config.hpp"

namespace fnlc {

// Real multiplications per equalized symbol, split by component. Counting
// rules: GEMMs at m*n*k; scaling plus softmax modeled at 3 per attended
// coordinate; layer norm at 3 per element; additions, activations and the
// positional encoding are free. The attention component is the bare
// score/softmax block; the attention-times-value aggregation is charged to
// the projection component alongside QKV and the output projection.
struct ComplexityReport {
    double embedding = 0.0;
    double projection = 0.0;
    double attention = 0.0;
    double ffn = 0.0;
    double layer_norm = 0.0;
    double output_mlp = 0.0;
    double total = 0.0;
    std::uint64_t block_mults = 0;  // exact integer total for one block
    std::int64_t attended_coords = 0;  // per layer and head: n^2 dense, mask count sparse
};

// Closed-form per-symbol cost of one dense attention block (scores, scale,
// softmax) for block size b and span l.
double attention_rmps_dense(int heads, int block, int l, int dk);

ComplexityReport complexity_report(const ModelConfig& cfg);

// Per-symbol dense attention cost as a function of block size, for the
// block-size trade-off curve. Minimum falls at b = l.
std::vector<std::pair<int, double>> attention_rmps_curve(
    int heads, int l, int dk, const std::vector<int>& blocks);

}  // namespace fnlc
