#pragma once

#include <string>
#include <vector>

#include "fnlc/harness/dataset.hpp"
#include "fnlc/model/transformer.hpp"

namespace fnlc {

// Mean absolute attention scores |QK^T|/sqrt(d_k) per (layer, head), averaged
// over every block of the frame. Masked coordinates stay at the zero floor.
struct HeatMaps {
    int layers = 0;
    int heads = 0;
    std::vector<MatX> maps;  // indexed layer * heads + head

    const MatX& at(int layer, int head) const {
        return maps[static_cast<size_t>(layer) * heads + head];
    }
};

HeatMaps export_heatmaps(Model<double>& m, const SymbolFrame& f);

// Fraction of total map mass within |row - col| <= halfwidth.
double band_fraction(const MatX& map, int halfwidth);

void heatmap_to_csv(const MatX& map, const std::string& path);

// Max-normalized 8-bit PGM.
void heatmap_to_pgm(const MatX& map, const std::string& path);

}  // namespace fnlc
