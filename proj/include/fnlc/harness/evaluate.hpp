#pragma once

#include <string>

#include "fnlc/channel/metrics.hpp"
#include "fnlc/harness/dataset.hpp"
#include "fnlc/model/transformer.hpp"

namespace fnlc {

struct EvalResult {
    double q_db = 0.0;  // mean of the per-polarization Q figures
    double q_x_db = 0.0;
    double q_y_db = 0.0;
    double launch_dbm = 0.0;
    double rmps_total = 0.0;
    bool masked = false;
    std::string config_id;
};

// Short deterministic tag for CSV rows, built from the hyper-parameters.
std::string config_id(const ModelConfig& cfg);

// Distortion estimates for the X polarization over the tiled region of the
// frame, launch-power scaling applied: rows cover count*block symbols
// starting at symbol tap.
MatX predict_estimates(Model<double>& m, const SymbolFrame& f);

// Equalizes both polarizations (Y through the swapped view) over the tiled
// region and scores them against the reference.
EvalResult evaluate_frame(Model<double>& m, const SymbolFrame& f);

}  // namespace fnlc
