#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fnlc/harness/evaluate.hpp"
#include "fnlc/io/config_file.hpp"

namespace fnlc {

struct GridRow {
    ModelConfig model;
    EvalResult eval;
    bool failed = false;
    std::string error;
};

std::vector<ModelConfig> expand_grid(const GridSpec& spec, const ModelConfig& base);

// Trains and evaluates every grid cell on shared train/eval frames. Cells run
// on up to `workers` threads; rows come back in expansion order and cell
// failures are recorded, not fatal.
std::vector<GridRow> grid_search(const RunConfig& rc, int workers,
                                 std::ostream& log);

// results.csv: config_id, mask, rho, tap, d_model, d_k, heads, layers, d_ff,
// window, block, rmps_total, launch_power_dbm, q_db.
void write_results_csv(const std::string& path, const std::vector<GridRow>& rows);

// Upper-left Pareto front of (rmps_total, q_db), rmps ascending.
std::vector<GridRow> pareto_envelope(const std::vector<GridRow>& rows);

// envelope.csv: rmps_total, q_db, config_id.
void write_envelope_csv(const std::string& path, const std::vector<GridRow>& rows);

}  // namespace fnlc
