#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fnlc/channel/link.hpp"
#include "fnlc/model/config.hpp"

namespace fnlc {

struct TrainConfig {
    long train_symbols = 1L << 19;
    long eval_symbols = 1L << 18;
    int minibatch_symbols = 512;  // target symbols per optimizer step
    int max_epochs = 500;
    int patience = 100;
    long warmup_steps = 4000;
    double lr_scale = 1.0;
    double val_fraction = 0.1;
    std::uint64_t seed_train = 7;
    std::uint64_t seed_eval = 8;

    void validate() const;
};

// Cartesian grid over hyper-parameters; rho 0 stands for unmasked.
struct GridSpec {
    std::vector<std::string> embedding;
    std::vector<int> tap, d_model, key_size, heads, layers, d_ff, window;
    std::vector<double> rho;
    int budget = 0;  // 0: no cap

    bool configured() const { return !tap.empty(); }
    void validate() const;
};

struct RunConfig {
    LinkConfig link;
    TxConfig tx;
    ModelConfig model;
    TrainConfig train;
    GridSpec grid;
    std::vector<double> sweep_powers;
    std::vector<int> dbp_steps = {1, 2, 4, 10, 50};
    std::string out_dir = "out";

    void validate() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Reduced-footprint overrides for desk runs: 8 spans, 2^15/2^14 symbols,
// shorter warmup.
void apply_desk_scale(RunConfig& rc);

// Model hyper-parameters as checkpoint metadata and back.
std::string serialize_model_meta(const ModelConfig& cfg);
ModelConfig parse_model_meta(const std::string& text);

}  // namespace fnlc
