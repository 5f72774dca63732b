#pragma once

#include <string>

#include "fnlc/common.hpp"

namespace fnlc {

enum class Embedding { Cnn, Mlp1, Mlp2 };

const char* to_string(Embedding e);
Embedding embedding_from_string(const std::string& s);

// Equalizer hyper-parameters. tap is the one-sided symbol context t; the
// attention span l and sequence length n follow from it and the embedding.
struct ModelConfig {
    Embedding embedding = Embedding::Cnn;
    int tap = 16;
    int d_model = 16;
    int key_total = 16;  // summed across heads; per-head width is d_k()
    int heads = 4;
    int layers = 2;
    int d_ff = 32;
    int window = 7;  // rows fed to the output MLP, centered per target
    int block = 128;
    int conv_k = 9;
    int embed_hidden = 0;  // two-layer embedding hidden width; 0 means d_model
    double mask_rho = 0.0;  // 0 disables masking
    double train_power_dbm = 2.0;

    int d_k() const { return key_total / heads; }
    int d_v() const { return d_k(); }
    int ell() const {
        return embedding == Embedding::Cnn ? 2 * tap - conv_k + 1 : 2 * tap;
    }
    int context() const { return ell() + block; }
    int input_rows() const { return 2 * tap + block; }
    int half_window() const { return (window - 1) / 2; }
    int hidden() const { return embed_hidden > 0 ? embed_hidden : d_model; }
    bool masked() const { return mask_rho > 0.0; }

    void validate() const;
};

}  // namespace fnlc
