#pragma once

#include <vector>

#include "fnlc/harness/dataset.hpp"
#include "fnlc/io/config_file.hpp"
#include "fnlc/model/transformer.hpp"

namespace fnlc {

struct TrainResult {
    std::vector<double> train_loss;  // per epoch, minibatch average
    std::vector<double> val_loss;
    int best_epoch = -1;       // 1-based epoch of the restored parameters
    double best_val = 0.0;
    double val_q_db = 0.0;     // X-pol Q over validation blocks after restore
    long steps = 0;
    int epochs_run = 0;
};

// Adam with inverse-sqrt warmup, early stopping on validation MSE, best
// checkpoint restored on exit. The validation slice is the trailing
// val_fraction of blocks; minibatches shuffle only the training slice.
TrainResult train_model(Model<double>& m, const Dataset& ds, const TrainConfig& tc);

}  // namespace fnlc
