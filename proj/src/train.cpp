#include "fnlc/harness/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fnlc/channel/metrics.hpp"

namespace fnlc {

namespace {

double block_loss(const MatX& out, const MatX& tgt) {
    return (out - tgt).squaredNorm() / static_cast<double>(out.size());
}

}  // namespace

TrainResult train_model(Model<double>& m, const Dataset& ds, const TrainConfig& tc) {
    tc.validate();
    if (ds.tap != m.cfg.tap || ds.block != m.cfg.block)
        throw ShapeError("dataset framing does not match the model config");
    const long total = ds.count();
    if (total < 2) throw ShapeError("dataset too small to split");
    const long nval = std::max<long>(1, std::lround(tc.val_fraction * total));
    const long ntrain = total - nval;
    if (ntrain < 1) throw ShapeError("no training blocks left after split");

    const int b = m.cfg.block;
    const long blocks_per_step =
        std::max<long>(1, (tc.minibatch_symbols + b - 1) / b);

    std::vector<long> order(static_cast<size_t>(ntrain));
    for (long i = 0; i < ntrain; ++i) order[static_cast<size_t>(i)] = i;

    Pcg64 shuffle_rng = derive_rng(tc.seed_train, 0x5bff);
    auto params = m.parameters();

    TrainResult res;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<MatX> best_w(params.size());
    int since_best = 0;
    long step = 0;
    BlockCache<double> cache;

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        // Fisher-Yates over the training slice.
        for (long i = ntrain - 1; i > 0; --i) {
            const long j = static_cast<long>(
                shuffle_rng.bounded(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
        }

        double epoch_loss = 0.0;
        long nbatches = 0;
        for (long at = 0; at < ntrain; at += blocks_per_step) {
            const long g = std::min(blocks_per_step, ntrain - at);
            double batch_loss = 0.0;
            for (long u = 0; u < g; ++u) {
                const long blk = order[static_cast<size_t>(at + u)];
                const MatX in = ds.input_block(blk);
                const MatX tgt = ds.targets(blk);
                const MatX out = m.forward(in, cache);
                batch_loss += block_loss(out, tgt);
                MatX dout = (out - tgt) /
                            (static_cast<double>(b) * static_cast<double>(g));
                m.backward(dout, cache);
            }
            batch_loss /= static_cast<double>(g);
            if (!std::isfinite(batch_loss))
                throw DivergenceError("training loss became non-finite at epoch " +
                                      std::to_string(epoch) + ", step " +
                                      std::to_string(step + 1));
            ++step;
            const double lr =
                warmup_lr(m.cfg.d_model, step, tc.warmup_steps, tc.lr_scale);
            adam_step(params, step, lr);
            epoch_loss += batch_loss;
            ++nbatches;
        }
        res.train_loss.push_back(epoch_loss / static_cast<double>(nbatches));

        double val = 0.0;
        for (long i = ntrain; i < total; ++i) {
            const MatX out = m.forward(ds.input_block(i), cache);
            val += block_loss(out, ds.targets(i));
        }
        val /= static_cast<double>(nval);
        res.val_loss.push_back(val);
        res.epochs_run = epoch;

        if (val < best_val) {
            best_val = val;
            res.best_epoch = epoch;
            for (size_t i = 0; i < params.size(); ++i) best_w[i] = params[i]->w;
            since_best = 0;
        } else if (++since_best >= tc.patience) {
            break;
        }
    }

    for (size_t i = 0; i < params.size(); ++i) params[i]->w = best_w[i];
    res.best_val = best_val;
    res.steps = step;

    // X-polarization Q over the validation blocks, at the training power.
    {
        MatX eq(nval * b, 2), ref(nval * b, 2);
        for (long i = ntrain; i < total; ++i) {
            const MatX out = m.forward(ds.input_block(i), cache);
            const long s = ds.starts[static_cast<size_t>(i)];
            const long at = (i - ntrain) * b;
            eq.middleRows(at, b) = ds.rx.block(s, 0, b, 2) - out;
            ref.middleRows(at, b) = ds.tx.block(s, 0, b, 2);
        }
        res.val_q_db = q_factor_pair(eq, ref, ds.modulation).q_db;
    }
    return res;
}

}  // namespace fnlc
