#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fnlc/common.hpp"
#include "fnlc/pcg64.hpp"

namespace fnlc {

// A named trainable tensor with its gradient and Adam moments.
template <typename S>
struct Param {
    std::string name;
    Mat<S> w, g, m, v;

    void init_shape(const std::string& n, Eigen::Index rows, Eigen::Index cols) {
        name = n;
        w.setZero(rows, cols);
        g.setZero(rows, cols);
        m.setZero(rows, cols);
        v.setZero(rows, cols);
    }

    // He-style uniform fill, bound sqrt(3 / fan_in), in storage order so the
    // draw sequence is fully determined by the registration order.
    void fill_uniform(Pcg64& rng, Eigen::Index fan_in) {
        const double bound = std::sqrt(3.0 / static_cast<double>(fan_in));
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w.data()[i] = static_cast<S>((2.0 * rng.uniform() - 1.0) * bound);
    }
};

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Inverse-sqrt warmup schedule tied to the embedding width.
inline double warmup_lr(int d_model, long step, long warmup, double scale = 1.0) {
    const double s = static_cast<double>(step);
    const double w = static_cast<double>(warmup);
    return scale / std::sqrt(static_cast<double>(d_model)) *
           std::min(1.0 / std::sqrt(s), s * std::pow(w, -1.5));
}

template <typename S>
void adam_step(std::vector<Param<S>*>& params, long step, double lr,
               const AdamConfig& cfg = {}) {
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (Param<S>* p : params) {
        p->m = static_cast<S>(cfg.beta1) * p->m + static_cast<S>(1.0 - cfg.beta1) * p->g;
        p->v = (static_cast<S>(cfg.beta2) * p->v.array() +
                static_cast<S>(1.0 - cfg.beta2) * p->g.array().square())
                   .matrix();
        const auto mhat = p->m.array() / static_cast<S>(c1);
        const auto vhat = p->v.array() / static_cast<S>(c2);
        p->w.array() -=
            static_cast<S>(lr) * mhat / (vhat.sqrt() + static_cast<S>(cfg.eps));
        p->g.setZero();
    }
}

}  // namespace fnlc
