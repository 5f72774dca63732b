#pragma once

#include <cmath>
#include <limits>

#include "fnlc/common.hpp"

namespace fnlc {

// Dense primitives used by the equalizer. Row convention: one sequence
// position per row, features across columns. Weights are stored
// input-by-output so forward is x * W + b.

template <typename S>
Mat<S> linear_fwd(const Mat<S>& x, const Mat<S>& w, const Mat<S>& b) {
    Mat<S> y = x * w;
    y.rowwise() += b.col(0).transpose();
    return y;
}

// dw and db accumulate so one call per minibatch element sums naturally.
template <typename S>
void linear_bwd(const Mat<S>& x, const Mat<S>& w, const Mat<S>& dy, Mat<S>& dx,
                Mat<S>& dw, Mat<S>& db) {
    dx.noalias() = dy * w.transpose();
    dw.noalias() += x.transpose() * dy;
    db.col(0) += dy.colwise().sum().transpose();
}

template <typename S>
Mat<S> leaky_relu_fwd(const Mat<S>& x, S slope) {
    return x.unaryExpr([slope](S v) { return v > S(0) ? v : slope * v; });
}

template <typename S>
Mat<S> leaky_relu_bwd(const Mat<S>& x, const Mat<S>& dy, S slope) {
    return dy.cwiseProduct(
        x.unaryExpr([slope](S v) { return v > S(0) ? S(1) : slope; }));
}

template <typename S>
Mat<S> relu_fwd(const Mat<S>& x) {
    return x.cwiseMax(S(0));
}

template <typename S>
Mat<S> relu_bwd(const Mat<S>& x, const Mat<S>& dy) {
    return dy.cwiseProduct(
        x.unaryExpr([](S v) { return v > S(0) ? S(1) : S(0); }));
}

// Row-wise softmax tolerating -inf entries; an all-masked row yields zeros.
template <typename S>
Mat<S> softmax_rows(const Mat<S>& s) {
    Mat<S> a(s.rows(), s.cols());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const S m = s.row(r).maxCoeff();
        if (!(m > -std::numeric_limits<S>::infinity())) {
            a.row(r).setZero();
            continue;
        }
        Vec<S> e = (s.row(r).array() - m).exp().matrix().transpose();
        const S z = e.sum();
        a.row(r) = (e / z).transpose();
    }
    return a;
}

// dS from dA given A = softmax(S): dS = A .* (dA - rowsum(dA .* A)).
template <typename S>
Mat<S> softmax_rows_bwd(const Mat<S>& a, const Mat<S>& da) {
    Mat<S> ds(a.rows(), a.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const S dot = a.row(r).dot(da.row(r));
        ds.row(r) =
            a.row(r).cwiseProduct((da.row(r).array() - dot).matrix());
    }
    return ds;
}

template <typename S>
struct LayerNormCache {
    Mat<S> xhat;
    Vec<S> inv_sigma;
};

template <typename S>
Mat<S> layer_norm_fwd(const Mat<S>& x, const Mat<S>& gain, const Mat<S>& bias,
                      LayerNormCache<S>& cache, S eps = S(1e-6)) {
    const Eigen::Index n = x.rows(), d = x.cols();
    cache.xhat.resize(n, d);
    cache.inv_sigma.resize(n);
    Mat<S> y(n, d);
    for (Eigen::Index r = 0; r < n; ++r) {
        const S mu = x.row(r).mean();
        const S var = (x.row(r).array() - mu).square().mean();
        const S is = S(1) / std::sqrt(var + eps);
        cache.inv_sigma[r] = is;
        cache.xhat.row(r) = ((x.row(r).array() - mu) * is).matrix();
        y.row(r) = cache.xhat.row(r).cwiseProduct(gain.col(0).transpose()) +
                   bias.col(0).transpose();
    }
    return y;
}

template <typename S>
Mat<S> layer_norm_bwd(const Mat<S>& dy, const Mat<S>& gain,
                      const LayerNormCache<S>& cache, Mat<S>& dgain, Mat<S>& dbias) {
    const Eigen::Index n = dy.rows(), d = dy.cols();
    Mat<S> dx(n, d);
    for (Eigen::Index r = 0; r < n; ++r) {
        const Vec<S> dxhat =
            dy.row(r).cwiseProduct(gain.col(0).transpose()).transpose();
        const S m1 = dxhat.mean();
        const S m2 = dxhat.dot(cache.xhat.row(r).transpose()) / S(d);
        dx.row(r) =
            (cache.inv_sigma[r] *
             (dxhat.array() - m1 - cache.xhat.row(r).transpose().array() * m2))
                .matrix()
                .transpose();
        dgain.col(0) += dy.row(r).cwiseProduct(cache.xhat.row(r)).transpose();
        dbias.col(0) += dy.row(r).transpose();
    }
    return dx;
}

// Sliding im2col for a 1-D valid convolution over rows: row r of the result
// concatenates rows r..r+k-1 of x.
template <typename S>
Mat<S> im2col(const Mat<S>& x, int k) {
    const Eigen::Index n = x.rows() - k + 1;
    if (n < 1) throw ShapeError("im2col: input shorter than kernel");
    const Eigen::Index d = x.cols();
    Mat<S> out(n, k * d);
    for (Eigen::Index r = 0; r < n; ++r)
        for (int j = 0; j < k; ++j) out.row(r).segment(j * d, d) = x.row(r + j);
    return out;
}

template <typename S>
void im2col_bwd(const Mat<S>& dpatches, int k, Mat<S>& dx) {
    const Eigen::Index n = dpatches.rows();
    const Eigen::Index d = dx.cols();
    for (Eigen::Index r = 0; r < n; ++r)
        for (int j = 0; j < k; ++j)
            dx.row(r + j) += dpatches.row(r).segment(j * d, d);
}

// Fixed sinusoidal positional encoding, one row per position.
template <typename S>
Mat<S> positional_encoding(Eigen::Index n, Eigen::Index d) {
    Mat<S> pe(n, d);
    for (Eigen::Index pos = 0; pos < n; ++pos) {
        for (Eigen::Index i = 0; i < d; i += 2) {
            const double div = std::pow(10000.0, static_cast<double>(i) /
                                                     static_cast<double>(d));
            pe(pos, i) = static_cast<S>(std::sin(pos / div));
            if (i + 1 < d) pe(pos, i + 1) = static_cast<S>(std::cos(pos / div));
        }
    }
    return pe;
}

}  // namespace fnlc
