#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fnlc/model/config.hpp"
#include "fnlc/model/mask.hpp"
#include "fnlc/nn/adam.hpp"
#include "fnlc/nn/counter.hpp"
#include "fnlc/nn/layers.hpp"

namespace fnlc {

template <typename S>
struct EncoderLayerParams {
    Param<S> wq, bq, wk, bk, wv, bv, wo, bo;
    Param<S> ln1_g, ln1_b;
    Param<S> w1, b1, w2, b2;
    Param<S> ln2_g, ln2_b;
};

template <typename S>
struct ModelParams {
    Param<S> emb_w1, emb_b1, emb_w2, emb_b2;  // second pair: mlp2 only
    std::vector<EncoderLayerParams<S>> enc;
    Param<S> out_w1, out_b1, out_w2, out_b2, out_w3, out_b3;
};

template <typename S>
struct HeadCache {
    Mat<S> att;                          // dense attention weights
    std::vector<std::vector<S>> att_sp;  // sparse weights, aligned to mask lists
};

template <typename S>
struct LayerCache {
    Mat<S> x;
    Mat<S> q, k, v;
    std::vector<HeadCache<S>> heads;
    Mat<S> concat;
    Mat<S> res1;
    LayerNormCache<S> ln1;
    Mat<S> y1;
    Mat<S> ffn_pre;
    Mat<S> ffn_act;
    Mat<S> res2;
    LayerNormCache<S> ln2;
};

template <typename S>
struct BlockCache {
    Mat<S> input;     // raw (2t+b) x 4 slab
    Mat<S> patches;   // cnn im2col rows
    Mat<S> emb_lin1;  // first embedding linear, pre-activation
    Mat<S> emb_act1;  // activated hidden (mlp2)
    Mat<S> seq;       // embedded sequence plus positions, n x d_model
    std::vector<LayerCache<S>> layers;
    Mat<S> enc_out;
    Mat<S> flat;      // per-target window rows, b x (window*d_model)
    Mat<S> o1, a1, o2, a2, out;
};

// Transformer equalizer head for one polarization. Training runs in double;
// the float instantiation exists for inference parity.
template <typename S>
class Model {
  public:
    ModelConfig cfg;
    ModelParams<S> p;
    std::optional<AttentionMask> mask;
    Mat<S> pe;

    explicit Model(const ModelConfig& c) : cfg(c) {
        cfg.validate();
        build();
    }

    // Order fixes the init draw sequence and the checkpoint layout.
    std::vector<Param<S>*> parameters() {
        std::vector<Param<S>*> ps = {&p.emb_w1, &p.emb_b1};
        if (cfg.embedding == Embedding::Mlp2) {
            ps.push_back(&p.emb_w2);
            ps.push_back(&p.emb_b2);
        }
        for (auto& l : p.enc)
            for (Param<S>* q :
                 {&l.wq, &l.bq, &l.wk, &l.bk, &l.wv, &l.bv, &l.wo, &l.bo,
                  &l.ln1_g, &l.ln1_b, &l.w1, &l.b1, &l.w2, &l.b2, &l.ln2_g,
                  &l.ln2_b})
                ps.push_back(q);
        for (Param<S>* q : {&p.out_w1, &p.out_b1, &p.out_w2, &p.out_b2,
                            &p.out_w3, &p.out_b3})
            ps.push_back(q);
        return ps;
    }

    long parameter_count() {
        long n = 0;
        for (Param<S>* q : parameters()) n += static_cast<long>(q->w.size());
        return n;
    }

    void init(std::uint64_t seed) {
        Pcg64 rng = derive_rng(seed, 0x11a7);
        for (Param<S>* q : parameters()) {
            if (ends_with(q->name, ".w"))
                q->fill_uniform(rng, q->w.rows());
            else if (ends_with(q->name, ".gain"))
                q->w.setOnes();
            else
                q->w.setZero();
        }
    }

    void zero_grad() {
        for (Param<S>* q : parameters()) q->g.setZero();
    }

    Mat<S> forward(const Mat<S>& input, BlockCache<S>& c,
                   MultCounter* cnt = nullptr);
    void backward(const Mat<S>& dout, BlockCache<S>& c);

  private:
    static bool ends_with(const std::string& s, const std::string& suf) {
        return s.size() >= suf.size() &&
               s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
    }

    void build();
    void mha_forward(const EncoderLayerParams<S>& lp, LayerCache<S>& lc,
                     MultCounter* cnt) const;
    void mha_backward(EncoderLayerParams<S>& lp, LayerCache<S>& lc,
                      const Mat<S>& dconcat, Mat<S>& dx) const;
};

template <typename S>
void Model<S>::build() {
    const int dm = cfg.d_model;
    const int hk = cfg.heads * cfg.d_k();
    const int hv = cfg.heads * cfg.d_v();
    switch (cfg.embedding) {
        case Embedding::Cnn:
            p.emb_w1.init_shape("embed.w", 4 * cfg.conv_k, dm);
            p.emb_b1.init_shape("embed.b", dm, 1);
            break;
        case Embedding::Mlp1:
            p.emb_w1.init_shape("embed.w", 4, dm);
            p.emb_b1.init_shape("embed.b", dm, 1);
            break;
        case Embedding::Mlp2:
            p.emb_w1.init_shape("embed.w", 4, cfg.hidden());
            p.emb_b1.init_shape("embed.b", cfg.hidden(), 1);
            p.emb_w2.init_shape("embed2.w", cfg.hidden(), dm);
            p.emb_b2.init_shape("embed2.b", dm, 1);
            break;
    }
    p.enc.resize(cfg.layers);
    for (int i = 0; i < cfg.layers; ++i) {
        auto& l = p.enc[i];
        const std::string pre = "enc" + std::to_string(i) + ".";
        l.wq.init_shape(pre + "q.w", dm, hk);
        l.bq.init_shape(pre + "q.b", hk, 1);
        l.wk.init_shape(pre + "k.w", dm, hk);
        l.bk.init_shape(pre + "k.b", hk, 1);
        l.wv.init_shape(pre + "v.w", dm, hv);
        l.bv.init_shape(pre + "v.b", hv, 1);
        l.wo.init_shape(pre + "o.w", hv, dm);
        l.bo.init_shape(pre + "o.b", dm, 1);
        l.ln1_g.init_shape(pre + "ln1.gain", dm, 1);
        l.ln1_b.init_shape(pre + "ln1.bias", dm, 1);
        l.w1.init_shape(pre + "ffn1.w", dm, cfg.d_ff);
        l.b1.init_shape(pre + "ffn1.b", cfg.d_ff, 1);
        l.w2.init_shape(pre + "ffn2.w", cfg.d_ff, dm);
        l.b2.init_shape(pre + "ffn2.b", dm, 1);
        l.ln2_g.init_shape(pre + "ln2.gain", dm, 1);
        l.ln2_b.init_shape(pre + "ln2.bias", dm, 1);
    }
    p.out_w1.init_shape("head1.w", cfg.window * dm, 2);
    p.out_b1.init_shape("head1.b", 2, 1);
    p.out_w2.init_shape("head2.w", 2, 10);
    p.out_b2.init_shape("head2.b", 10, 1);
    p.out_w3.init_shape("head3.w", 10, 2);
    p.out_b3.init_shape("head3.b", 2, 1);

    if (cfg.masked()) mask = block_mask(cfg.ell(), cfg.mask_rho, cfg.block);
    pe = positional_encoding<S>(cfg.context(), dm);
}

template <typename S>
void Model<S>::mha_forward(const EncoderLayerParams<S>& lp, LayerCache<S>& lc,
                           MultCounter* cnt) const {
    const int n = cfg.context();
    const int h = cfg.heads;
    const int dk = cfg.d_k();
    const int dv = cfg.d_v();
    const S inv_sqrt = S(1) / std::sqrt(static_cast<S>(dk));

    lc.q = linear_fwd(lc.x, lp.wq.w, lp.bq.w);
    lc.k = linear_fwd(lc.x, lp.wk.w, lp.bk.w);
    lc.v = linear_fwd(lc.x, lp.wv.w, lp.bv.w);
    if (cnt)
        cnt->add(OpSite::Projection, 3ull * n * cfg.d_model *
                                         static_cast<std::uint64_t>(h) * dk);

    lc.heads.assign(h, {});
    lc.concat.setZero(n, h * dv);
    for (int hd = 0; hd < h; ++hd) {
        const auto qh = lc.q.middleCols(hd * dk, dk);
        const auto kh = lc.k.middleCols(hd * dk, dk);
        const auto vh = lc.v.middleCols(hd * dv, dv);
        auto uh = lc.concat.middleCols(hd * dv, dv);
        HeadCache<S>& hc = lc.heads[hd];
        if (!mask) {
            Mat<S> sc = qh * kh.transpose();
            sc *= inv_sqrt;
            hc.att = softmax_rows(sc);
            uh = hc.att * vh;
            if (cnt) {
                const std::uint64_t nn = static_cast<std::uint64_t>(n) * n;
                cnt->add(OpSite::Attention, nn * dk + 3 * nn);
                cnt->add(OpSite::Projection, nn * dv);
            }
        } else {
            // Sparse path: only mask-kept coordinates are touched, so the
            // instrumented cost follows the mask density.
            hc.att_sp.assign(n, {});
            std::uint64_t nnz = 0;
            for (int r = 0; r < n; ++r) {
                const auto& cols = mask->allowed[r];
                if (cols.empty()) continue;
                nnz += cols.size();
                std::vector<S>& a = hc.att_sp[r];
                a.resize(cols.size());
                S mx = std::numeric_limits<S>::lowest();
                for (size_t j = 0; j < cols.size(); ++j) {
                    a[j] = qh.row(r).dot(kh.row(cols[j])) * inv_sqrt;
                    mx = std::max(mx, a[j]);
                }
                S z = S(0);
                for (auto& s : a) {
                    s = std::exp(s - mx);
                    z += s;
                }
                for (auto& s : a) s /= z;
                for (size_t j = 0; j < cols.size(); ++j)
                    uh.row(r) += a[j] * vh.row(cols[j]);
            }
            if (cnt) {
                cnt->add(OpSite::Attention, nnz * dk + 3 * nnz);
                cnt->add(OpSite::Projection, nnz * dv);
            }
        }
    }
}

template <typename S>
Mat<S> Model<S>::forward(const Mat<S>& input, BlockCache<S>& c, MultCounter* cnt) {
    if (input.rows() != cfg.input_rows() || input.cols() != 4)
        throw ShapeError("model input must be (2*tap + block) x 4");
    const int n = cfg.context();
    const int dm = cfg.d_model;
    const S slope = S(0.2);

    c.input = input;
    switch (cfg.embedding) {
        case Embedding::Cnn:
            c.patches = im2col(input, cfg.conv_k);
            c.emb_lin1 = linear_fwd(c.patches, p.emb_w1.w, p.emb_b1.w);
            c.seq = leaky_relu_fwd(c.emb_lin1, slope);
            if (cnt)
                cnt->add(OpSite::Embedding,
                         static_cast<std::uint64_t>(n) * (4 * cfg.conv_k) * dm);
            break;
        case Embedding::Mlp1:
            c.emb_lin1 = linear_fwd(input, p.emb_w1.w, p.emb_b1.w);
            c.seq = c.emb_lin1;
            if (cnt)
                cnt->add(OpSite::Embedding, static_cast<std::uint64_t>(n) * 4 * dm);
            break;
        case Embedding::Mlp2:
            c.emb_lin1 = linear_fwd(input, p.emb_w1.w, p.emb_b1.w);
            c.emb_act1 = leaky_relu_fwd(c.emb_lin1, slope);
            c.seq = linear_fwd(c.emb_act1, p.emb_w2.w, p.emb_b2.w);
            if (cnt)
                cnt->add(OpSite::Embedding,
                         static_cast<std::uint64_t>(n) *
                             (4ull * cfg.hidden() +
                              static_cast<std::uint64_t>(cfg.hidden()) * dm));
            break;
    }
    c.seq += pe;

    c.layers.assign(cfg.layers, {});
    Mat<S> x = c.seq;
    for (int li = 0; li < cfg.layers; ++li) {
        auto& lp = p.enc[li];
        LayerCache<S>& lc = c.layers[li];
        lc.x = x;
        mha_forward(lp, lc, cnt);
        Mat<S> mha = linear_fwd(lc.concat, lp.wo.w, lp.bo.w);
        if (cnt)
            cnt->add(OpSite::Projection, static_cast<std::uint64_t>(n) *
                                             (cfg.heads * cfg.d_v()) * dm);
        lc.res1 = lc.x + mha;
        lc.y1 = layer_norm_fwd(lc.res1, lp.ln1_g.w, lp.ln1_b.w, lc.ln1);
        lc.ffn_pre = linear_fwd(lc.y1, lp.w1.w, lp.b1.w);
        lc.ffn_act = relu_fwd(lc.ffn_pre);
        Mat<S> ffn = linear_fwd(lc.ffn_act, lp.w2.w, lp.b2.w);
        if (cnt) {
            cnt->add(OpSite::Ffn, 2ull * n * dm * cfg.d_ff);
            cnt->add(OpSite::LayerNorm, 2ull * 3 * n * dm);
        }
        lc.res2 = lc.y1 + ffn;
        x = layer_norm_fwd(lc.res2, lp.ln2_g.w, lp.ln2_b.w, lc.ln2);
    }
    c.enc_out = x;

    // Window selection: target j reads rows centered at j + l/2.
    const int w = cfg.half_window();
    const int b = cfg.block;
    c.flat = im2col(Mat<S>(c.enc_out.middleRows(cfg.ell() / 2 - w, b + 2 * w)),
                    cfg.window);
    c.o1 = linear_fwd(c.flat, p.out_w1.w, p.out_b1.w);
    c.a1 = leaky_relu_fwd(c.o1, slope);
    c.o2 = linear_fwd(c.a1, p.out_w2.w, p.out_b2.w);
    c.a2 = leaky_relu_fwd(c.o2, slope);
    c.out = linear_fwd(c.a2, p.out_w3.w, p.out_b3.w);
    if (cnt)
        cnt->add(OpSite::OutputMlp,
                 static_cast<std::uint64_t>(b) *
                     (static_cast<std::uint64_t>(cfg.window) * dm * 2 + 2 * 10 +
                      10 * 2));
    return c.out;
}

template <typename S>
void Model<S>::mha_backward(EncoderLayerParams<S>& lp, LayerCache<S>& lc,
                            const Mat<S>& dconcat, Mat<S>& dx) const {
    const int n = cfg.context();
    const int h = cfg.heads;
    const int dk = cfg.d_k();
    const int dv = cfg.d_v();
    const S inv_sqrt = S(1) / std::sqrt(static_cast<S>(dk));

    Mat<S> dq = Mat<S>::Zero(n, h * dk);
    Mat<S> dkm = Mat<S>::Zero(n, h * dk);
    Mat<S> dvm = Mat<S>::Zero(n, h * dv);
    for (int hd = 0; hd < h; ++hd) {
        const auto qh = lc.q.middleCols(hd * dk, dk);
        const auto kh = lc.k.middleCols(hd * dk, dk);
        const auto vh = lc.v.middleCols(hd * dv, dv);
        const auto duh = dconcat.middleCols(hd * dv, dv);
        auto dqh = dq.middleCols(hd * dk, dk);
        auto dkh = dkm.middleCols(hd * dk, dk);
        auto dvh = dvm.middleCols(hd * dv, dv);
        HeadCache<S>& hc = lc.heads[hd];
        if (!mask) {
            Mat<S> da = duh * vh.transpose();
            dvh.noalias() += hc.att.transpose() * duh;
            Mat<S> ds = softmax_rows_bwd(hc.att, da);
            ds *= inv_sqrt;
            dqh.noalias() += ds * kh;
            dkh.noalias() += ds.transpose() * qh;
        } else {
            for (int r = 0; r < n; ++r) {
                const auto& cols = mask->allowed[r];
                if (cols.empty()) continue;
                const std::vector<S>& a = hc.att_sp[r];
                std::vector<S> da(cols.size());
                S dot = S(0);
                for (size_t j = 0; j < cols.size(); ++j) {
                    da[j] = duh.row(r).dot(vh.row(cols[j]));
                    dot += da[j] * a[j];
                }
                for (size_t j = 0; j < cols.size(); ++j) {
                    const S ds = a[j] * (da[j] - dot) * inv_sqrt;
                    dqh.row(r) += ds * kh.row(cols[j]);
                    dkh.row(cols[j]) += ds * qh.row(r);
                    dvh.row(cols[j]) += a[j] * duh.row(r);
                }
            }
        }
    }

    Mat<S> dtmp;
    linear_bwd(lc.x, lp.wq.w, dq, dtmp, lp.wq.g, lp.bq.g);
    dx += dtmp;
    linear_bwd(lc.x, lp.wk.w, dkm, dtmp, lp.wk.g, lp.bk.g);
    dx += dtmp;
    linear_bwd(lc.x, lp.wv.w, dvm, dtmp, lp.wv.g, lp.bv.g);
    dx += dtmp;
}

template <typename S>
void Model<S>::backward(const Mat<S>& dout, BlockCache<S>& c) {
    const int dm = cfg.d_model;
    const int b = cfg.block;
    const int w = cfg.half_window();
    const S slope = S(0.2);

    Mat<S> da2, da1, dflat, dtmp;
    linear_bwd(c.a2, p.out_w3.w, dout, da2, p.out_w3.g, p.out_b3.g);
    Mat<S> do2 = leaky_relu_bwd(c.o2, da2, slope);
    linear_bwd(c.a1, p.out_w2.w, do2, da1, p.out_w2.g, p.out_b2.g);
    Mat<S> do1 = leaky_relu_bwd(c.o1, da1, slope);
    linear_bwd(c.flat, p.out_w1.w, do1, dflat, p.out_w1.g, p.out_b1.g);

    Mat<S> dmid = Mat<S>::Zero(b + 2 * w, dm);
    im2col_bwd(dflat, cfg.window, dmid);
    Mat<S> dx = Mat<S>::Zero(cfg.context(), dm);
    dx.middleRows(cfg.ell() / 2 - w, b + 2 * w) += dmid;

    for (int li = cfg.layers - 1; li >= 0; --li) {
        auto& lp = p.enc[li];
        LayerCache<S>& lc = c.layers[li];
        Mat<S> dres2 = layer_norm_bwd(dx, lp.ln2_g.w, lc.ln2, lp.ln2_g.g, lp.ln2_b.g);
        Mat<S> dy1 = dres2;
        Mat<S> dact;
        linear_bwd(lc.ffn_act, lp.w2.w, dres2, dact, lp.w2.g, lp.b2.g);
        Mat<S> dpre = relu_bwd(lc.ffn_pre, dact);
        linear_bwd(lc.y1, lp.w1.w, dpre, dtmp, lp.w1.g, lp.b1.g);
        dy1 += dtmp;
        Mat<S> dres1 = layer_norm_bwd(dy1, lp.ln1_g.w, lc.ln1, lp.ln1_g.g, lp.ln1_b.g);
        Mat<S> dxl = dres1;
        Mat<S> dconcat;
        linear_bwd(lc.concat, lp.wo.w, dres1, dconcat, lp.wo.g, lp.bo.g);
        mha_backward(lp, lc, dconcat, dxl);
        dx = dxl;
    }

    // Position add is a pass-through; unwind the embedding.
    switch (cfg.embedding) {
        case Embedding::Cnn: {
            Mat<S> dlin = leaky_relu_bwd(c.emb_lin1, dx, slope);
            linear_bwd(c.patches, p.emb_w1.w, dlin, dtmp, p.emb_w1.g, p.emb_b1.g);
            break;
        }
        case Embedding::Mlp1:
            linear_bwd(c.input, p.emb_w1.w, dx, dtmp, p.emb_w1.g, p.emb_b1.g);
            break;
        case Embedding::Mlp2: {
            Mat<S> dh_act;
            linear_bwd(c.emb_act1, p.emb_w2.w, dx, dh_act, p.emb_w2.g, p.emb_b2.g);
            Mat<S> dh = leaky_relu_bwd(c.emb_lin1, dh_act, slope);
            linear_bwd(c.input, p.emb_w1.w, dh, dtmp, p.emb_w1.g, p.emb_b1.g);
            break;
        }
    }
}

}  // namespace fnlc
