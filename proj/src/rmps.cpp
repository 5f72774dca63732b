#include "fnlc/complexity/rmps.hpp"

#include "fnlc/model/mask.hpp"

namespace fnlc {

double attention_rmps_dense(int heads, int block, int l, int dk) {
    const double n = static_cast<double>(block) + l;
    return (heads * n * n * dk + 3.0 * heads * n * n) / block;
}

ComplexityReport complexity_report(const ModelConfig& cfg) {
    cfg.validate();
    const std::uint64_t n = static_cast<std::uint64_t>(cfg.context());
    const std::uint64_t b = static_cast<std::uint64_t>(cfg.block);
    const std::uint64_t dm = static_cast<std::uint64_t>(cfg.d_model);
    const std::uint64_t h = static_cast<std::uint64_t>(cfg.heads);
    const std::uint64_t dk = static_cast<std::uint64_t>(cfg.d_k());
    const std::uint64_t dv = static_cast<std::uint64_t>(cfg.d_v());
    const std::uint64_t dff = static_cast<std::uint64_t>(cfg.d_ff);
    const std::uint64_t layers = static_cast<std::uint64_t>(cfg.layers);

    std::uint64_t coords = n * n;
    if (cfg.masked()) {
        const AttentionMask m = block_mask(cfg.ell(), cfg.mask_rho, cfg.block);
        coords = static_cast<std::uint64_t>(m.unmasked);
    }

    std::uint64_t emb = 0;
    switch (cfg.embedding) {
        case Embedding::Cnn:
            emb = n * 4 * static_cast<std::uint64_t>(cfg.conv_k) * dm;
            break;
        case Embedding::Mlp1:
            emb = n * 4 * dm;
            break;
        case Embedding::Mlp2: {
            const std::uint64_t hid = static_cast<std::uint64_t>(cfg.hidden());
            emb = n * (4 * hid + hid * dm);
            break;
        }
    }
    const std::uint64_t qkv = 3 * n * dm * h * dk;
    const std::uint64_t att = h * coords * dk + 3 * h * coords;
    const std::uint64_t av = h * coords * dv;
    const std::uint64_t outp = n * h * dv * dm;
    const std::uint64_t ffn = 2 * n * dm * dff;
    const std::uint64_t ln = 2 * 3 * n * dm;
    const std::uint64_t head = b * (static_cast<std::uint64_t>(cfg.window) * dm * 2 +
                                    2 * 10 + 10 * 2);

    ComplexityReport r;
    const double db = static_cast<double>(b);
    r.embedding = static_cast<double>(emb) / db;
    r.projection = static_cast<double>(layers * (qkv + av + outp)) / db;
    r.attention = static_cast<double>(layers * att) / db;
    r.ffn = static_cast<double>(layers * ffn) / db;
    r.layer_norm = static_cast<double>(layers * ln) / db;
    r.output_mlp = static_cast<double>(head) / db;
    r.block_mults = emb + layers * (qkv + att + av + outp + ffn + ln) + head;
    r.total = static_cast<double>(r.block_mults) / db;
    r.attended_coords = static_cast<std::int64_t>(coords);
    return r;
}

std::vector<std::pair<int, double>> attention_rmps_curve(
    int heads, int l, int dk, const std::vector<int>& blocks) {
    std::vector<std::pair<int, double>> out;
    out.reserve(blocks.size());
    for (const int b : blocks)
        out.emplace_back(b, attention_rmps_dense(heads, b, l, dk));
    return out;
}

}  // namespace fnlc
