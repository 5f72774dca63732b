#include "fnlc/model/mask.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "fnlc/model/config.hpp"

namespace fnlc {

const char* to_string(Embedding e) {
    switch (e) {
        case Embedding::Cnn: return "cnn";
        case Embedding::Mlp1: return "mlp1";
        default: return "mlp2";
    }
}

Embedding embedding_from_string(const std::string& s) {
    if (s == "cnn") return Embedding::Cnn;
    if (s == "mlp1") return Embedding::Mlp1;
    if (s == "mlp2") return Embedding::Mlp2;
    throw ConfigError("unknown embedding '" + s + "' (expected cnn, mlp1 or mlp2)");
}

void ModelConfig::validate() const {
    if (tap < 1) throw ConfigError("model.tap must be >= 1");
    if (d_model < 2) throw ConfigError("model.d_model must be >= 2");
    if (heads < 1) throw ConfigError("model.heads must be >= 1");
    if (key_total < heads || key_total % heads != 0)
        throw ConfigError("model.key_size must be a positive multiple of heads");
    if (layers < 1) throw ConfigError("model.layers must be >= 1");
    if (d_ff < 1) throw ConfigError("model.d_ff must be >= 1");
    if (block < 1) throw ConfigError("model.block must be >= 1");
    if (window < 1 || window % 2 == 0)
        throw ConfigError("model.window must be odd and >= 1");
    if (embedding == Embedding::Cnn) {
        if (conv_k < 1 || conv_k % 2 == 0)
            throw ConfigError("model.conv_k must be odd and >= 1");
        if (conv_k > 2 * tap + 1)
            throw ConfigError("model.conv_k exceeds the input context");
    }
    if (ell() < 2) throw ConfigError("attention span l collapsed; increase tap");
    if (half_window() > ell() / 2)
        throw ConfigError("model.window reaches past the attention span");
    if (mask_rho < 0.0) throw ConfigError("model.mask_rho must be >= 0");
}

bool pair_selected(int l, double rho, int m, int n) {
    if (m == 0) return false;
    const int half = l / 2;
    if (std::abs(m) > half || std::abs(n) > half) return false;
    const double reach =
        rho * std::ceil(static_cast<double>(l) / (2.0 * std::abs(m)));
    const double bound = std::min(reach, std::ceil(l / 2.0));
    return std::abs(n) <= bound;
}

namespace {

AttentionMask from_dense(const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& keep) {
    const Eigen::Index n = keep.rows();
    AttentionMask m;
    m.bias.setConstant(n, n, -std::numeric_limits<double>::infinity());
    m.allowed.resize(n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (keep(r, c)) {
                m.bias(r, c) = 0.0;
                m.allowed[r].push_back(static_cast<int>(c));
                ++m.unmasked;
            }
    return m;
}

}  // namespace

AttentionMask individual_mask(int l, double rho) {
    if (l < 2 || l % 2 != 0) throw ConfigError("mask span l must be even and >= 2");
    const int half = l / 2;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> keep(l + 1, l + 1);
    keep.setConstant(false);
    for (int m = -half; m <= half; ++m)
        for (int n = -half; n <= half; ++n)
            if (pair_selected(l, rho, m, n)) keep(half + m, half + n) = true;
    return from_dense(keep);
}

AttentionMask block_mask(int l, double rho, int b) {
    if (b < 1) throw ConfigError("mask block size must be >= 1");
    const int half = l / 2;
    const int n = l + b;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> keep(n, n);
    keep.setConstant(false);
    // Union of the b single-target masks, the i-th shifted down and right by i.
    for (int m = -half; m <= half; ++m)
        for (int nn = -half; nn <= half; ++nn)
            if (pair_selected(l, rho, m, nn))
                for (int i = 0; i < b; ++i)
                    keep(i + half + m, i + half + nn) = true;
    return from_dense(keep);
}

void mask_to_pgm(const AttentionMask& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    const Eigen::Index n = m.size();
    out << "P5\n" << n << " " << n << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c)
            row[static_cast<size_t>(c)] = m.bias(r, c) == 0.0 ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

void mask_to_rowlist(const AttentionMask& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    for (const auto& r : m.allowed) {
        for (size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
        out << "\n";
    }
}

}  // namespace fnlc
