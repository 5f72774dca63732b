#pragma once

#include "fnlc/io/config_file.hpp"
#include "fnlc/model/transformer.hpp"
#include "fnlc/nn/checkpoint.hpp"

namespace fnlc {

template <typename S>
void save_model(const std::string& path, Model<S>& m) {
    Checkpoint c;
    c.meta = serialize_model_meta(m.cfg);
    for (Param<S>* p : m.parameters())
        c.tensors.emplace_back(p->name, p->w.template cast<double>());
    save_checkpoint(path, c);
}

inline Model<double> load_model(const std::string& path) {
    const Checkpoint c = load_checkpoint(path);
    Model<double> m(parse_model_meta(c.meta));
    for (Param<double>* p : m.parameters()) {
        const MatX* t = c.find(p->name);
        if (!t) throw FramingError("checkpoint missing tensor " + p->name);
        if (t->rows() != p->w.rows() || t->cols() != p->w.cols())
            throw FramingError("checkpoint shape mismatch for " + p->name);
        p->w = *t;
    }
    if (static_cast<long>(c.tensors.size()) !=
        static_cast<long>(m.parameters().size()))
        throw FramingError("checkpoint holds unexpected extra tensors");
    return m;
}

// Float mirror of a double model for inference-parity checks.
inline Model<float> to_float(Model<double>& m) {
    Model<float> f(m.cfg);
    auto src = m.parameters();
    auto dst = f.parameters();
    for (size_t i = 0; i < src.size(); ++i)
        dst[i]->w = src[i]->w.cast<float>();
    return f;
}

}  // namespace fnlc
