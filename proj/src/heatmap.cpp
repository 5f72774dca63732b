#include "fnlc/harness/heatmap.hpp"

#include <cmath>
#include <fstream>

namespace fnlc {

HeatMaps export_heatmaps(Model<double>& m, const SymbolFrame& f) {
    const Dataset ds = build_dataset(f, m.cfg.tap, m.cfg.block);
    const int n = m.cfg.context();
    const int h = m.cfg.heads;
    const int dk = m.cfg.d_k();
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dk));

    HeatMaps hm;
    hm.layers = m.cfg.layers;
    hm.heads = h;
    hm.maps.assign(static_cast<size_t>(m.cfg.layers) * h, MatX::Zero(n, n));

    BlockCache<double> cache;
    for (long i = 0; i < ds.count(); ++i) {
        m.forward(ds.input_block(i), cache);
        for (int li = 0; li < m.cfg.layers; ++li) {
            const LayerCache<double>& lc = cache.layers[static_cast<size_t>(li)];
            for (int hd = 0; hd < h; ++hd) {
                MatX& map = hm.maps[static_cast<size_t>(li) * h + hd];
                const auto qh = lc.q.middleCols(hd * dk, dk);
                const auto kh = lc.k.middleCols(hd * dk, dk);
                if (!m.mask) {
                    map += (qh * kh.transpose() * inv_sqrt).cwiseAbs();
                } else {
                    for (int r = 0; r < n; ++r)
                        for (const int c : m.mask->allowed[static_cast<size_t>(r)])
                            map(r, c) +=
                                std::abs(qh.row(r).dot(kh.row(c)) * inv_sqrt);
                }
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(ds.count());
    for (auto& map : hm.maps) map *= scale;
    return hm;
}

double band_fraction(const MatX& map, int halfwidth) {
    double band = 0.0, total = 0.0;
    for (Eigen::Index r = 0; r < map.rows(); ++r)
        for (Eigen::Index c = 0; c < map.cols(); ++c) {
            total += map(r, c);
            if (std::abs(static_cast<long>(r) - c) <= halfwidth) band += map(r, c);
        }
    return total > 0.0 ? band / total : 0.0;
}

void heatmap_to_csv(const MatX& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out.precision(8);
    for (Eigen::Index r = 0; r < map.rows(); ++r) {
        for (Eigen::Index c = 0; c < map.cols(); ++c)
            out << (c ? "," : "") << map(r, c);
        out << "\n";
    }
}

void heatmap_to_pgm(const MatX& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    const double mx = map.maxCoeff();
    out << "P5\n" << map.cols() << " " << map.rows() << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(map.cols()));
    for (Eigen::Index r = 0; r < map.rows(); ++r) {
        for (Eigen::Index c = 0; c < map.cols(); ++c)
            row[static_cast<size_t>(c)] = static_cast<unsigned char>(
                mx > 0.0 ? std::lround(255.0 * map(r, c) / mx) : 0);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace fnlc
