#include "fnlc/channel/dsp.hpp"

#include "fnlc/channel/pulse.hpp"
#include "fnlc/channel/ssfm.hpp"

namespace fnlc {

CVec SymbolFrame::to_complex(const MatX& m, int col) {
    CVec v(m.rows());
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        v[k] = cplx(m(k, col), m(k, col + 1));
    return v;
}

void SymbolFrame::from_complex(MatX& m, int col, const CVec& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        m(k, col) = v[k].real();
        m(k, col + 1) = v[k].imag();
    }
}

void SymbolFrame::validate() const {
    if (rx.cols() != 4 || tx.cols() != 4)
        throw ShapeError("symbol frame must have 4 columns");
    if (rx.rows() != tx.rows())
        throw ShapeError("rx/tx row mismatch in symbol frame");
}

SymbolFrame swap_polarization(const SymbolFrame& f) {
    SymbolFrame s = f;
    s.rx.col(0) = f.rx.col(2);
    s.rx.col(1) = f.rx.col(3);
    s.rx.col(2) = f.rx.col(0);
    s.rx.col(3) = f.rx.col(1);
    s.tx.col(0) = f.tx.col(2);
    s.tx.col(1) = f.tx.col(3);
    s.tx.col(2) = f.tx.col(0);
    s.tx.col(3) = f.tx.col(1);
    return s;
}

namespace {

// Data-aided sliding-window carrier phase recovery: each symbol is derotated
// by the phase of the windowed correlation against the reference.
CVec recover_phase(const CVec& rx, const CVec& ref, int window) {
    const Eigen::Index n = rx.size();
    const int half = window / 2;
    CVec out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, k - half);
        const Eigen::Index hi = std::min<Eigen::Index>(n - 1, k + half - 1);
        cplx acc(0.0, 0.0);
        for (Eigen::Index j = lo; j <= hi; ++j) acc += rx[j] * std::conj(ref[j]);
        const double theta = std::arg(acc);
        out[k] = rx[k] * std::exp(cplx(0.0, -theta));
    }
    return out;
}

void normalize_unit_power(CVec& v) {
    const double p = v.squaredNorm() / static_cast<double>(v.size());
    if (p > 0.0) v /= std::sqrt(p);
}

}  // namespace

SymbolFrame receive(const DualPolWave& w, const TxConfig& tx, const LinkConfig& link,
                    const DualPolSymbols& ref, const RxOptions& opt) {
    DualPolWave r = w;
    const double beta2 = link.beta2_ps2_km();
    const double pre_km = tx.pre_cd_fraction * link.total_km();
    if (opt.dbp_steps_per_span > 0) {
        backpropagate(r, link, opt.dbp_steps_per_span, opt.dbp_xi);
        if (pre_km > 0.0) apply_cd(r, beta2, pre_km);
    } else {
        const double residual = link.total_km() - pre_km;
        if (residual != 0.0) apply_cd(r, beta2, -residual);
    }
    DualPolSymbols rx = matched_filter_downsample(r, tx);

    CVec rxx = recover_phase(rx.x, ref.x, opt.cpr_window);
    CVec rxy = recover_phase(rx.y, ref.y, opt.cpr_window);
    normalize_unit_power(rxx);
    normalize_unit_power(rxy);

    SymbolFrame f;
    const Eigen::Index n = rxx.size();
    f.rx.resize(n, 4);
    f.tx.resize(n, 4);
    SymbolFrame::from_complex(f.rx, 0, rxx);
    SymbolFrame::from_complex(f.rx, 2, rxy);
    SymbolFrame::from_complex(f.tx, 0, ref.x);
    SymbolFrame::from_complex(f.tx, 2, ref.y);
    f.launch_dbm = tx.launch_dbm;
    f.baud_gbaud = tx.baud_gbaud;
    f.modulation = tx.modulation;
    return f;
}

}  // namespace fnlc
