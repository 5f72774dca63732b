#include "fnlc/harness/evaluate.hpp"

#include <cmath>
#include <sstream>

#include "fnlc/complexity/rmps.hpp"

namespace fnlc {

std::string config_id(const ModelConfig& cfg) {
    std::ostringstream os;
    os << to_string(cfg.embedding) << "_t" << cfg.tap << "_dm" << cfg.d_model
       << "_k" << cfg.key_total << "_h" << cfg.heads << "_L" << cfg.layers
       << "_ff" << cfg.d_ff << "_W" << cfg.window << "_b" << cfg.block;
    if (cfg.masked())
        os << "_rho" << cfg.mask_rho;
    else
        os << "_dense";
    return os.str();
}

MatX predict_estimates(Model<double>& m, const SymbolFrame& f) {
    const Dataset ds = build_dataset(f, m.cfg.tap, m.cfg.block);
    const double alpha =
        std::pow(10.0, (f.launch_dbm - m.cfg.train_power_dbm) / 10.0);
    const int b = m.cfg.block;
    MatX est(ds.count() * b, 2);
    BlockCache<double> cache;
    for (long i = 0; i < ds.count(); ++i)
        est.middleRows(i * b, b) = alpha * m.forward(ds.input_block(i), cache);
    return est;
}

EvalResult evaluate_frame(Model<double>& m, const SymbolFrame& f) {
    const MatX est_x = predict_estimates(m, f);
    const SymbolFrame swapped = swap_polarization(f);
    const MatX est_y = predict_estimates(m, swapped);

    const long tap = m.cfg.tap;
    const long span = est_x.rows();
    const MatX eq_x = f.rx.block(tap, 0, span, 2) - est_x;
    const MatX eq_y = f.rx.block(tap, 2, span, 2) - est_y;
    const MatX ref_x = f.tx.block(tap, 0, span, 2);
    const MatX ref_y = f.tx.block(tap, 2, span, 2);

    EvalResult r;
    r.q_x_db = q_factor_pair(eq_x, ref_x, f.modulation).q_db;
    r.q_y_db = q_factor_pair(eq_y, ref_y, f.modulation).q_db;
    r.q_db = 0.5 * (r.q_x_db + r.q_y_db);
    r.launch_dbm = f.launch_dbm;
    r.rmps_total = complexity_report(m.cfg).total;
    r.masked = m.cfg.masked();
    r.config_id = config_id(m.cfg);
    return r;
}

}  // namespace fnlc
