#include "fnlc/channel/metrics.hpp"

#include <cmath>

namespace fnlc {

double erfc_inv(double y) {
    if (y <= 0.0 || y >= 2.0)
        throw ConfigError("erfc_inv argument must lie in (0, 2)");
    double lo = -15.0, hi = 15.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double q_from_ber_db(double ber) {
    if (ber >= 0.5) return kQSentinelDb;
    const double q_lin = std::sqrt(2.0) * erfc_inv(2.0 * ber);
    if (q_lin <= 0.0) return kQSentinelDb;
    return 20.0 * std::log10(q_lin);
}

double frame_evm(const SymbolFrame& f) {
    const double err = (f.rx - f.tx).squaredNorm();
    const double ref = f.tx.squaredNorm();
    return std::sqrt(err / ref);
}

namespace {

QResult finish(long errors, long bits, double evm) {
    QResult r;
    r.bit_errors = errors;
    r.bits = bits;
    r.ber = static_cast<double>(errors) / static_cast<double>(bits);
    r.evm = evm;
    r.evm_db = 20.0 * std::log10(evm);
    if (errors == 0) {
        r.evm_fallback = true;
        r.q_db = -r.evm_db;
    } else {
        r.q_db = q_from_ber_db(r.ber);
    }
    return r;
}

long count_bit_errors(const Constellation& c, const MatX& rx, const MatX& tx) {
    long errors = 0;
    for (Eigen::Index k = 0; k < rx.rows(); ++k)
        for (Eigen::Index col = 0; col < rx.cols(); ++col)
            errors += c.bit_diff(c.slice(rx(k, col)), c.slice(tx(k, col)));
    return errors;
}

}  // namespace

QResult q_factor(const SymbolFrame& f) {
    f.validate();
    const Constellation c = make_constellation(f.modulation);
    const long errors = count_bit_errors(c, f.rx, f.tx);
    const long bits = f.rx.rows() * 2 * c.bits_per_symbol();
    return finish(errors, bits, frame_evm(f));
}

QResult q_factor_pair(const MatX& rx2, const MatX& tx2, Modulation m) {
    if (rx2.cols() != 2 || tx2.cols() != 2 || rx2.rows() != tx2.rows())
        throw ShapeError("q_factor_pair expects matching N x 2 blocks");
    const Constellation c = make_constellation(m);
    const long errors = count_bit_errors(c, rx2, tx2);
    const long bits = rx2.rows() * c.bits_per_symbol();
    const double evm = std::sqrt((rx2 - tx2).squaredNorm() / tx2.squaredNorm());
    return finish(errors, bits, evm);
}

}  // namespace fnlc
