#include "fnlc/channel/modulation.hpp"

#include <algorithm>
#include <cmath>

namespace fnlc {

const char* to_string(Modulation m) {
    return m == Modulation::Qam16 ? "16qam" : "64qam";
}

Modulation modulation_from_string(const std::string& s) {
    if (s == "16qam") return Modulation::Qam16;
    if (s == "64qam") return Modulation::Qam64;
    throw ConfigError("unknown modulation '" + s + "' (expected 16qam or 64qam)");
}

void LinkConfig::validate() const {
    if (span_count < 1) throw ConfigError("link.span_count must be >= 1");
    if (span_km <= 0.0) throw ConfigError("link.span_km must be positive");
    if (atten_db_km < 0.0) throw ConfigError("link.atten_db_km must be >= 0");
    if (gamma_w_km < 0.0) throw ConfigError("link.gamma_w_km must be >= 0");
    if (wavelength_nm <= 0.0) throw ConfigError("link.wavelength_nm must be positive");
    if (max_nl_phase_deg <= 0.0)
        throw ConfigError("link.max_nl_phase_deg must be positive");
}

void TxConfig::validate() const {
    if (baud_gbaud <= 0.0) throw ConfigError("tx.baud_gbaud must be positive");
    if (rolloff <= 0.0 || rolloff > 1.0)
        throw ConfigError("tx.rolloff must be in (0, 1]");
    if (oversampling < 2) throw ConfigError("tx.oversampling must be >= 2");
    if (symbol_count < 16) throw ConfigError("tx.symbol_count must be >= 16");
    if (pre_cd_fraction < 0.0 || pre_cd_fraction > 1.0)
        throw ConfigError("tx.pre_cd_fraction must be in [0, 1]");
}

namespace {

// Reflected binary code over b bits: index i along one axis -> Gray label.
int gray_code(int i) { return i ^ (i >> 1); }

}  // namespace

Constellation make_constellation(Modulation m) {
    Constellation c;
    c.modulation = m;
    c.bits_per_axis = (m == Modulation::Qam16) ? 2 : 3;
    const int per_axis = 1 << c.bits_per_axis;
    // Unit average symbol energy: E[I^2 + Q^2] = 1.
    double sq = 0.0;
    for (int i = 0; i < per_axis; ++i) {
        const double l = 2.0 * i - (per_axis - 1);
        sq += l * l;
    }
    c.level_scale = 1.0 / std::sqrt(2.0 * sq / per_axis);
    c.levels.resize(per_axis);
    c.gray_of_index.resize(per_axis);
    for (int i = 0; i < per_axis; ++i) {
        c.levels[i] = (2.0 * i - (per_axis - 1)) * c.level_scale;
        c.gray_of_index[i] = gray_code(i);
    }
    return c;
}

int Constellation::slice(double v) const {
    const int per_axis = static_cast<int>(levels.size());
    const double step = 2.0 * level_scale;
    int idx = static_cast<int>(std::lround((v - levels[0]) / step));
    return std::clamp(idx, 0, per_axis - 1);
}

DualPolSymbols generate_symbols(int count, Modulation m, std::uint64_t seed) {
    const Constellation c = make_constellation(m);
    const std::uint64_t per_axis = static_cast<std::uint64_t>(c.levels.size());
    Pcg64 rng = derive_rng(seed, 0x5d4a);
    DualPolSymbols s;
    s.x.resize(count);
    s.y.resize(count);
    for (int k = 0; k < count; ++k) {
        const int xi = static_cast<int>(rng.bounded(per_axis));
        const int xq = static_cast<int>(rng.bounded(per_axis));
        const int yi = static_cast<int>(rng.bounded(per_axis));
        const int yq = static_cast<int>(rng.bounded(per_axis));
        s.x[k] = c.point(xi, xq);
        s.y[k] = c.point(yi, yq);
    }
    return s;
}

}  // namespace fnlc
