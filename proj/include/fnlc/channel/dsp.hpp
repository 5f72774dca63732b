#pragma once

#include <string>

#include "fnlc/channel/link.hpp"
#include "fnlc/channel/modulation.hpp"
#include "fnlc/channel/waveform.hpp"

namespace fnlc {

// Receiver output aligned with its transmitted reference. Columns are
// X_I, X_Q, Y_I, Y_Q; one row per symbol. rx is carrier-recovered and
// normalized to unit average power per polarization; tx is the unit-energy
// constellation reference.
struct SymbolFrame {
    MatX rx;
    MatX tx;
    double launch_dbm = 0.0;
    double baud_gbaud = 0.0;
    Modulation modulation = Modulation::Qam16;

    Eigen::Index symbols() const { return rx.rows(); }

    CVec rx_x() const { return to_complex(rx, 0); }
    CVec rx_y() const { return to_complex(rx, 2); }
    CVec tx_x() const { return to_complex(tx, 0); }
    CVec tx_y() const { return to_complex(tx, 2); }

    static CVec to_complex(const MatX& m, int col);
    static void from_complex(MatX& m, int col, const CVec& v);

    void validate() const;
};

// Swaps the polarization columns of rx and tx. With the Manakov channel being
// symmetric under polarization exchange, one trained equalizer serves both
// polarizations through this view.
SymbolFrame swap_polarization(const SymbolFrame& f);

struct RxOptions {
    int dbp_steps_per_span = 0;  // 0: linear equalization only
    double dbp_xi = 1.0;
    int cpr_window = 64;
};

// Full receive chain: optional DBP, residual CD removal, matched filter,
// decimation, data-aided sliding-window carrier phase recovery, per-pol
// normalization.
SymbolFrame receive(const DualPolWave& w, const TxConfig& tx, const LinkConfig& link,
                    const DualPolSymbols& ref, const RxOptions& opt = {});

void save_frame(const std::string& path, const SymbolFrame& f);
SymbolFrame load_frame(const std::string& path);

}  // namespace fnlc
