#include "fnlc/channel/pulse.hpp"

#include <unsupported/Eigen/FFT>

namespace fnlc {

CArr fft(const CArr& x) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd in = x.matrix();
    Eigen::VectorXcd out(in.size());
    engine.fwd(out, in);
    return out.array();
}

CArr ifft(const CArr& X) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd in = X.matrix();
    Eigen::VectorXcd out(in.size());
    engine.inv(out, in);
    return out.array();
}

Arr fft_freq_thz(int n, double fs_thz) {
    Arr f(n);
    const double df = fs_thz / n;
    for (int k = 0; k < n; ++k) {
        const int kk = (k <= (n - 1) / 2) ? k : k - n;
        f[k] = kk * df;
    }
    return f;
}

Arr rrc_spectrum(int n, double fs_thz, double baud_thz, double rolloff) {
    const Arr f = fft_freq_thz(n, fs_thz);
    const double half = baud_thz / 2.0;
    const double f1 = (1.0 - rolloff) * half;
    const double f2 = (1.0 + rolloff) * half;
    Arr h(n);
    for (int k = 0; k < n; ++k) {
        const double af = std::abs(f[k]);
        double rc;
        if (af <= f1) {
            rc = 1.0;
        } else if (af < f2) {
            rc = 0.5 * (1.0 + std::cos(kPi / (rolloff * baud_thz) * (af - f1)));
        } else {
            rc = 0.0;
        }
        h[k] = std::sqrt(rc);
    }
    return h;
}

CArr upsample_zero_stuff(const CVec& symbols, int os) {
    CArr out = CArr::Zero(symbols.size() * os);
    for (Eigen::Index k = 0; k < symbols.size(); ++k) out[k * os] = symbols[k];
    return out;
}

CVec downsample(const CArr& x, int os, int phase) {
    const Eigen::Index n = x.size() / os;
    CVec out(n);
    for (Eigen::Index k = 0; k < n; ++k) out[k] = x[k * os + phase];
    return out;
}

CArr apply_spectrum(const CArr& x, const Arr& mag) {
    return ifft(fft(x) * mag.cast<cplx>());
}

void apply_cd(CArr& x, double fs_thz, double beta2_ps2_km, double km) {
    const int n = static_cast<int>(x.size());
    const Arr f = fft_freq_thz(n, fs_thz);
    const Arr omega = 2.0 * kPi * f;
    CArr phase(n);
    for (int k = 0; k < n; ++k)
        phase[k] = std::exp(cplx(0.0, 0.5 * beta2_ps2_km * omega[k] * omega[k] * km));
    x = ifft(fft(x) * phase);
}

void apply_cd(DualPolWave& w, double beta2_ps2_km, double km) {
    apply_cd(w.x, w.fs_thz, beta2_ps2_km, km);
    apply_cd(w.y, w.fs_thz, beta2_ps2_km, km);
}

void scale_to_power(DualPolWave& w, double power_w) {
    const double p = w.mean_power_w();
    if (p <= 0.0) throw DivergenceError("cannot scale an all-zero waveform");
    const double g = std::sqrt(power_w / p);
    w.x *= g;
    w.y *= g;
}

DualPolWave shape_transmit(const DualPolSymbols& syms, const TxConfig& tx,
                           const LinkConfig& link) {
    tx.validate();
    link.validate();
    const int os = tx.oversampling;
    const int n = static_cast<int>(syms.x.size()) * os;
    const Arr h = rrc_spectrum(n, tx.sample_rate_thz(), tx.baud_thz(), tx.rolloff);
    DualPolWave w;
    w.fs_thz = tx.sample_rate_thz();
    w.x = apply_spectrum(upsample_zero_stuff(syms.x, os), h);
    w.y = apply_spectrum(upsample_zero_stuff(syms.y, os), h);
    scale_to_power(w, dbm_to_watt(tx.launch_dbm));
    if (tx.pre_cd_fraction > 0.0)
        apply_cd(w, link.beta2_ps2_km(), -tx.pre_cd_fraction * link.total_km());
    return w;
}

DualPolSymbols matched_filter_downsample(const DualPolWave& w, const TxConfig& tx) {
    const int n = static_cast<int>(w.samples());
    const Arr h = rrc_spectrum(n, w.fs_thz, tx.baud_thz(), tx.rolloff);
    DualPolSymbols out;
    out.x = downsample(apply_spectrum(w.x, h), tx.oversampling);
    out.y = downsample(apply_spectrum(w.y, h), tx.oversampling);
    return out;
}

}  // namespace fnlc
