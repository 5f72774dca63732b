#include "fnlc/channel/ssfm.hpp"

#include <unsupported/Eigen/FFT>

#include "fnlc/channel/pulse.hpp"
#include "fnlc/pcg64.hpp"

namespace fnlc {

namespace {

// One span worth of symmetric split-step, shared by the forward channel and
// DBP. alpha is signed (positive: loss). Adjacent dispersive half-steps are
// merged so each step costs one FFT round trip per polarization.
struct SpanEngine {
    Eigen::FFT<double> fft;
    Arr omega2;
    double fs_thz;
    double beta2;
    double alpha;
    double gamma_eff;  // already includes the 8/9 Manakov factor and sign

    SpanEngine(int n, double fs, double b2, double a, double g)
        : fs_thz(fs), beta2(b2), alpha(a), gamma_eff(g) {
        const Arr f = fft_freq_thz(n, fs);
        omega2 = (2.0 * kPi * f).square();
    }

    void linear(CArr& x, CArr& y, double d) {
        if (d == 0.0) return;
        const Eigen::Index n = x.size();
        CArr op(n);
        const double att = -0.5 * alpha * d;
        for (Eigen::Index k = 0; k < n; ++k)
            op[k] = std::exp(cplx(att, 0.5 * beta2 * omega2[k] * d));
        transform(x, op);
        transform(y, op);
    }

    void nonlinear(CArr& x, CArr& y, double h) {
        // Exact CW weight for exponential power evolution across the step,
        // evaluated at the step midpoint.
        const double aa = std::abs(alpha);
        const double w = aa > 0.0 ? 2.0 * std::sinh(0.5 * aa * h) / aa : h;
        const Arr phi = gamma_eff * w * (x.abs2() + y.abs2());
        x *= phi.unaryExpr([](double p) { return std::exp(cplx(0.0, p)); });
        y *= phi.unaryExpr([](double p) { return std::exp(cplx(0.0, p)); });
    }

    void transform(CArr& x, const CArr& op) {
        Eigen::VectorXcd t(x.size());
        fft.fwd(t, x.matrix().eval());
        t.array() *= op;
        Eigen::VectorXcd out(x.size());
        fft.inv(out, t);
        x = out.array();
    }
};

double peak_total_power(const CArr& x, const CArr& y) {
    return (x.abs2() + y.abs2()).maxCoeff();
}

}  // namespace

PropagationStats propagate(DualPolWave& w, const LinkConfig& link,
                           std::uint64_t noise_seed) {
    link.validate();
    const int n = static_cast<int>(w.samples());
    const double phi_max = link.max_nl_phase_deg * kPi / 180.0;
    const double gamma_m = (8.0 / 9.0) * link.gamma_w_km;
    const double span = link.span_km;
    const double gain = link.span_gain_lin();
    constexpr double kMinStepKm = 1e-4;

    PropagationStats stats;
    stats.min_step_km = span;

    SpanEngine eng(n, w.fs_thz, link.beta2_ps2_km(), link.alpha_per_km(), gamma_m);

    for (int s = 0; s < link.span_count; ++s) {
        double z = 0.0;
        double pending = 0.0;  // dispersive half-steps awaiting application
        while (z < span - 1e-12) {
            double h = span - z;
            if (gamma_m > 0.0) {
                const double peak = peak_total_power(w.x, w.y);
                if (!std::isfinite(peak))
                    throw DivergenceError("non-finite field during propagation");
                if (peak > 0.0) h = std::min(h, phi_max / (gamma_m * peak));
            }
            h = std::max(h, kMinStepKm);
            h = std::min(h, span - z);
            eng.linear(w.x, w.y, pending + 0.5 * h);
            eng.nonlinear(w.x, w.y, h);
            pending = 0.5 * h;
            z += h;
            ++stats.total_steps;
            stats.min_step_km = std::min(stats.min_step_km, h);
            stats.max_step_km = std::max(stats.max_step_km, h);
        }
        eng.linear(w.x, w.y, pending);

        const double g_field = std::sqrt(gain);
        w.x *= g_field;
        w.y *= g_field;
        if (link.ase_enabled) {
            const double f_lin = db_to_lin(link.noise_figure_db);
            const double psd = 0.5 * f_lin * (gain - 1.0) * kPlanckJs *
                               link.carrier_thz() * 1e12;
            const double sigma_q = std::sqrt(0.5 * psd * w.fs_thz * 1e12);
            Pcg64 rng(noise_seed, 0x0a5eull + static_cast<std::uint64_t>(s));
            for (CArr* pol : {&w.x, &w.y}) {
                for (Eigen::Index k = 0; k < n; ++k) {
                    double gi, gq;
                    rng.gaussian_pair(gi, gq);
                    (*pol)[k] += cplx(sigma_q * gi, sigma_q * gq);
                }
            }
        }
    }
    if (!std::isfinite(peak_total_power(w.x, w.y)))
        throw DivergenceError("non-finite field after propagation");
    return stats;
}

void backpropagate(DualPolWave& w, const LinkConfig& link, int steps_per_span,
                   double xi) {
    link.validate();
    if (steps_per_span < 1) throw ConfigError("dbp steps_per_span must be >= 1");
    const int n = static_cast<int>(w.samples());
    const double gain = link.span_gain_lin();
    const double h = link.span_km / steps_per_span;

    SpanEngine eng(n, w.fs_thz, -link.beta2_ps2_km(), -link.alpha_per_km(),
                   -xi * (8.0 / 9.0) * link.gamma_w_km);

    const double g_field = std::sqrt(gain);
    for (int s = 0; s < link.span_count; ++s) {
        w.x /= g_field;
        w.y /= g_field;
        double pending = 0.0;
        for (int k = 0; k < steps_per_span; ++k) {
            eng.linear(w.x, w.y, pending + 0.5 * h);
            eng.nonlinear(w.x, w.y, h);
            pending = 0.5 * h;
        }
        eng.linear(w.x, w.y, pending);
    }
}

}  // namespace fnlc
