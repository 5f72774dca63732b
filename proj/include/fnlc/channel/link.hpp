#pragma once

#include <cstdint>

#include "fnlc/common.hpp"

namespace fnlc {

enum class Modulation { Qam16, Qam64 };

const char* to_string(Modulation m);
Modulation modulation_from_string(const std::string& s);

// Fiber plant description. Units: km, dB, ps, nm, W.
struct LinkConfig {
    int span_count = 8;
    double span_km = 80.0;
    double atten_db_km = 0.2;
    double dispersion_ps_nm_km = 17.0;
    double gamma_w_km = 1.3;
    double noise_figure_db = 5.0;
    double wavelength_nm = 1550.0;
    double max_nl_phase_deg = 0.05;
    bool ase_enabled = true;

    double total_km() const { return span_count * span_km; }

    // Power attenuation coefficient, 1/km (natural log).
    double alpha_per_km() const { return atten_db_km * std::log(10.0) / 10.0; }

    // Group-velocity dispersion from D, ps^2/km. Negative (anomalous) for
    // standard fiber at 1550 nm.
    double beta2_ps2_km() const {
        const double c_nm_per_ps = kSpeedOfLightKmPerPs * 1e12;
        return -dispersion_ps_nm_km * wavelength_nm * wavelength_nm /
               (2.0 * kPi * c_nm_per_ps);
    }

    // Amplifier power gain restoring one span loss exactly.
    double span_gain_lin() const { return std::exp(alpha_per_km() * span_km); }

    double carrier_thz() const { return kSpeedOfLightKmPerPs * 1e12 / wavelength_nm; }

    void validate() const;
};

// Transmitter description. One frame of symbols per generation call.
struct TxConfig {
    double baud_gbaud = 32.0;
    Modulation modulation = Modulation::Qam16;
    double rolloff = 1.0 / 16.0;
    int oversampling = 2;
    double launch_dbm = 2.0;
    double pre_cd_fraction = 0.5;
    int symbol_count = 1 << 15;
    std::uint64_t seed = 1;

    double baud_thz() const { return baud_gbaud * 1e-3; }
    double sample_rate_thz() const { return baud_thz() * oversampling; }

    void validate() const;
};

}  // namespace fnlc
