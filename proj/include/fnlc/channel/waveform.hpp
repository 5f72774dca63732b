#pragma once

#include <string>

#include "fnlc/common.hpp"

namespace fnlc {

// Dual-polarization sampled field. Field units sqrt(W), sample rate THz.
struct DualPolWave {
    CArr x, y;
    double fs_thz = 0.0;

    Eigen::Index samples() const { return x.size(); }

    // Mean total power across both polarizations, W.
    double mean_power_w() const {
        return (x.abs2().sum() + y.abs2().sum()) / static_cast<double>(x.size());
    }

    double peak_power_w() const { return (x.abs2() + y.abs2()).maxCoeff(); }
};

void save_wave(const std::string& path, const DualPolWave& w);
DualPolWave load_wave(const std::string& path);

}  // namespace fnlc
