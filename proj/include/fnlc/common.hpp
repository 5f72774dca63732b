#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace fnlc {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatX = Mat<double>;
using VecX = Vec<double>;
using CVec = Eigen::VectorXcd;
using CArr = Eigen::ArrayXcd;
using Arr = Eigen::ArrayXd;
using cplx = std::complex<double>;

// Unit system: time ps, frequency THz, distance km, power W.
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLightKmPerPs = 2.99792458e-7;  // km/ps
inline constexpr double kPlanckJs = 6.62607015e-34;            // J*s

// Thrown when a config file or field fails schema validation.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown on dimension mismatches at module boundaries.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a binary artifact (checkpoint, frame, waveform) is malformed.
struct FramingError : std::runtime_error {
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative routine leaves its stable range (NaN/Inf blowup).
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace fnlc
