#pragma once

#include <cmath>
#include <numbers>

#include "sqzkit/errors.hpp"

namespace sqzkit {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

// Lengths are carried in meters, powers in watts, frequencies in hertz.
namespace units {
inline constexpr double m = 1.0;
inline constexpr double mm = 1e-3;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double W = 1.0;
inline constexpr double mW = 1e-3;
inline constexpr double Hz = 1.0;
inline constexpr double kHz = 1e3;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
}  // namespace units

// Variances are in shot-noise units; decibels follow 10*log10, so
// squeezing is negative.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) {
  if (!(linear > 0.0)) {
    throw DomainError("linear_to_db: value must be positive");
  }
  return 10.0 * std::log10(linear);
}

}  // namespace sqzkit
