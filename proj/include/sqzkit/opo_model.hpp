#pragma once

// Below-threshold OPO squeezing spectrum and its parameter decomposition.
//
//   R-/+ = 1 -/+ C_eff * 4x / ((1 +/- x)^2 + 4 Omega^2)
//
// with C_eff = eta * xi^2 * zeta * rho, x = sqrt(P / P_th) and
// Omega = f / gamma. Variances are linear, in shot-noise units.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqzkit/detail/simplex.hpp"
#include "sqzkit/errors.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit {

struct QuadraturePair {
  double squeezed_variance;      // R-
  double antisqueezed_variance;  // R+

  double squeezing_db() const { return linear_to_db(squeezed_variance); }
  double antisqueezing_db() const { return linear_to_db(antisqueezed_variance); }
};

namespace detail {
inline void require_fraction(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must be in [0,1]");
}
}  // namespace detail

inline double escape_efficiency(double transmission, double round_trip_loss) {
  if (!(transmission >= 0.0 && round_trip_loss >= 0.0)) {
    throw DomainError("escape_efficiency: T and L must be non-negative");
  }
  if (transmission + round_trip_loss <= 0.0) {
    throw DomainError("escape_efficiency: T + L must be positive");
  }
  return transmission / (transmission + round_trip_loss);
}

// Cavity linewidth gamma = c (T + L) / l, in Hz.
inline double cavity_bandwidth(double transmission, double round_trip_loss,
                               double round_trip_length) {
  if (!(round_trip_length > 0.0)) {
    throw DomainError("cavity_bandwidth: round_trip_length must be > 0");
  }
  return kSpeedOfLight * (transmission + round_trip_loss) / round_trip_length;
}

inline double pump_ratio(double pump_power, double threshold_power) {
  if (!(pump_power >= 0.0)) throw DomainError("pump_ratio: pump power must be >= 0");
  if (!(threshold_power > 0.0)) throw DomainError("pump_ratio: threshold must be > 0");
  return std::sqrt(pump_power / threshold_power);
}

inline double effective_efficiency(double quantum_efficiency, double visibility,
                                   double propagation_efficiency, double escape) {
  detail::require_fraction(quantum_efficiency, "quantum_efficiency");
  detail::require_fraction(visibility, "visibility");
  detail::require_fraction(propagation_efficiency, "propagation_efficiency");
  detail::require_fraction(escape, "escape_efficiency");
  return quantum_efficiency * visibility * visibility * propagation_efficiency * escape;
}

namespace detail {
inline void check_spectrum_args(double c_eff, double x) {
  require_fraction(c_eff, "C_eff");
  if (!(x >= 0.0)) throw DomainError("squeezing_spectrum: pump ratio must be >= 0");
  if (x > 1.0) throw ThresholdError("squeezing_spectrum: pump above threshold (x > 1)");
}
}  // namespace detail

// The squeezed quadrature stays finite at threshold, so it can be asked
// for on its own even where the full pair diverges.
inline double squeezed_variance(double c_eff, double x, double omega) {
  detail::check_spectrum_args(c_eff, x);
  return 1.0 - c_eff * 4.0 * x / ((1.0 + x) * (1.0 + x) + 4.0 * omega * omega);
}

inline double antisqueezed_variance(double c_eff, double x, double omega) {
  detail::check_spectrum_args(c_eff, x);
  const double den = (1.0 - x) * (1.0 - x) + 4.0 * omega * omega;
  if (den == 0.0) {
    throw ThresholdError("squeezing_spectrum: antisqueezing diverges at x = 1, Omega = 0");
  }
  return 1.0 + c_eff * 4.0 * x / den;
}

inline QuadraturePair squeezing_spectrum(double c_eff, double x, double omega) {
  return {squeezed_variance(c_eff, x, omega), antisqueezed_variance(c_eff, x, omega)};
}

// Noise seen by a homodyne detector whose LO phase is theta away from the
// squeezed quadrature.
inline double homodyne_trace(const QuadraturePair& pair, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return pair.squeezed_variance * c * c + pair.antisqueezed_variance * s * s;
}

struct OpoParams {
  double quantum_efficiency = 1.0;      // eta
  double visibility = 1.0;              // xi
  double propagation_efficiency = 1.0;  // zeta
  std::optional<double> escape_efficiency_override;  // rho; else T / (T + L)
  double coupler_transmission = 1.0;    // T
  double round_trip_loss = 0.0;         // L
  double round_trip_length = 0.0;       // l, m
  double threshold_power = 0.0;         // P_th, W
  double sideband_frequency = 0.0;      // f, Hz
  std::optional<double> bandwidth_override;  // gamma, Hz

  void validate() const {
    detail::require_fraction(quantum_efficiency, "quantum_efficiency");
    detail::require_fraction(visibility, "visibility");
    detail::require_fraction(propagation_efficiency, "propagation_efficiency");
    detail::require_fraction(coupler_transmission, "coupler_transmission");
    detail::require_fraction(round_trip_loss, "round_trip_loss");
    if (escape_efficiency_override) {
      detail::require_fraction(*escape_efficiency_override, "escape_efficiency");
    }
    if (!(threshold_power > 0.0)) throw DomainError("threshold_power must be > 0");
    if (!(sideband_frequency >= 0.0)) throw DomainError("sideband_frequency must be >= 0");
    if (bandwidth_override && !(*bandwidth_override > 0.0)) {
      throw DomainError("bandwidth must be > 0");
    }
    if (!bandwidth_override && !(round_trip_length > 0.0)) {
      throw DomainError("round_trip_length must be > 0 when no bandwidth is given");
    }
  }

  double escape() const {
    return escape_efficiency_override
               ? *escape_efficiency_override
               : sqzkit::escape_efficiency(coupler_transmission, round_trip_loss);
  }

  double effective() const {
    return effective_efficiency(quantum_efficiency, visibility, propagation_efficiency,
                                escape());
  }

  double bandwidth() const {
    return bandwidth_override
               ? *bandwidth_override
               : cavity_bandwidth(coupler_transmission, round_trip_loss, round_trip_length);
  }

  // Plain frequency ratio, no 2*pi.
  double omega() const { return sideband_frequency / bandwidth(); }

  QuadraturePair spectrum_at(double pump_power) const {
    return squeezing_spectrum(effective(), pump_ratio(pump_power, threshold_power), omega());
  }
};

// ---------------------------------------------------------------------------
// Fitting (C_eff, P_th) to squeezing-versus-pump data.

struct FitPoint {
  double pump_power;  // W
  std::optional<double> squeezing_db;
  std::optional<double> antisqueezing_db;
  double weight = 1.0;
};

struct OpoFit {
  double effective_efficiency;
  double threshold_power;  // W
  double rms_residual_db;
  bool on_boundary;
};

struct FitSettings {
  int grid_efficiency_steps = 40;
  int grid_threshold_steps = 60;
  double max_threshold_factor = 100.0;  // P_th searched in [max P, factor * max P]
  double relative_tolerance = 1e-9;
  int max_restarts = 8;
};

namespace detail {

// Weighted sum of squared dB residuals of the model against the data.
inline double fit_cost(std::span<const FitPoint> data, double c_eff, double p_th,
                       double omega) {
  constexpr double kBad = 1e30;
  double sum = 0.0;
  for (const auto& pt : data) {
    const double x = std::sqrt(pt.pump_power / p_th);
    if (x > 1.0) return kBad;
    if (pt.squeezing_db) {
      const double r = 1.0 - c_eff * 4.0 * x / ((1.0 + x) * (1.0 + x) + 4.0 * omega * omega);
      if (!(r > 0.0)) return kBad;
      const double e = 10.0 * std::log10(r) - *pt.squeezing_db;
      sum += pt.weight * e * e;
    }
    if (pt.antisqueezing_db) {
      const double den = (1.0 - x) * (1.0 - x) + 4.0 * omega * omega;
      if (!(den > 0.0)) return kBad;
      const double r = 1.0 + c_eff * 4.0 * x / den;
      const double e = 10.0 * std::log10(r) - *pt.antisqueezing_db;
      sum += pt.weight * e * e;
    }
  }
  return std::isfinite(sum) ? sum : kBad;
}

}  // namespace detail

// Weighted least squares in dB over both quadratures with f and gamma held
// fixed. A coarse grid over C_eff in (0,1] and P_th in [max P, 100 max P]
// seeds a restarted simplex search.
inline OpoFit fit_opo_curve(std::span<const FitPoint> data, double sideband_frequency,
                            double bandwidth, const FitSettings& settings = {}) {
  if (data.size() < 2) throw FitError("fit_opo_curve: need at least two data points");
  if (!(bandwidth > 0.0)) throw FitError("fit_opo_curve: bandwidth must be > 0");
  if (!(sideband_frequency >= 0.0)) throw FitError("fit_opo_curve: frequency must be >= 0");
  double weight_sum = 0.0;
  for (const auto& pt : data) {
    if (!(pt.pump_power > 0.0)) throw FitError("fit_opo_curve: pump powers must be > 0");
    if (!(pt.weight > 0.0)) throw FitError("fit_opo_curve: weights must be > 0");
    if (!pt.squeezing_db && !pt.antisqueezing_db) {
      throw FitError("fit_opo_curve: data point without any quadrature");
    }
    const int n = int(pt.squeezing_db.has_value()) + int(pt.antisqueezing_db.has_value());
    weight_sum += pt.weight * n;
  }
  const auto [min_it, max_it] = std::minmax_element(
      data.begin(), data.end(),
      [](const FitPoint& a, const FitPoint& b) { return a.pump_power < b.pump_power; });
  const double p_max = max_it->pump_power;
  if (max_it->pump_power - min_it->pump_power <= 1e-12 * p_max) {
    throw FitError("fit_opo_curve: degenerate data, all pump powers are equal");
  }

  const double omega = sideband_frequency / bandwidth;
  const double s_hi = settings.max_threshold_factor;

  // Parameters are (C_eff, P_th / max P); outside the box the cost is
  // evaluated at the clamped point plus a quadratic wall.
  const detail::Objective objective = [&](std::span<const double> p) {
    const double c = std::clamp(p[0], 0.0, 1.0);
    const double s = std::clamp(p[1], 1.0, s_hi);
    const double wall = (p[0] - c) * (p[0] - c) + (p[1] - s) * (p[1] - s);
    return detail::fit_cost(data, c, s * p_max, omega) + 1e3 * wall;
  };

  std::vector<double> best{0.5, 2.0};
  double best_cost = std::numeric_limits<double>::infinity();
  const int nc = settings.grid_efficiency_steps;
  const int ns = settings.grid_threshold_steps;
  for (int i = 1; i <= nc; ++i) {
    const double c = double(i) / nc;
    for (int j = 0; j < ns; ++j) {
      const double s = std::pow(s_hi, double(j) / (ns - 1));
      const std::vector<double> p{c, s};
      const double cost = objective(p);
      if (cost < best_cost) {
        best_cost = cost;
        best = p;
      }
    }
  }

  std::vector<double> step{0.5 / nc, best[1] * 0.1};
  for (int restart = 0; restart <= settings.max_restarts; ++restart) {
    const double tol = settings.relative_tolerance * std::max(1.0, std::abs(best[1]));
    const auto res = detail::minimize_simplex(objective, best, step, tol);
    const bool improved = res.value < best_cost;
    const double moved = std::hypot(res.point[0] - best[0], res.point[1] - best[1]);
    if (improved) {
      best_cost = res.value;
      best = res.point;
    }
    if (!improved || moved <= tol) break;
    step = {std::max(moved, 1e-4), std::max(moved, 1e-4) * best[1]};
  }

  const double c = std::clamp(best[0], 0.0, 1.0);
  const double s = std::clamp(best[1], 1.0, s_hi);
  const double edge = 1e-6;
  OpoFit fit{};
  fit.effective_efficiency = c;
  fit.threshold_power = s * p_max;
  fit.rms_residual_db =
      std::sqrt(detail::fit_cost(data, c, s * p_max, omega) / weight_sum);
  fit.on_boundary = c <= edge || c >= 1.0 - edge || s <= 1.0 + edge || s >= s_hi * (1.0 - edge);
  return fit;
}

}  // namespace sqzkit
