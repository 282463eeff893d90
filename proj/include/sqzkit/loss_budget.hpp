#pragma once

// Loss chains and the inversion of measured quadrature variances back
// through detection, source and cavity-coupling losses.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/opo_model.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit {

enum class StageKind {
  Transmission,  // power transmission, enters as-is
  Visibility,    // mode-overlap visibility, enters squared
};

struct LossStage {
  std::string name;
  double value = 1.0;
  StageKind kind = StageKind::Transmission;
  double uncertainty = 0.0;  // +/- on value, used by sensitivity sweeps

  static LossStage transmission(std::string name, double eta, double uncertainty = 0.0) {
    return {std::move(name), eta, StageKind::Transmission, uncertainty};
  }
  static LossStage visibility(std::string name, double xi) {
    return {std::move(name), xi, StageKind::Visibility, 0.0};
  }

  double efficiency() const {
    if (!(value > 0.0 && value <= 1.0)) {
      throw DomainError("loss stage '" + name + "' must have a value in (0,1]");
    }
    return kind == StageKind::Visibility ? value * value : value;
  }
};

struct LossChain {
  std::vector<LossStage> stages;
  std::optional<double> dark_clearance_db;  // electronic noise below shot noise
};

struct MeasurementRecord {
  std::string setup;
  double squeezing_db = 0.0;
  double antisqueezing_db = 0.0;
  double visibility = 1.0;
  double sideband_frequency = 0.0;  // Hz
  double pump_power = 0.0;          // W

  void validate() const {
    if (!(squeezing_db <= 0.0 && antisqueezing_db >= 0.0)) {
      throw DomainError("measurement '" + setup +
                        "': expected squeezing_db <= 0 <= antisqueezing_db");
    }
    if (!(visibility > 0.0 && visibility <= 1.0)) {
      throw DomainError("measurement '" + setup + "': visibility must be in (0,1]");
    }
  }
};

inline double chain_efficiency(const LossChain& chain) {
  double eta = 1.0;
  for (const auto& stage : chain.stages) eta *= stage.efficiency();
  return eta;
}

// Beam-splitter loss: the signal is attenuated and vacuum fills the rest.
inline double apply_loss(double variance, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("apply_loss: eta must be in [0,1]");
  return eta * variance + (1.0 - eta);
}

inline double unapply_loss(double variance, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("unapply_loss: eta must be in (0,1]");
  if (!(variance > 1.0 - eta)) {
    throw NonphysicalCorrectionError(
        "unapply_loss: variance does not exceed the loss floor 1 - eta");
  }
  return (variance - (1.0 - eta)) / eta;
}

// Removes electronic noise sitting clearance_db below shot noise and
// renormalizes to the dark-free shot noise.
inline double dark_noise_correct(double measured, double clearance_db) {
  if (std::isinf(clearance_db) && clearance_db > 0.0) return measured;
  if (!(clearance_db >= 0.0)) {
    throw DomainError("dark_noise_correct: clearance must be >= 0 dB");
  }
  const double dark = db_to_linear(-clearance_db);
  if (!(measured > dark)) {
    throw NonphysicalCorrectionError("dark_noise_correct: signal at or below dark noise");
  }
  return (measured - dark) / (1.0 - dark);
}

enum class Quadrature { Squeezed, Antisqueezed };

inline const char* to_string(Quadrature q) {
  return q == Quadrature::Squeezed ? "squeezed" : "antisqueezed";
}

// Nonphysical correction with the tier (1..3) and quadrature it arose in.
class TierCorrectionError : public NonphysicalCorrectionError {
 public:
  TierCorrectionError(int tier, Quadrature quadrature, const std::string& what)
      : NonphysicalCorrectionError("tier " + std::to_string(tier) + ", " +
                                   to_string(quadrature) + " quadrature: " + what),
        tier_(tier),
        quadrature_(quadrature) {}

  int tier() const { return tier_; }
  Quadrature quadrature() const { return quadrature_; }

 private:
  int tier_;
  Quadrature quadrature_;
};

struct CorrectionTiers {
  QuadraturePair measured;
  // [0] detection corrected, [1] + source losses, [2] + cavity coupling.
  std::array<QuadraturePair, 3> tiers;
};

// The record's visibility joins the detection chain as xi^2, so the
// detection chain itself must not carry a visibility stage.
inline CorrectionTiers correction_pipeline(const MeasurementRecord& record,
                                           const LossChain& detection,
                                           const LossChain& source,
                                           const LossChain& coupling) {
  record.validate();
  for (const auto& st : detection.stages) {
    if (st.kind == StageKind::Visibility) {
      throw DomainError("correction_pipeline: visibility is taken from the record, "
                        "not from the detection chain");
    }
  }
  LossChain det = detection;
  det.stages.push_back(LossStage::visibility("visibility", record.visibility));
  const double eta_det = chain_efficiency(det);
  const double eta_src = chain_efficiency(source);
  const double eta_cpl = chain_efficiency(coupling);

  auto correct = [&](double measured_db, Quadrature q) {
    std::array<double, 3> out{};
    int tier = 1;
    try {
      double v = db_to_linear(measured_db);
      if (detection.dark_clearance_db) v = dark_noise_correct(v, *detection.dark_clearance_db);
      out[0] = v = unapply_loss(v, eta_det);
      tier = 2;
      out[1] = v = unapply_loss(v, eta_src);
      tier = 3;
      out[2] = unapply_loss(v, eta_cpl);
    } catch (const NonphysicalCorrectionError& e) {
      throw TierCorrectionError(tier, q, e.what());
    }
    return out;
  };

  const auto sq = correct(record.squeezing_db, Quadrature::Squeezed);
  const auto anti = correct(record.antisqueezing_db, Quadrature::Antisqueezed);
  CorrectionTiers result{};
  result.measured = {db_to_linear(record.squeezing_db), db_to_linear(record.antisqueezing_db)};
  for (std::size_t i = 0; i < 3; ++i) result.tiers[i] = {sq[i], anti[i]};
  return result;
}

struct TierRange {
  double squeezing_db_min, squeezing_db_max;
  double antisqueezing_db_min, antisqueezing_db_max;
};

// Re-runs the pipeline at every corner of the stage uncertainty box
// (value +/- uncertainty, clipped to (0,1]). The corrections are monotone
// in each efficiency, so the corners bound the interval.
inline std::array<TierRange, 3> correction_sensitivity(const MeasurementRecord& record,
                                                       const LossChain& detection,
                                                       const LossChain& source,
                                                       const LossChain& coupling) {
  std::array<LossChain, 3> chains{detection, source, coupling};
  std::vector<std::pair<std::size_t, std::size_t>> uncertain;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t s = 0; s < chains[c].stages.size(); ++s) {
      if (chains[c].stages[s].uncertainty > 0.0) uncertain.emplace_back(c, s);
    }
  }
  if (uncertain.size() > 16) throw DomainError("correction_sensitivity: too many uncertain stages");

  std::array<TierRange, 3> range{};
  constexpr double inf = std::numeric_limits<double>::infinity();
  range.fill({inf, -inf, inf, -inf});
  const std::size_t corners = std::size_t{1} << uncertain.size();
  for (std::size_t mask = 0; mask < corners; ++mask) {
    auto trial = chains;
    for (std::size_t k = 0; k < uncertain.size(); ++k) {
      auto& st = trial[uncertain[k].first].stages[uncertain[k].second];
      const double delta = (mask >> k) & 1U ? st.uncertainty : -st.uncertainty;
      st.value = std::clamp(st.value + delta, 1e-12, 1.0);
    }
    const auto tiers = correction_pipeline(record, trial[0], trial[1], trial[2]);
    for (std::size_t t = 0; t < 3; ++t) {
      const double s = tiers.tiers[t].squeezing_db();
      const double a = tiers.tiers[t].antisqueezing_db();
      range[t].squeezing_db_min = std::min(range[t].squeezing_db_min, s);
      range[t].squeezing_db_max = std::max(range[t].squeezing_db_max, s);
      range[t].antisqueezing_db_min = std::min(range[t].antisqueezing_db_min, a);
      range[t].antisqueezing_db_max = std::max(range[t].antisqueezing_db_max, a);
    }
  }
  return range;
}

}  // namespace sqzkit
