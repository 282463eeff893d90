#pragma once

// Side-by-side comparison of published figures with what the toolkit
// computes from the built-in dataset.

#include <cmath>
#include <string>
#include <vector>

#include "sqzkit/gaussian_network.hpp"
#include "sqzkit/gaussian_optics.hpp"
#include "sqzkit/loss_budget.hpp"
#include "sqzkit/opo_model.hpp"
#include "sqzkit/reference_data.hpp"

namespace sqzkit {

struct CheckRow {
  std::string check;
  std::string quantity;
  std::string unit;
  double published;
  double computed;
  double tolerance;

  bool pass() const { return std::abs(computed - published) <= tolerance; }
};

namespace tolerance {
inline constexpr double kCorrectionTierDb = 0.15;
inline constexpr double kWorkedExampleDb = 0.1;
inline constexpr double kPropagationEfficiency = 0.01;
inline constexpr double kCurveFitDb = 0.3;
inline constexpr double kLossLemmaDb = 0.01;
inline constexpr double kCavityLengthM = 1e-9;
inline constexpr double kMirrorSpotM = 1e-6;
}  // namespace tolerance

// Cavity length whose eigenmode waist best matches `target`, found by
// walking hemispherical_waist over d on successively finer grids toward
// the curved mirror.
inline double scan_cavity_length(double target_waist, double rc, double wavelength) {
  auto miss = [&](double d) {
    return std::abs(hemispherical_waist(CavityGeometry(rc, d), wavelength) - target_waist);
  };
  double lo = 0.5 * rc;
  double hi = rc;
  double best = lo;
  for (double step = 1e-6 * rc; step >= 1e-14; step /= 100.0) {
    double best_miss = miss(best);
    for (double d = lo; d < hi; d += step) {
      const double m = miss(d);
      if (m < best_miss) {
        best_miss = m;
        best = d;
      }
    }
    lo = std::max(0.5 * rc, best - step);
    hi = std::min(rc, best + step);
  }
  return best;
}

inline std::vector<CheckRow> reproduction_checks(
    const reference::LossDataset& ds = reference::dataset()) {
  std::vector<CheckRow> rows;

  // Correction tiers for each setup.
  for (const auto& setup : ds.setups) {
    const auto tiers =
        correction_pipeline(setup.record, ds.detection, setup.source, setup.coupling);
    for (const auto& pub : ds.published) {
      if (pub.setup != setup.record.setup) continue;
      for (std::size_t t = 0; t < 3; ++t) {
        if (!pub.tiers[t]) continue;
        const std::string name = "tier" + std::to_string(t + 1) + " " + pub.setup;
        rows.push_back({name, "squeezing", "dB", pub.tiers[t]->squeezing_db,
                        tiers.tiers[t].squeezing_db(), tolerance::kCorrectionTierDb});
        rows.push_back({name, "antisqueezing", "dB", pub.tiers[t]->antisqueezing_db,
                        tiers.tiers[t].antisqueezing_db(), tolerance::kCorrectionTierDb});
      }
    }
  }

  // OPO model worked example.
  {
    const reference::WorkedExample ex;
    OpoParams p;
    p.quantum_efficiency = ex.quantum_efficiency;
    p.visibility = ex.visibility;
    p.propagation_efficiency = ex.propagation_efficiency;
    p.coupler_transmission = ex.coupler_transmission;
    p.round_trip_loss = ex.round_trip_loss;
    p.round_trip_length = ex.round_trip_length;
    p.threshold_power = ex.threshold_power;
    p.sideband_frequency = ex.sideband_frequency;
    const auto pair = p.spectrum_at(ex.pump_power);
    rows.push_back({"worked example TF", "squeezing", "dB", ex.published.squeezing_db,
                    pair.squeezing_db(), tolerance::kWorkedExampleDb});
    rows.push_back({"worked example TF", "antisqueezing", "dB", ex.published.antisqueezing_db,
                    pair.antisqueezing_db(), tolerance::kWorkedExampleDb});
  }

  rows.push_back({"propagation efficiency TF", "zeta", "1",
                  reference::kTfPropagationEfficiency,
                  chain_efficiency(reference::tf_propagation_chain()),
                  tolerance::kPropagationEfficiency});

  for (const auto& fit : reference::kCurveFits) {
    const double x = pump_ratio(fit.pump_power, fit.threshold_power);
    const double r = squeezed_variance(fit.effective_efficiency, x,
                                       fit.sideband_frequency / fit.bandwidth);
    rows.push_back({std::string("curve fit ") + fit.setup, "squeezing", "dB",
                    fit.measured_squeezing_db, linear_to_db(r), tolerance::kCurveFitDb});
  }

  {
    const auto lossy = apply_loss_channel(squeezed_vacuum(1e-9, 1e9), 0, 0.5);
    rows.push_back({"half loss on infinite squeezing", "squeezing", "dB", -3.01,
                    linear_to_db(homodyne_variance(lossy, 0, 0.0)), tolerance::kLossLemmaDb});
  }

  {
    const auto& sf = reference::kFibers[0];
    const double rc = reference::kMirrorCurvature;
    const double lambda = reference::kWavelength;
    const double scanned = scan_cavity_length(sf.cavity_waist, rc, lambda);
    const double solved = cavity_length_for_waist(sf.cavity_waist, rc, lambda).near_hemispherical;
    rows.push_back({"cavity length SF", "length vs scan", "m", scanned, solved,
                    tolerance::kCavityLengthM});
    const GaussianBeam mode(hemispherical_waist(CavityGeometry(rc, scanned), lambda), lambda);
    rows.push_back({"mirror spot SF", "spot radius", "m", 546e-6, beam_radius_at(mode, scanned),
                    tolerance::kMirrorSpotM});
  }
  return rows;
}

}  // namespace sqzkit
