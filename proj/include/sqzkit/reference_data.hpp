#pragma once

// Built-in dataset "paper-2017-fiber-opo": three fiber-coupled OPO
// front-ends (standard fiber SF, photonic-crystal fiber PCF, tapered
// fiber TF), their loss figures, measured quadratures and the published
// corrected values they should reduce to.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sqzkit/loss_budget.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::reference {

inline constexpr const char* kDatasetName = "paper-2017-fiber-opo";

inline constexpr double kWavelength = 1064.0 * units::nm;
inline constexpr double kMirrorCurvature = 5.0 * units::mm;
inline constexpr double kDarkClearanceDb = 8.0;

struct SetupLosses {
  MeasurementRecord record;
  LossChain source;
  LossChain coupling;
};

struct DbPair {
  double squeezing_db;
  double antisqueezing_db;
};

struct PublishedCorrections {
  std::string setup;
  std::array<std::optional<DbPair>, 3> tiers;
};

struct LossDataset {
  std::string name;
  LossChain detection;
  std::vector<SetupLosses> setups;
  std::vector<PublishedCorrections> published;
};

inline LossChain detection_chain() {
  LossChain chain;
  chain.stages = {
      LossStage::transmission("quantum_efficiency", 0.92),
      LossStage::transmission("fiber_exit", 0.96),
      LossStage::transmission("homodyne_optics", 0.98),
  };
  chain.dark_clearance_db = kDarkClearanceDb;
  return chain;
}

inline LossDataset dataset() {
  LossDataset ds;
  ds.name = kDatasetName;
  ds.detection = detection_chain();

  ds.setups.push_back(
      {{"SF", -0.56, 1.05, 0.96, 3.0 * units::MHz, 70.0 * units::mW},
       {{LossStage::transmission("crystal_reflection", 1.00, 0.02)}, std::nullopt},
       {{LossStage::transmission("cavity_coupling", 0.60)}, std::nullopt}});
  ds.setups.push_back(
      {{"PCF", -0.90, 1.8, 0.92, 3.0 * units::MHz, 100.0 * units::mW},
       {{LossStage::transmission("crystal_reflection", 0.88, 0.02)}, std::nullopt},
       {{LossStage::transmission("cavity_coupling", 0.78)}, std::nullopt}});
  ds.setups.push_back(
      {{"TF", -1.0, 3.5, 0.98, 5.0 * units::MHz, 15.0 * units::mW},
       {{LossStage::transmission("splice", 0.88),
         LossStage::transmission("crystal_reflection", 0.60, 0.02)},
        std::nullopt},
       {{LossStage::transmission("cavity_coupling", 0.79)}, std::nullopt}});

  // No SF tier-2 value is published: its crystal reflection loss is zero.
  ds.published = {
      {"SF", {DbPair{-0.85, 1.5}, std::nullopt, DbPair{-1.6, 2.25}}},
      {"PCF", {DbPair{-1.6, 2.6}, DbPair{-1.8, 2.9}, DbPair{-2.5, 3.5}}},
      {"TF", {DbPair{-1.5, 4.4}, DbPair{-3.5, 6.4}, DbPair{-5.3, 7.2}}},
  };
  return ds;
}

// Cavity waists set by each fiber's mode and the fiber-to-cavity coupling
// estimated from transmission-peak areas. The couplings are measurements,
// shipped for reference only.
struct FiberReference {
  const char* setup;
  double cavity_waist;
  double measured_coupling;
};

inline constexpr std::array<FiberReference, 3> kFibers{{
    {"SF", 3.1 * units::um, 0.60},
    {"PCF", 7.5 * units::um, 0.88},
    {"TF", 6.5 * units::um, 0.89},
}};

// Worked example for the tapered-fiber OPO, which has a measured threshold.
struct WorkedExample {
  double coupler_transmission = 0.85;
  double round_trip_loss = 0.01;
  double round_trip_length = 5.0 * units::mm;
  double visibility = 0.98;
  double quantum_efficiency = 0.92;
  double propagation_efficiency = 0.39;
  double pump_power = 15.0 * units::mW;
  double threshold_power = 90.0 * units::mW;
  double sideband_frequency = 5.0 * units::MHz;
  DbPair published{-1.4, 4.0};
};

// Squeezing-versus-pump curves drawn through the SF and PCF data.
struct CurveFitReference {
  const char* setup;
  double effective_efficiency;
  double bandwidth;
  double sideband_frequency;
  double threshold_power;
  double pump_power;
  double measured_squeezing_db;
};

inline constexpr std::array<CurveFitReference, 2> kCurveFits{{
    {"SF", 0.2, 800.0 * units::MHz, 3.0 * units::MHz, 1200.0 * units::mW, 70.0 * units::mW,
     -0.56},
    {"PCF", 0.2, 800.0 * units::MHz, 3.0 * units::MHz, 380.0 * units::mW, 100.0 * units::mW,
     -0.90},
}};

// TF propagation efficiency and the stages it is built from.
inline constexpr double kTfPropagationEfficiency = 0.39;
inline LossChain tf_propagation_chain() {
  return {{LossStage::transmission("splice", 0.88),
           LossStage::transmission("crystal_reflection", 0.60),
           LossStage::transmission("cavity_coupling", 0.79),
           LossStage::transmission("fiber_exit", 0.96),
           LossStage::transmission("homodyne_optics", 0.98)},
          std::nullopt};
}

}  // namespace sqzkit::reference
