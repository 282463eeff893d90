#pragma once

// Command implementations behind the sqzkit executable. Each command turns
// a parsed scenario into one or more named result tables plus an exit code:
// 0 success, 1 reproduction failure, 2 input error, 3 computation error.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sqzkit/gaussian_network.hpp"
#include "sqzkit/gaussian_optics.hpp"
#include "sqzkit/io/result_table.hpp"
#include "sqzkit/io/scenario.hpp"
#include "sqzkit/loss_budget.hpp"
#include "sqzkit/opo_model.hpp"
#include "sqzkit/reproduce.hpp"

namespace sqzkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitReproductionFailure = 1,
  kExitInputError = 2,
  kExitComputationError = 3,
};

struct NamedTable {
  std::string name;  // file stem, e.g. "cavity_design"
  io::ResultTable table;
};

struct CommandOutput {
  std::vector<NamedTable> tables;
  std::vector<std::string> warnings;
  int exit_code = kExitOk;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {
template <typename T>
const T& require_section(const std::optional<T>& section, const char* name) {
  if (!section) throw InputError(std::string("scenario has no '") + name + "' section");
  return *section;
}
}  // namespace detail

// ---------------------------------------------------------------------------

inline CommandOutput cmd_cavity_design(const io::Scenario& scenario) {
  const auto& c = detail::require_section(scenario.cavity, "cavity");
  const double rc = c.mirror_curvature;
  const double lambda = c.wavelength;

  double waist = 0.0;
  double length = 0.0;
  double near_planar = kNaN;
  if (c.target_waist) {
    waist = *c.target_waist;
    const auto roots = cavity_length_for_waist(waist, rc, lambda);
    length = roots.near_hemispherical;
    near_planar = roots.near_planar;
  } else {
    length = *c.cavity_length;
    waist = hemispherical_waist(CavityGeometry(rc, length), lambda);
  }

  const double transmission = c.coupler_transmission.value_or(1.0);
  const CavityGeometry cavity(rc, length, transmission, c.round_trip_loss,
                              c.round_trip_length.value_or(0.0));
  const GaussianBeam mode(waist, lambda);
  const GaussianBeam in_crystal = mode.in_medium(c.crystal_index);
  const double overlap =
      c.fiber_waist ? gaussian_overlap(GaussianBeam(*c.fiber_waist, lambda), mode, kFlat, kFlat,
                                       c.mode_purity)
                    : kNaN;
  const double bandwidth =
      c.coupler_transmission
          ? cavity_bandwidth(transmission, c.round_trip_loss, cavity.round_trip_length)
          : kNaN;

  io::ResultTable t({{"waist_um", "um"},
                     {"cavity_length_mm", "mm"},
                     {"near_planar_length_mm", "mm"},
                     {"hemispherical_gap_nm", "nm"},
                     {"rayleigh_range_um", "um"},
                     {"confocal_crystal_length_um", "um"},
                     {"mirror_spot_um", "um"},
                     {"paraxial_fom", "1"},
                     {"fiber_overlap", "1"},
                     {"bandwidth_hz", "Hz"}});
  t.add_row({waist / units::um, length / units::mm, near_planar / units::mm,
             (rc - length) / units::nm, rayleigh_range(mode) / units::um,
             confocal_crystal_length(in_crystal) / units::um,
             beam_radius_at(mode, length) / units::um, paraxial_figure_of_merit(cavity, mode),
             overlap, bandwidth});
  return {{{"cavity_design", std::move(t)}}, {}, kExitOk};
}

// ---------------------------------------------------------------------------

namespace detail {
inline double opo_effective_efficiency(const io::OpoSection& o) {
  if (o.effective_efficiency) {
    sqzkit::detail::require_fraction(*o.effective_efficiency, "effective_efficiency");
    return *o.effective_efficiency;
  }
  const double rho = o.escape_efficiency
                         ? *o.escape_efficiency
                         : escape_efficiency(o.coupler_transmission.value_or(1.0),
                                             o.round_trip_loss.value_or(0.0));
  return effective_efficiency(o.quantum_efficiency.value_or(1.0), o.visibility.value_or(1.0),
                              o.propagation_efficiency.value_or(1.0), rho);
}

inline double opo_bandwidth(const io::OpoSection& o) {
  if (o.bandwidth) return *o.bandwidth;
  if (!o.coupler_transmission || !o.round_trip_length) {
    throw InputError("opo: give 'bandwidth' or both 'coupler_transmission' and "
                     "'round_trip_length'");
  }
  return cavity_bandwidth(*o.coupler_transmission, o.round_trip_loss.value_or(0.0),
                          *o.round_trip_length);
}
}  // namespace detail

inline CommandOutput cmd_opo_curve(const io::Scenario& scenario) {
  const auto& o = detail::require_section(scenario.opo, "opo");
  if (!o.threshold_power) throw InputError("opo: 'threshold_power' is required");
  if (o.pump_powers.empty() && !o.trace) {
    throw InputError("opo: give 'pump_powers', 'pump_sweep' or 'trace'");
  }
  const double c_eff = detail::opo_effective_efficiency(o);
  const double omega = o.sideband_frequency / detail::opo_bandwidth(o);
  const double p_th = *o.threshold_power;

  CommandOutput out;
  io::ResultTable t({{"pump_power_mw", "mW"},
                     {"pump_ratio", "1"},
                     {"squeezing_db", "dB"},
                     {"antisqueezing_db", "dB"},
                     {"flag", ""}});
  int flagged = 0;
  for (double p : o.pump_powers) {
    const double x = pump_ratio(p, p_th);
    if (x > 1.0) {
      t.add_row({p / units::mW, x, kNaN, kNaN, std::string("above_threshold")});
      ++flagged;
      continue;
    }
    const double sq = linear_to_db(squeezed_variance(c_eff, x, omega));
    double anti = kInf;
    try {
      anti = linear_to_db(antisqueezed_variance(c_eff, x, omega));
    } catch (const ThresholdError&) {
    }
    const bool at_threshold = x == 1.0;
    flagged += at_threshold;
    t.add_row({p / units::mW, x, sq, anti, std::string(at_threshold ? "threshold" : "ok")});
  }
  if (flagged) {
    out.warnings.push_back(std::to_string(flagged) + " pump point(s) at or above threshold");
  }
  if (!o.pump_powers.empty()) out.tables.push_back({"opo_curve", std::move(t)});

  if (o.trace) {
    const auto pair = squeezing_spectrum(c_eff, pump_ratio(o.trace->pump_power, p_th), omega);
    io::ResultTable tr({{"lo_phase_deg", "deg"}, {"variance", "SNU"}, {"variance_db", "dB"}});
    for (int k = 0; k < o.trace->points; ++k) {
      const double deg = 360.0 * k / (o.trace->points - 1);
      const double v = homodyne_trace(pair, deg * kPi / 180.0);
      tr.add_row({deg, v, linear_to_db(v)});
    }
    out.tables.push_back({"opo_trace", std::move(tr)});
  }
  return out;
}

// ---------------------------------------------------------------------------

inline CommandOutput cmd_fit(const io::Scenario& scenario, const std::vector<FitPoint>& data) {
  const auto& o = detail::require_section(scenario.opo, "opo");
  if (!o.bandwidth) throw InputError("fit: opo 'bandwidth' must be given explicitly");
  const auto fit = fit_opo_curve(data, o.sideband_frequency, *o.bandwidth);
  const double omega = o.sideband_frequency / *o.bandwidth;

  CommandOutput out;
  io::ResultTable summary({{"effective_efficiency", "1"},
                           {"threshold_power_mw", "mW"},
                           {"rms_residual_db", "dB"},
                           {"points", "1"},
                           {"flag", ""}});
  summary.add_row({fit.effective_efficiency, fit.threshold_power / units::mW,
                   fit.rms_residual_db, static_cast<long long>(data.size()),
                   std::string(fit.on_boundary ? "boundary" : "ok")});
  if (fit.on_boundary) out.warnings.push_back("fit: best parameters lie on the search boundary");

  double p_max = 0.0;
  for (const auto& pt : data) p_max = std::max(p_max, pt.pump_power);
  io::ResultTable curve({{"pump_power_mw", "mW"}, {"squeezing_db", "dB"}, {"antisqueezing_db", "dB"}});
  constexpr int kSamples = 41;
  for (int k = 0; k < kSamples; ++k) {
    const double p = p_max * k / (kSamples - 1);
    const auto pair =
        squeezing_spectrum(fit.effective_efficiency, pump_ratio(p, fit.threshold_power), omega);
    curve.add_row({p / units::mW, pair.squeezing_db(), pair.antisqueezing_db()});
  }
  out.tables.push_back({"fit", std::move(summary)});
  out.tables.push_back({"fit_curve", std::move(curve)});
  return out;
}

// ---------------------------------------------------------------------------

inline CommandOutput cmd_loss_correct(const io::Scenario& scenario, bool sensitivity = false) {
  const auto& l = detail::require_section(scenario.losses, "losses");
  std::vector<io::Column> cols{{"setup", ""},
                               {"tier", "1"},
                               {"squeezing_db", "dB"},
                               {"antisqueezing_db", "dB"},
                               {"flag", ""}};
  if (sensitivity) {
    cols.insert(cols.end(), {{"squeezing_db_min", "dB"},
                             {"squeezing_db_max", "dB"},
                             {"antisqueezing_db_min", "dB"},
                             {"antisqueezing_db_max", "dB"}});
  }
  io::ResultTable t(cols);
  CommandOutput out;
  int failed = 0;
  for (const auto& s : l.setups) {
    auto row = [&](long long tier, double sq, double anti, std::string flag) {
      std::vector<io::Cell> r{s.record.setup, tier, sq, anti, std::move(flag)};
      if (sensitivity) r.insert(r.end(), {kNaN, kNaN, kNaN, kNaN});
      return r;
    };
    auto measured = row(0, s.record.squeezing_db, s.record.antisqueezing_db, "measured");
    if (sensitivity) {
      measured[5] = measured[6] = s.record.squeezing_db;
      measured[7] = measured[8] = s.record.antisqueezing_db;
    }
    t.add_row(std::move(measured));
    try {
      const auto tiers = correction_pipeline(s.record, l.detection, s.source, s.coupling);
      std::array<TierRange, 3> range{};
      if (sensitivity) range = correction_sensitivity(s.record, l.detection, s.source, s.coupling);
      for (std::size_t k = 0; k < 3; ++k) {
        auto r = row(static_cast<long long>(k + 1), tiers.tiers[k].squeezing_db(),
                     tiers.tiers[k].antisqueezing_db(), "ok");
        if (sensitivity) {
          r[5] = range[k].squeezing_db_min;
          r[6] = range[k].squeezing_db_max;
          r[7] = range[k].antisqueezing_db_min;
          r[8] = range[k].antisqueezing_db_max;
        }
        t.add_row(std::move(r));
      }
    } catch (const TierCorrectionError& e) {
      ++failed;
      std::string flag = std::string("nonphysical_") + to_string(e.quadrature());
      t.add_row(row(e.tier(), kNaN, kNaN, flag));
      out.warnings.push_back(s.record.setup + ": " + e.what());
    }
  }
  if (failed == static_cast<int>(l.setups.size())) out.exit_code = kExitComputationError;
  out.tables.push_back({"loss_correct", std::move(t)});
  return out;
}

// ---------------------------------------------------------------------------

inline CommandOutput cmd_network(const io::Scenario& scenario) {
  const auto& net = detail::require_section(scenario.network, "network");
  const auto result = run_scenario(net);

  io::ResultTable hom({{"mode", "1"}, {"lo_phase_rad", "rad"}, {"variance", "SNU"}, {"variance_db", "dB"}});
  for (std::size_t k = 0; k < net.measurements.size(); ++k) {
    const double v = result.homodyne[k];
    hom.add_row({static_cast<long long>(net.measurements[k].mode), net.measurements[k].angle, v,
                 linear_to_db(v)});
  }
  io::ResultTable duan({{"mode_a", "1"}, {"mode_b", "1"}, {"duan", "SNU"}, {"entangled", ""}});
  for (const auto& d : result.duan) {
    duan.add_row({static_cast<long long>(d.mode_a), static_cast<long long>(d.mode_b), d.value,
                  std::string(d.entangled ? "yes" : "no")});
  }
  const auto& cov = result.state.covariance();
  std::vector<io::Column> cols;
  for (int m = 0; m < result.state.mode_count(); ++m) {
    cols.push_back({"x" + std::to_string(m + 1), "SNU"});
    cols.push_back({"p" + std::to_string(m + 1), "SNU"});
  }
  io::ResultTable covariance(cols);
  for (Eigen::Index r = 0; r < cov.rows(); ++r) {
    std::vector<io::Cell> row;
    for (Eigen::Index c = 0; c < cov.cols(); ++c) row.emplace_back(cov(r, c));
    covariance.add_row(std::move(row));
  }
  CommandOutput out;
  out.tables.push_back({"network_homodyne", std::move(hom)});
  out.tables.push_back({"network_duan", std::move(duan)});
  out.tables.push_back({"covariance", std::move(covariance)});
  return out;
}

// ---------------------------------------------------------------------------

inline CommandOutput cmd_reproduce_paper(const reference::LossDataset& ds = reference::dataset()) {
  io::ResultTable t({{"check", ""},
                     {"quantity", ""},
                     {"unit", ""},
                     {"published", ""},
                     {"computed", ""},
                     {"tolerance", ""},
                     {"status", ""}});
  CommandOutput out;
  for (const auto& row : reproduction_checks(ds)) {
    const bool ok = row.pass();
    t.add_row({row.check, row.quantity, row.unit, row.published, row.computed, row.tolerance,
               std::string(ok ? "PASS" : "FAIL")});
    if (!ok) {
      out.exit_code = kExitReproductionFailure;
      out.warnings.push_back("FAIL " + row.check + " " + row.quantity + ": published " +
                             io::format_number(row.published) + ", computed " +
                             io::format_number(row.computed) + ", tolerance " +
                             io::format_number(row.tolerance));
    }
  }
  out.tables.push_back({"reproduce_paper", std::move(t)});
  return out;
}

}  // namespace sqzkit::cli
