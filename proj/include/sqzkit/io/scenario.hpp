#pragma once

// Scenario files are JSON. Every dimensioned key carries its unit as a
// suffix (cavity_length_mm, pump_power_mw, ...); keys without a known
// suffix, and any unknown key, are rejected.

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/gaussian_network.hpp"
#include "sqzkit/loss_budget.hpp"
#include "sqzkit/opo_model.hpp"
#include "sqzkit/reference_data.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::io {

using nlohmann::json;

enum class Dimension { Length, Power, Frequency, Angle };

inline const std::vector<std::pair<std::string, double>>& unit_suffixes(Dimension d) {
  static const std::vector<std::pair<std::string, double>> length{
      {"_m", units::m}, {"_mm", units::mm}, {"_um", units::um}, {"_nm", units::nm}};
  static const std::vector<std::pair<std::string, double>> power{{"_w", units::W},
                                                                 {"_mw", units::mW}};
  static const std::vector<std::pair<std::string, double>> frequency{
      {"_hz", units::Hz}, {"_khz", units::kHz}, {"_mhz", units::MHz}, {"_ghz", units::GHz}};
  static const std::vector<std::pair<std::string, double>> angle{{"_rad", 1.0},
                                                                 {"_deg", kPi / 180.0}};
  switch (d) {
    case Dimension::Length: return length;
    case Dimension::Power: return power;
    case Dimension::Frequency: return frequency;
    case Dimension::Angle: return angle;
  }
  return length;
}

// Reads one JSON object, remembering which keys were consumed so that
// finish() can reject the rest.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  // Value of `name` with any suffix of the dimension, converted to SI.
  std::optional<double> optional_quantity(const std::string& name, Dimension dim) {
    std::optional<double> out;
    std::string found;
    for (const auto& [suffix, factor] : unit_suffixes(dim)) {
      const std::string key = name + suffix;
      if (!obj_.contains(key)) continue;
      if (out) fail("both '" + found + "' and '" + key + "' given");
      out = number_at(key) * factor;
      found = key;
    }
    return out;
  }

  double quantity(const std::string& name, Dimension dim) {
    auto v = optional_quantity(name, dim);
    if (!v) fail("missing '" + name + "' with a unit suffix (" + suffix_list(dim) + ")");
    return *v;
  }

  std::vector<double> quantity_list(const std::string& name, Dimension dim) {
    std::optional<std::vector<double>> out;
    for (const auto& [suffix, factor] : unit_suffixes(dim)) {
      const std::string key = name + suffix;
      if (!obj_.contains(key)) continue;
      if (out) fail("'" + name + "' given with more than one unit");
      used_.insert(key);
      const auto& arr = obj_.at(key);
      if (!arr.is_array()) fail("'" + key + "' must be an array");
      std::vector<double> vals;
      for (const auto& v : arr) {
        if (!v.is_number()) fail("'" + key + "' must hold numbers");
        vals.push_back(v.get<double>() * factor);
      }
      out = std::move(vals);
    }
    return out.value_or(std::vector<double>{});
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    return number_at(key);
  }

  double number(const std::string& key) {
    if (!obj_.contains(key)) fail("missing '" + key + "'");
    return number_at(key);
  }

  int integer(const std::string& key) {
    if (!obj_.contains(key)) fail("missing '" + key + "'");
    used_.insert(key);
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<int>();
  }

  std::optional<std::string> optional_string(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    used_.insert(key);
    const auto& v = obj_.at(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key) {
    auto v = optional_string(key);
    if (!v) fail("missing '" + key + "'");
    return *v;
  }

  const json* child(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  const json& array(const std::string& key) {
    const json* c = child(key);
    if (!c) fail("missing '" + key + "'");
    if (!c->is_array()) fail("'" + key + "' must be an array");
    return *c;
  }

  std::string sub(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    std::string unknown;
    for (const auto& [key, _] : obj_.items()) {
      if (!used_.count(key)) unknown += (unknown.empty() ? "'" : ", '") + key + "'";
    }
    if (!unknown.empty()) fail("unknown key(s) " + unknown);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("scenario " + path_ + ": " + msg);
  }

 private:
  double number_at(const std::string& key) {
    used_.insert(key);
    const auto& v = obj_.at(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }

  static std::string suffix_list(Dimension dim) {
    std::string s;
    for (const auto& [suffix, _] : unit_suffixes(dim)) s += (s.empty() ? "" : "/") + suffix;
    return s;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

struct CavitySection {
  double mirror_curvature;
  double wavelength;
  std::optional<double> target_waist;
  std::optional<double> cavity_length;
  double crystal_index = kKtpIndex;
  std::optional<double> fiber_waist;
  double mode_purity = 1.0;
  std::optional<double> coupler_transmission;
  double round_trip_loss = 0.0;
  std::optional<double> round_trip_length;
};

struct ThetaTrace {
  double pump_power;
  int points;
};

struct OpoSection {
  std::optional<double> effective_efficiency;  // C_eff given directly
  std::optional<double> quantum_efficiency, visibility, propagation_efficiency;
  std::optional<double> escape_efficiency;
  std::optional<double> coupler_transmission, round_trip_loss, round_trip_length;
  std::optional<double> threshold_power;
  double sideband_frequency = 0.0;
  std::optional<double> bandwidth;
  std::vector<double> pump_powers;
  std::optional<ThetaTrace> trace;
};

struct LossSection {
  LossChain detection;
  std::vector<reference::SetupLosses> setups;
};

struct Scenario {
  std::string title;
  std::optional<CavitySection> cavity;
  std::optional<OpoSection> opo;
  std::optional<LossSection> losses;
  std::optional<NetworkScenario> network;
};

namespace detail {

inline CavitySection parse_cavity(const json& j) {
  ObjectReader r(j, "cavity");
  CavitySection c;
  c.mirror_curvature = r.quantity("mirror_curvature", Dimension::Length);
  c.wavelength = r.quantity("wavelength", Dimension::Length);
  c.target_waist = r.optional_quantity("target_waist", Dimension::Length);
  c.cavity_length = r.optional_quantity("cavity_length", Dimension::Length);
  if (c.target_waist.has_value() == c.cavity_length.has_value()) {
    r.fail("give exactly one of 'target_waist' and 'cavity_length'");
  }
  c.crystal_index = r.optional_number("crystal_index").value_or(kKtpIndex);
  c.fiber_waist = r.optional_quantity("fiber_waist", Dimension::Length);
  c.mode_purity = r.optional_number("mode_purity").value_or(1.0);
  c.coupler_transmission = r.optional_number("coupler_transmission");
  c.round_trip_loss = r.optional_number("round_trip_loss").value_or(0.0);
  c.round_trip_length = r.optional_quantity("round_trip_length", Dimension::Length);
  r.finish();
  return c;
}

inline OpoSection parse_opo(const json& j) {
  ObjectReader r(j, "opo");
  OpoSection o;
  o.effective_efficiency = r.optional_number("effective_efficiency");
  o.quantum_efficiency = r.optional_number("quantum_efficiency");
  o.visibility = r.optional_number("visibility");
  o.propagation_efficiency = r.optional_number("propagation_efficiency");
  o.escape_efficiency = r.optional_number("escape_efficiency");
  o.coupler_transmission = r.optional_number("coupler_transmission");
  o.round_trip_loss = r.optional_number("round_trip_loss");
  o.round_trip_length = r.optional_quantity("round_trip_length", Dimension::Length);
  o.threshold_power = r.optional_quantity("threshold_power", Dimension::Power);
  o.sideband_frequency = r.quantity("sideband_frequency", Dimension::Frequency);
  o.bandwidth = r.optional_quantity("bandwidth", Dimension::Frequency);
  o.pump_powers = r.quantity_list("pump_powers", Dimension::Power);
  if (const json* sweep = r.child("pump_sweep")) {
    if (!o.pump_powers.empty()) r.fail("give either 'pump_powers' or 'pump_sweep', not both");
    ObjectReader s(*sweep, "opo.pump_sweep");
    const double start = s.quantity("start", Dimension::Power);
    const double stop = s.quantity("stop", Dimension::Power);
    const int count = s.integer("count");
    s.finish();
    if (count < 1) s.fail("'count' must be >= 1");
    for (int k = 0; k < count; ++k) {
      o.pump_powers.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
    }
  }
  if (const json* trace = r.child("trace")) {
    ObjectReader t(*trace, "opo.trace");
    o.trace = ThetaTrace{t.quantity("pump_power", Dimension::Power), t.integer("points")};
    t.finish();
    if (o.trace->points < 2) t.fail("'points' must be >= 2");
  }
  const bool components = o.quantum_efficiency || o.visibility || o.propagation_efficiency ||
                          o.escape_efficiency;
  if (o.effective_efficiency && components) {
    r.fail("'effective_efficiency' excludes the individual efficiency keys");
  }
  r.finish();
  return o;
}

inline LossChain parse_chain(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw InputError("scenario " + path + ": expected an array of stages");
  LossChain chain;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    ObjectReader s(arr[k], path + "[" + std::to_string(k) + "]");
    LossStage stage;
    stage.name = s.string("name");
    const auto t = s.optional_number("transmission");
    const auto v = s.optional_number("visibility");
    if (t.has_value() == v.has_value()) s.fail("give exactly one of 'transmission' and 'visibility'");
    stage.kind = t ? StageKind::Transmission : StageKind::Visibility;
    stage.value = t ? *t : *v;
    if (!(stage.value > 0.0 && stage.value <= 1.0)) s.fail("stage value must be in (0,1]");
    stage.uncertainty = s.optional_number("uncertainty").value_or(0.0);
    if (stage.uncertainty < 0.0) s.fail("'uncertainty' must be >= 0");
    s.finish();
    chain.stages.push_back(std::move(stage));
  }
  return chain;
}

inline LossSection parse_losses(const json& j) {
  ObjectReader r(j, "losses");
  if (auto name = r.optional_string("dataset")) {
    r.finish();
    if (*name != reference::kDatasetName) {
      r.fail("unknown dataset '" + *name + "' (known: " + reference::kDatasetName + ")");
    }
    const auto ds = reference::dataset();
    return {ds.detection, ds.setups};
  }
  LossSection sec;
  sec.detection = parse_chain(r.array("detection"), "losses.detection");
  sec.detection.dark_clearance_db = r.optional_number("dark_clearance_db");
  if (sec.detection.dark_clearance_db && *sec.detection.dark_clearance_db < 0.0) {
    r.fail("'dark_clearance_db' must be >= 0");
  }
  const json& records = r.array("records");
  for (std::size_t k = 0; k < records.size(); ++k) {
    const std::string path = "losses.records[" + std::to_string(k) + "]";
    ObjectReader m(records[k], path);
    reference::SetupLosses s;
    s.record.setup = m.string("setup");
    s.record.squeezing_db = m.number("squeezing_db");
    s.record.antisqueezing_db = m.number("antisqueezing_db");
    s.record.visibility = m.number("visibility");
    s.record.sideband_frequency =
        m.optional_quantity("sideband_frequency", Dimension::Frequency).value_or(0.0);
    s.record.pump_power = m.optional_quantity("pump_power", Dimension::Power).value_or(0.0);
    const json* src = m.child("source");
    const json* cpl = m.child("coupling");
    if (src) s.source = parse_chain(*src, path + ".source");
    if (cpl) s.coupling = parse_chain(*cpl, path + ".coupling");
    m.finish();
    try {
      s.record.validate();
    } catch (const DomainError& e) {
      m.fail(e.what());
    }
    sec.setups.push_back(std::move(s));
  }
  if (sec.setups.empty()) r.fail("'records' must not be empty");
  r.finish();
  return sec;
}

inline std::pair<double, double> parse_variances(ObjectReader& r) {
  const auto rm = r.optional_number("squeezed_variance");
  const auto rp = r.optional_number("antisqueezed_variance");
  const auto sdb = r.optional_number("squeezing_db");
  const auto adb = r.optional_number("antisqueezing_db");
  if (rm && rp && !sdb && !adb) return {*rm, *rp};
  if (sdb && adb && !rm && !rp) return {db_to_linear(*sdb), db_to_linear(*adb)};
  r.fail("give either squeezed/antisqueezed_variance or squeezing/antisqueezing_db");
}

inline NetworkScenario parse_network(const json& j) {
  ObjectReader r(j, "network");
  NetworkScenario net;
  if (auto topo = r.optional_string("topology")) {
    if (*topo != "binary-tree") r.fail("unknown topology '" + *topo + "' (known: binary-tree)");
    const int modes = r.integer("modes");
    const json* sq = r.child("squeezer");
    if (!sq) r.fail("topology needs a 'squeezer' object");
    ObjectReader s(*sq, "network.squeezer");
    const auto [rm, rp] = parse_variances(s);
    s.finish();
    r.finish();
    try {
      return binary_tree_network(rm, rp, modes);
    } catch (const DomainError& e) {
      r.fail(e.what());
    }
  }
  net.mode_count = r.integer("modes");
  if (net.mode_count < 1) r.fail("'modes' must be >= 1");
  if (const json* sqs = r.child("squeezers")) {
    if (!sqs->is_array()) r.fail("'squeezers' must be an array");
    for (std::size_t k = 0; k < sqs->size(); ++k) {
      ObjectReader s((*sqs)[k], "network.squeezers[" + std::to_string(k) + "]");
      SqueezerSpec spec{};
      spec.mode = s.integer("mode");
      std::tie(spec.squeezed_variance, spec.antisqueezed_variance) = parse_variances(s);
      spec.angle = s.optional_quantity("angle", Dimension::Angle).value_or(0.0);
      s.finish();
      net.squeezers.push_back(spec);
    }
  }
  if (const json* gates = r.child("gates")) {
    if (!gates->is_array()) r.fail("'gates' must be an array");
    for (std::size_t k = 0; k < gates->size(); ++k) {
      ObjectReader g((*gates)[k], "network.gates[" + std::to_string(k) + "]");
      const std::string type = g.string("type");
      if (type == "beamsplitter") {
        const json& modes = g.array("modes");
        if (modes.size() != 2 || !modes[0].is_number_integer() || !modes[1].is_number_integer()) {
          g.fail("'modes' must hold two integers");
        }
        net.gates.push_back(BeamSplitterGate{
            modes[0].get<int>(), modes[1].get<int>(), g.number("transmittance"),
            g.optional_quantity("phase", Dimension::Angle).value_or(0.0)});
      } else if (type == "phase_shift") {
        net.gates.push_back(
            PhaseShiftGate{g.integer("mode"), g.quantity("phase", Dimension::Angle)});
      } else if (type == "loss") {
        net.gates.push_back(LossGate{g.integer("mode"), g.number("efficiency")});
      } else {
        g.fail("unknown gate type '" + type + "' (beamsplitter, phase_shift, loss)");
      }
      g.finish();
    }
  }
  if (const json* ms = r.child("measurements")) {
    if (!ms->is_array()) r.fail("'measurements' must be an array");
    for (std::size_t k = 0; k < ms->size(); ++k) {
      ObjectReader m((*ms)[k], "network.measurements[" + std::to_string(k) + "]");
      net.measurements.push_back(
          {m.integer("mode"), m.optional_quantity("angle", Dimension::Angle).value_or(0.0)});
      m.finish();
    }
  }
  r.finish();
  return net;
}

}  // namespace detail

inline Scenario parse_scenario(const json& j) {
  ObjectReader r(j, "root");
  Scenario s;
  s.title = r.optional_string("title").value_or("");
  if (const json* c = r.child("cavity")) s.cavity = detail::parse_cavity(*c);
  if (const json* o = r.child("opo")) s.opo = detail::parse_opo(*o);
  if (const json* l = r.child("losses")) s.losses = detail::parse_losses(*l);
  if (const json* n = r.child("network")) s.network = detail::parse_network(*n);
  r.finish();
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": invalid JSON: " + e.what());
  }
}

// Overrides one numeric value addressed by a dotted path, e.g.
// "cavity.target_waist_um" or "network.gates.0.transmittance".
inline void set_by_path(json& doc, const std::string& path, double value) {
  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw InputError("sweep: empty key");
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(parts[k]);
      } catch (const std::exception&) {
        throw InputError("sweep: '" + parts[k] + "' is not an array index in '" + path + "'");
      }
      if (idx >= node->size()) throw InputError("sweep: index out of range in '" + path + "'");
      node = &(*node)[idx];
    } else if (node->is_object() && node->contains(parts[k])) {
      node = &(*node)[parts[k]];
    } else {
      throw InputError("sweep: no section '" + parts[k] + "' in '" + path + "'");
    }
  }
  if (!node->is_object() || !node->contains(parts.back()) || !(*node)[parts.back()].is_number()) {
    throw InputError("sweep: '" + path + "' must name an existing numeric key");
  }
  (*node)[parts.back()] = value;
}

// Power-vs-squeezing data: power_mW, squeezing_db, antisqueezing_db[, weight].
// Empty cells or "nan" mark a missing quadrature; '#' lines are comments and
// a leading header row is allowed.
inline std::vector<FitPoint> parse_fit_data(const std::string& text, const std::string& origin) {
  std::vector<FitPoint> points;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first_content = true;
  auto bad = [&](const std::string& why) {
    throw InputError(origin + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t");
      const auto b = cell.find_last_not_of(" \t");
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    const bool header = first_content && !cells.empty() && cells[0] == "power_mW";
    first_content = false;
    if (header) continue;
    if (cells.size() < 3 || cells.size() > 4) bad("expected 3 or 4 comma-separated fields");
    auto num = [&](const std::string& s, bool allow_missing) -> std::optional<double> {
      if (allow_missing && (s.empty() || s == "nan" || s == "NaN")) return std::nullopt;
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) bad("not a number: '" + s + "'");
        return v;
      } catch (const std::logic_error&) {
        bad("not a number: '" + s + "'");
      }
      return std::nullopt;
    };
    FitPoint pt;
    const auto power = num(cells[0], false);
    pt.pump_power = *power * units::mW;
    pt.squeezing_db = num(cells[1], true);
    pt.antisqueezing_db = num(cells[2], true);
    if (cells.size() == 4) pt.weight = *num(cells[3], false);
    if (!(pt.pump_power > 0.0)) bad("power must be > 0");
    if (!(pt.weight > 0.0)) bad("weight must be > 0");
    if (!pt.squeezing_db && !pt.antisqueezing_db) bad("row has no quadrature value");
    points.push_back(pt);
  }
  return points;
}

}  // namespace sqzkit::io
