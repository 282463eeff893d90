#include <gtest/gtest.h>

#include <sstream>

#include "sqzkit/commands.hpp"

using namespace sqzkit;
using io::json;

namespace {

io::Scenario scenario_from(const std::string& text) {
  return io::parse_scenario(io::parse_json_text(text, "test"));
}

io::Scenario scenario_file(const std::string& name) {
  const std::string path = std::string(SQZKIT_SCENARIO_DIR) + "/" + name;
  return io::parse_scenario(io::parse_json_text(io::read_file(path), path));
}

double number_at(const io::ResultTable& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns().size(); ++c) {
    if (t.columns()[c].name == col) return std::get<double>(t.rows().at(row)[c]);
  }
  throw std::out_of_range(col);
}

std::string string_at(const io::ResultTable& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns().size(); ++c) {
    if (t.columns()[c].name == col) return std::get<std::string>(t.rows().at(row)[c]);
  }
  throw std::out_of_range(col);
}

}  // namespace

TEST(FormatNumber, SixSignificantDigits) {
  EXPECT_EQ(io::format_number(0.71955290048956), "0.719553");
  EXPECT_EQ(io::format_number(1234567.0), "1.23457e+06");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(ResultTable, CsvLayout) {
  io::ResultTable t({{"a", "mm"}, {"b", ""}});
  t.add_row({1.5, std::string("ok")});
  std::ostringstream out;
  t.write_csv(out, {"cavity-design", "fnv1a64:0"});
  EXPECT_EQ(out.str(),
            "# units: a [mm],b []\na,b\n1.5,ok\n# command: cavity-design\n"
            "# scenario: fnv1a64:0\n# version: sqzkit 0.1.0\n");
  EXPECT_THROW(t.add_row({1.0}), Error);
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(io::digest(""), "fnv1a64:cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "fnv1a64:af63dc4c8601ec8c");
}

TEST(ScenarioParsing, UnitsConvertToSi) {
  const auto s = scenario_from(
      R"({"cavity": {"mirror_curvature_m": 0.005, "wavelength_um": 1.064, "cavity_length_mm": 4.9}})");
  ASSERT_TRUE(s.cavity);
  EXPECT_DOUBLE_EQ(s.cavity->mirror_curvature, 0.005);
  EXPECT_NEAR(s.cavity->wavelength, 1.064e-6, 1e-20);
  EXPECT_NEAR(*s.cavity->cavity_length, 4.9e-3, 1e-18);
}

TEST(ScenarioParsing, RejectsUnknownAndUnitlessKeys) {
  EXPECT_THROW(scenario_from(R"({"cavity": {"mirror_curvature_mm": 5, "wavelength_nm": 1064,
                                 "target_waist_um": 3, "colour": 1}})"),
               InputError);
  EXPECT_THROW(scenario_from(R"({"cavity": {"mirror_curvature": 5, "wavelength_nm": 1064,
                                 "target_waist_um": 3}})"),
               InputError);
  EXPECT_THROW(scenario_from(R"({"cavity": {"mirror_curvature_mm": 5, "wavelength_nm": 1064}})"),
               InputError);
  EXPECT_THROW(scenario_from(R"({"extra": 1})"), InputError);
  EXPECT_THROW(scenario_from(R"({"opo": {"sideband_frequency_mhz": 3,
                                 "effective_efficiency": 0.3, "visibility": 0.9}})"),
               InputError);
  EXPECT_THROW(io::parse_json_text("{", "x"), InputError);
}

TEST(ScenarioParsing, ErrorsNameTheLocation) {
  try {
    scenario_from(R"({"network": {"modes": 2, "gates": [{"type": "beamsplitter",
                      "modes": [0, 1], "transmittance": 0.5, "bogus": 1}]}})");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("network.gates[0]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(ScenarioParsing, BundledScenariosParse) {
  for (const char* f : {"sf_cavity.json", "pcf_cavity.json", "tf_opo.json", "sf_fit.json",
                        "reference_losses.json", "custom_losses.json", "epr_network.json",
                        "tree_network.json"}) {
    EXPECT_NO_THROW(scenario_file(f)) << f;
  }
}

TEST(SetByPath, OverridesExistingNumbers) {
  json doc = json::parse(R"({"cavity": {"target_waist_um": 3.1}, "network": {"gates": [{"t": 0.5}]}})");
  io::set_by_path(doc, "cavity.target_waist_um", 4.0);
  io::set_by_path(doc, "network.gates.0.t", 0.3);
  EXPECT_EQ(doc["cavity"]["target_waist_um"], 4.0);
  EXPECT_EQ(doc["network"]["gates"][0]["t"], 0.3);
  EXPECT_THROW(io::set_by_path(doc, "cavity.missing_um", 1.0), InputError);
  EXPECT_THROW(io::set_by_path(doc, "network.gates.3.t", 1.0), InputError);
  EXPECT_THROW(io::set_by_path(doc, "nosuch.key", 1.0), InputError);
}

TEST(ParseFitData, ReadsRowsAndMissingCells) {
  const auto pts = io::parse_fit_data(
      "# comment\npower_mW,squeezing_db,antisqueezing_db,weight\n10,-0.3,0.4,2\n20,,0.7\n30,nan,1.0,1\n",
      "d.csv");
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_DOUBLE_EQ(pts[0].pump_power, 0.010);
  EXPECT_DOUBLE_EQ(pts[0].weight, 2.0);
  EXPECT_FALSE(pts[1].squeezing_db);
  EXPECT_DOUBLE_EQ(*pts[1].antisqueezing_db, 0.7);
  EXPECT_FALSE(pts[2].squeezing_db);
}

TEST(ParseFitData, ErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      io::parse_fit_data(text, "d.csv");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("10,-0.3,0.4\n20,abc,0.4\n").find("d.csv:2"), std::string::npos);
  EXPECT_NE(message("# c\n\n10,-0.3\n").find("d.csv:3"), std::string::npos);
  EXPECT_NE(message("-5,-0.3,0.4\n").find("d.csv:1"), std::string::npos);
  EXPECT_NE(message("5,,\n").find("no quadrature"), std::string::npos);
}

TEST(CavityDesignCommand, StandardFiber) {
  const auto out = cli::cmd_cavity_design(scenario_file("sf_cavity.json"));
  ASSERT_EQ(out.tables.size(), 1u);
  const auto& t = out.tables[0].table;
  EXPECT_NEAR(number_at(t, 0, "cavity_length_mm"), 4.999838969831416, 1e-12);
  EXPECT_NEAR(number_at(t, 0, "hemispherical_gap_nm"), 161.0301685844298, 1e-6);
  EXPECT_NEAR(number_at(t, 0, "mirror_spot_um"), 546.2520404164713, 1e-9);
  EXPECT_NEAR(number_at(t, 0, "fiber_overlap"), 1.0, 1e-15);
  EXPECT_NEAR(number_at(t, 0, "bandwidth_hz"), 5.1564302776e10 * 5.0 / (2 * 4.999838969831416),
              1e3);
}

TEST(CavityDesignCommand, UnstableGeometry) {
  const auto s = scenario_from(
      R"({"cavity": {"mirror_curvature_mm": 5, "wavelength_nm": 1064, "cavity_length_mm": 6}})");
  EXPECT_THROW(cli::cmd_cavity_design(s), StabilityError);
}

TEST(OpoCurveCommand, WorkedExampleRowAndTrace) {
  auto s = scenario_file("tf_opo.json");
  s.opo->pump_powers = {15e-3, 90e-3, 120e-3};
  const auto out = cli::cmd_opo_curve(s);
  ASSERT_EQ(out.tables.size(), 2u);
  const auto& t = out.tables[0].table;
  EXPECT_NEAR(number_at(t, 0, "squeezing_db"), -1.429372718508462, 1e-10);
  EXPECT_NEAR(number_at(t, 0, "antisqueezing_db"), 4.130132631187160, 1e-10);
  EXPECT_EQ(string_at(t, 1, "flag"), "threshold");
  EXPECT_EQ(string_at(t, 2, "flag"), "above_threshold");
  EXPECT_EQ(out.warnings.size(), 1u);
  const auto& tr = out.tables[1].table;
  EXPECT_EQ(tr.rows().size(), 37u);
  EXPECT_NEAR(number_at(tr, 9, "variance"), 2.588291958983413, 1e-12);  // 90 degrees
}

TEST(FitCommand, RecoversBundledCurve) {
  const auto data =
      io::parse_fit_data(io::read_file(std::string(SQZKIT_SCENARIO_DIR) + "/sf_fit_data.csv"), "d");
  const auto out = cli::cmd_fit(scenario_file("sf_fit.json"), data);
  const auto& t = out.tables[0].table;
  // Data were written with six decimals, which limits the recovery.
  EXPECT_NEAR(number_at(t, 0, "effective_efficiency"), 0.2, 1e-4);
  EXPECT_NEAR(number_at(t, 0, "threshold_power_mw"), 1200.0, 1.0);
  EXPECT_EQ(string_at(t, 0, "flag"), "ok");
  EXPECT_EQ(out.tables[1].table.rows().size(), 41u);

  auto no_bw = scenario_file("sf_fit.json");
  no_bw.opo->bandwidth.reset();
  EXPECT_THROW(cli::cmd_fit(no_bw, data), InputError);
}

TEST(LossCorrectCommand, BuiltInDataset) {
  const auto out = cli::cmd_loss_correct(scenario_file("reference_losses.json"), true);
  EXPECT_EQ(out.exit_code, cli::kExitOk);
  const auto& t = out.tables[0].table;
  ASSERT_EQ(t.rows().size(), 12u);
  EXPECT_NEAR(number_at(t, 11, "squeezing_db"), -5.300050683388, 1e-9);
  EXPECT_LE(number_at(t, 11, "squeezing_db_min"), number_at(t, 11, "squeezing_db"));
}

TEST(LossCorrectCommand, NonphysicalSetupIsFlagged) {
  auto s = scenario_file("custom_losses.json");
  auto extra = s.losses->setups[0];
  extra.record.setup = "broken";
  extra.record.squeezing_db = -9.0;
  s.losses->setups.push_back(extra);
  const auto out = cli::cmd_loss_correct(s);
  EXPECT_EQ(out.exit_code, cli::kExitOk);
  const auto& t = out.tables[0].table;
  EXPECT_EQ(string_at(t, t.rows().size() - 1, "flag"), "nonphysical_squeezed");
  EXPECT_EQ(out.warnings.size(), 1u);

  s.losses->setups.erase(s.losses->setups.begin());
  EXPECT_EQ(cli::cmd_loss_correct(s).exit_code, cli::kExitComputationError);
}

TEST(NetworkCommand, EprTables) {
  const auto out = cli::cmd_network(scenario_file("epr_network.json"));
  ASSERT_EQ(out.tables.size(), 3u);
  EXPECT_EQ(out.tables[1].table.rows().size(), 1u);
  EXPECT_EQ(string_at(out.tables[1].table, 0, "entangled"), "yes");
  EXPECT_EQ(out.tables[2].table.rows().size(), 4u);
}

TEST(ReproducePaperCommand, PerturbedDatasetFails) {
  auto ds = reference::dataset();
  ds.setups[1].record.squeezing_db -= 1.0;
  const auto out = cli::cmd_reproduce_paper(ds);
  EXPECT_EQ(out.exit_code, cli::kExitReproductionFailure);
  bool pcf_failed = false;
  for (const auto& w : out.warnings) pcf_failed = pcf_failed || w.find("PCF") != std::string::npos;
  EXPECT_TRUE(pcf_failed);
}

TEST(ReproductionChecks, CavityScanAgreesWithClosedForm) {
  const double scanned = scan_cavity_length(3.1e-6, 5e-3, 1.064e-6);
  EXPECT_NEAR(scanned, 4.999838969831416e-03, 1e-9);
}
