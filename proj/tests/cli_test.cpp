#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("sqzkit_cli_") + info->name() + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run sqzkit(const std::string& args, const std::string& env = "") {
  const fs::path dir = scratch();
  const std::string cmd = env + " " + SQZKIT_CLI_PATH + " " + args + " >" +
                          (dir / "stdout").string() + " 2>" + (dir / "stderr").string();
  const int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "stdout"),
        slurp(dir / "stderr")};
  fs::remove_all(dir);
  return r;
}

std::string scenario(const std::string& name) {
  return std::string(SQZKIT_SCENARIO_DIR) + "/" + name;
}

}  // namespace

TEST(Cli, CavityDesignSucceeds) {
  const auto r = sqzkit("cavity-design --scenario " + scenario("sf_cavity.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# units: waist_um [um]", 0), 0u);
  EXPECT_NE(r.out.find("4.99984"), std::string::npos);
  EXPECT_NE(r.out.find("# command: cavity-design"), std::string::npos);
  EXPECT_NE(r.out.find("# version: sqzkit"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  const std::string args = "opo-curve --scenario " + scenario("tf_opo.json");
  const auto a = sqzkit(args);
  const auto b = sqzkit(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, WritesTablesToOutDirectory) {
  const fs::path dir = fs::temp_directory_path() / ("sqzkit_out_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto r = sqzkit("network --scenario " + scenario("epr_network.json") + " --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "network_homodyne.csv"));
  EXPECT_TRUE(fs::exists(dir / "network_duan.csv"));
  EXPECT_TRUE(fs::exists(dir / "covariance.csv"));
  fs::remove_all(dir);

  const auto e = sqzkit("network --scenario " + scenario("epr_network.json"),
                        "SQZKIT_OUT=" + dir.string());
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_TRUE(fs::exists(dir / "covariance.csv"));
  fs::remove_all(dir);
}

TEST(Cli, SweepPrependsColumn) {
  const auto r = sqzkit("cavity-design --scenario " + scenario("sf_cavity.json") +
                        " --sweep cavity.target_waist_um=3:7:5");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# units: cavity.target_waist_um [sweep],", 0), 0u);
  int rows = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) rows += !line.empty() && line[0] != '#';
  EXPECT_EQ(rows, 6);  // header + 5
}

TEST(Cli, FitWithData) {
  const auto r = sqzkit("fit --scenario " + scenario("sf_fit.json") + " --data " +
                        scenario("sf_fit_data.csv"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# table: fit_curve"), std::string::npos);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(sqzkit("").code, 2);
  EXPECT_EQ(sqzkit("frobnicate --scenario x").code, 2);
  EXPECT_EQ(sqzkit("cavity-design").code, 2);
  EXPECT_EQ(sqzkit("cavity-design --scenario /nonexistent.json").code, 2);
  EXPECT_EQ(sqzkit("network --scenario " + scenario("sf_cavity.json")).code, 2);
  EXPECT_EQ(sqzkit("fit --scenario " + scenario("sf_fit.json")).code, 2);
  EXPECT_EQ(sqzkit("cavity-design --scenario " + scenario("sf_cavity.json") + " --sweep nope").code, 2);
  EXPECT_EQ(sqzkit("reproduce-paper --scenario " + scenario("sf_cavity.json")).code, 2);
  const auto r = sqzkit("fit --scenario " + scenario("sf_fit.json") + " --data " +
                        scenario("sf_cavity.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sf_cavity.json:1"), std::string::npos) << r.err;
}

TEST(Cli, ComputationErrorExitsThree) {
  const fs::path dir = fs::temp_directory_path() / ("sqzkit_bad_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"losses": {"detection": [{"name": "qe", "transmission": 0.5}], "records": [
          {"setup": "x", "squeezing_db": -6, "antisqueezing_db": 6, "visibility": 1}]}})";
  }
  const auto r = sqzkit("loss-correct --scenario " + (dir / "bad.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("nonphysical_squeezed"), std::string::npos);
  EXPECT_NE(r.err.find("tier 1"), std::string::npos);
  fs::remove_all(dir);
}
