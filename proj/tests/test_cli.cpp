#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/cli.hpp"
#include "rcs/config.hpp"

using namespace rcs;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "rcs");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  return dispatch(static_cast<int>(args.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rcs_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    unsetenv("RCS_WORKERS");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_EQ(run({"--version"}), kExitOk);
  EXPECT_EQ(run({"closedform", "--formula", "nope", "--out", path("x.json")}), kExitUsage);
  EXPECT_EQ(run({"mc", "--n", "4", "--samples", "10", "--out", path("x.csv")}), kExitUsage);
}

TEST_F(Cli, ClosedformValue) {
  ASSERT_EQ(run({"closedform", "--formula", "collision_bound", "--n", "4", "--r", "0.1", "--out", path("c.json")}),
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_NEAR(j.at("value").get<double>(), 0.04060401, 1e-15);
}

TEST_F(Cli, ConfigFileAndFlagsGiveIdenticalCsv) {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.depth = 2;
  cfg.channel = ChannelSpec::dep_then_amp(0.3, 0.2);
  cfg.samples = 300;
  cfg.seed = 11;
  cfg.targets = {"px", "collision"};
  {
    std::ofstream out(path("cfg.json"));
    out << config_to_json(cfg, false).dump(2);
  }
  ASSERT_EQ(run({"mc", "--config", path("cfg.json"), "--out", path("a.csv")}), kExitOk);
  ASSERT_EQ(run({"mc", "--n", "4", "--depth", "2", "--kind", "dep_then_amp", "--q", "0.3", "--p", "0.2", "--samples",
                 "300", "--seed", "11", "--targets", "px,collision", "--workers", "3", "--out", path("b.csv")}),
            kExitOk);
  const auto a = slurp(path("a.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_TRUE(fs::exists(path("a.csv.json")));
}

TEST_F(Cli, FlagsOverrideConfig) {
  ExperimentConfig cfg;
  cfg.samples = 300;
  cfg.seed = 2;
  {
    std::ofstream out(path("cfg.json"));
    out << config_to_json(cfg, false).dump();
  }
  ASSERT_EQ(run({"mc", "--config", path("cfg.json"), "--seed", "3", "--out", path("o.csv")}), kExitOk);
  const auto side = nlohmann::json::parse(slurp(path("o.csv.json")));
  EXPECT_EQ(side.at("config").at("seed").get<std::uint64_t>(), 3u);
}

TEST_F(Cli, BadWorkerEnvironment) {
  setenv("RCS_WORKERS", "many", 1);
  EXPECT_EQ(run({"mc", "--samples", "200", "--out", path("w.csv")}), kExitUsage);
  setenv("RCS_WORKERS", "2", 1);
  EXPECT_EQ(run({"mc", "--samples", "200", "--out", path("w.csv")}), kExitOk);
  unsetenv("RCS_WORKERS");
}

TEST_F(Cli, ChannelAndStatmechReports) {
  ASSERT_EQ(run({"channel", "--kind", "amp_damp", "--q", "0.3", "--out", path("ch.json")}), kExitOk);
  EXPECT_FALSE(nlohmann::json::parse(slurp(path("ch.json"))).empty());
  ASSERT_EQ(run({"statmech", "--a", "0.1", "--b", "0.2", "--m", "5", "--out", path("sm.json")}), kExitOk);
  EXPECT_FALSE(nlohmann::json::parse(slurp(path("sm.json"))).empty());
  EXPECT_EQ(run({"channel", "--kind", "amp_damp", "--q", "2", "--out", path("bad.json")}), kExitUsage);
}

TEST_F(Cli, SimulateReportsInvariants) {
  ASSERT_EQ(run({"simulate", "--n", "2", "--depth", "2", "--kind", "amp_damp", "--q", "0.2", "--out", path("s.json")}),
            kExitOk);
  const auto j = nlohmann::json::parse(slurp(path("s.json")));
  EXPECT_LE(j.at("purity").get<double>(), 1.0 + 1e-12);
}

TEST_F(Cli, VerifyAndReport) {
  ASSERT_EQ(run({"verify", "--suite", "uniform_identity", "--samples", "200", "--out", path("v.csv")}), kExitOk);
  EXPECT_EQ(run({"verify", "--suite", "missing", "--out", path("m.csv")}), kExitUsage);
  ASSERT_EQ(run({"mc", "--samples", "200", "--out", path("r.csv")}), kExitOk);
  EXPECT_EQ(run({"report", "--in", path("r.csv"), "--out", path("rep.json")}), kExitOk);
}
