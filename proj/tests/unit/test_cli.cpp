#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "dfp/run_record.hpp"

namespace fs = std::filesystem;
using dfp::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dfp_cli_" + name);
  fs::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST(Cli, SimulateWritesRunFile) {
  const auto dir = scratch("sim");
  const auto r = call({"simulate", "--n", "4", "--seed", "1", "--terminate", "--out", dir});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(dir) / "run_n4_s1.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "probes_n4_s1.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "summary_n4.json"));
}

TEST(Cli, TrajectoryHeader) {
  const auto r = call({"trajectory", "--t-max", "2", "--dt", "0.001", "--n", "2000", "--K", "10"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,r,q0,q1,x0,x1,x2,y00,y01,y10,y11,delta_q,delta_x,delta_y,delta_r");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2002);
  const auto ode = call({"trajectory", "--t-max", "0.5", "--dt", "0.01", "--method", "ode"});
  EXPECT_EQ(ode.code, 0);
  EXPECT_EQ(std::count(ode.out.begin(), ode.out.end(), '\n'), 52);
}

TEST(Cli, VerifyPasses) {
  const auto r = call({"verify", "--n", "12", "--seeds", "50"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--bogus"}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--terminate", "--t-max", "1"}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "1", "--terminate", "--out", scratch("n1")}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--seeds", "5..2"}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--format", "xml"}).code, 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--epsilon", "0.5"}).code, 2);
  const auto unknown = call({"simulate", "--n", "10", "--bogus"});
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, CompareAndBlueFromRunFiles) {
  const auto dir = scratch("cmp");
  ASSERT_EQ(call({"simulate", "--n", "150", "--seeds", "1..3", "--t-max", "0.5", "--probes", "4", "--format", "json",
                  "--out", dir})
                .code,
            0);
  const auto c = call({"compare", "--runs", dir, "--out", dir});
  EXPECT_EQ(c.code, 0) << c.out << c.err;
  EXPECT_TRUE(fs::exists(fs::path(dir) / "compare_n150.json"));
  const auto strict = call({"compare", "--runs", dir, "--out", dir, "--min-inside", "1.5"});
  EXPECT_EQ(strict.code, 1);
  const auto b = call({"blue", "--runs", dir, "--out", dir});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_TRUE(fs::exists(fs::path(dir) / "blue_n150.json"));
  EXPECT_EQ(call({"compare", "--runs", scratch("empty_runs")}).code, 1);
}

TEST(Cli, CompareAgainstTrajectoryFile) {
  const auto dir = scratch("cmp_traj");
  ASSERT_EQ(call({"simulate", "--n", "100", "--seed", "2", "--t-max", "0.3", "--stride", "10", "--format", "json",
                  "--out", dir})
                .code,
            0);
  const auto grid = (fs::path(dir) / "grid.csv").string();
  ASSERT_EQ(call({"trajectory", "--t-max", "0.3", "--dt", "0.01", "--out", grid}).code, 0);
  EXPECT_EQ(call({"compare", "--runs", dir, "--trajectory", grid, "--out", dir}).code, 0);
  const auto coarse = (fs::path(dir) / "coarse.csv").string();
  ASSERT_EQ(call({"trajectory", "--t-max", "0.3", "--dt", "0.003", "--out", coarse}).code, 0);
  EXPECT_EQ(call({"compare", "--runs", dir, "--trajectory", coarse, "--out", dir}).code, 1);
}

TEST(Cli, FitGate) {
  const auto dir = scratch("fit");
  const auto ok = call({"fit", "--n", "20,40", "--seeds", "1..4", "--out", dir});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_TRUE(fs::exists(fs::path(dir) / "fit.json"));
  EXPECT_EQ(call({"fit", "--n", "20,40", "--seeds", "1..4", "--max-ratio", "1.0", "--out", dir}).code, 1);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const auto a = scratch("rep_a"), b = scratch("rep_b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(call({"simulate", "--n", "80", "--seeds", "1..3", "--terminate", "--probes", "3", "--out", dir}).code, 0);
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(dfp::read_file(entry.path()), dfp::read_file(fs::path(b) / entry.path().filename()));
  }
}
