#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "dfp/analysis.hpp"
#include "dfp/ensemble.hpp"
#include "dfp/errors.hpp"
#include "dfp/independence.hpp"
#include "dfp/simulation.hpp"
#include "invariants.hpp"

using namespace dfp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dfp_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

RunRecord small_run(Vertex n, std::uint64_t seed, StopRule stop, std::uint32_t probes = 0) {
  ProcessState s(n, seed);
  RecordRule rule;
  rule.probes.pairs = probes;
  rule.probes.vertices = probes;
  return run(s, stop, rule);
}

}  // namespace

TEST(Run, TwoVertices) {
  const auto r = small_run(2, 1, StopRule::to_termination());
  EXPECT_TRUE(r.summary.terminated);
  EXPECT_EQ(r.summary.edges, 1u);
  EXPECT_EQ(r.summary.blue, 1u);
  EXPECT_EQ(r.summary.green, 0u);
}

TEST(Run, SnapshotsAndSummary) {
  const auto r = small_run(150, 3, StopRule::after_steps(900), 5);
  EXPECT_EQ(r.stride, default_stride(150));
  EXPECT_EQ(r.snapshots.front().i, 0u);
  for (std::size_t k = 1; k < r.snapshots.size(); ++k) EXPECT_GT(r.snapshots[k].i, r.snapshots[k - 1].i);
  const auto& last = r.snapshots.back();
  EXPECT_EQ(last.i, 900u);
  EXPECT_EQ(r.summary.edges, last.i);
  EXPECT_EQ(r.summary.blue, last.counters.blue);
  EXPECT_EQ(r.summary.green, last.counters.green);
  EXPECT_DOUBLE_EQ(last.t, 900 / std::pow(150.0, 1.5));
  EXPECT_FALSE(r.summary.terminated);
}

TEST(Run, ObserverSeesEveryStep) {
  ProcessState s(40, 9);
  std::uint64_t calls = 0;
  run(s, StopRule::to_termination(), RecordRule{}, [&](const ProcessState& st, const UpdateDelta&) {
    ++calls;
    ASSERT_EQ(support::invariant_violation(st), std::nullopt);
  });
  EXPECT_EQ(calls, s.steps());
  EXPECT_TRUE(s.terminated());
}

TEST(RunRecord, JsonRoundTrip) {
  for (auto stop : {StopRule::to_termination(), StopRule::after_steps(300)}) {
    const auto r = small_run(60, 11, stop, 4);
    const auto text = to_json(r);
    const auto back = run_record_from_json(text);
    EXPECT_EQ(back, r);
    EXPECT_EQ(to_json(back), text);
  }
  EXPECT_THROW(run_record_from_json("{\"schema\": 2}"), InvalidInput);
  EXPECT_THROW(run_record_from_json("not json"), InvalidInput);
}

TEST(RunRecord, CsvFormats) {
  const auto r = small_run(30, 2, StopRule::after_steps(50), 2);
  const auto csv = run_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,t,Q0,Q1,m0,m1,blue,green,max_deg,max_codeg");
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.snapshots.size() + 1);
  const auto probes = probe_csv(r);
  EXPECT_EQ(probes.substr(0, probes.find('\n')), "i,t,kind,id,value");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Ensemble, TwoVerticesAllOneEdge) {
  EnsembleConfig cfg;
  cfg.n = 2;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.stop = StopRule::to_termination();
  const auto res = run_ensemble(cfg, EnvelopeConfig{});
  for (const auto& r : res.runs) EXPECT_EQ(r.summary.edges, 1u);
  ASSERT_TRUE(res.summary.fit.has_value());
  EXPECT_EQ(res.summary.fit->mean_m, 1.0);
}

TEST(Ensemble, RejectsBadSeeds) {
  EnsembleConfig cfg;
  cfg.n = 10;
  EXPECT_THROW(run_ensemble(cfg, EnvelopeConfig{}), InvalidParameter);
  cfg.seeds = {3, 3};
  EXPECT_THROW(run_ensemble(cfg, EnvelopeConfig{}), InvalidParameter);
}

TEST(Ensemble, DeterministicFiles) {
  EnsembleConfig cfg;
  cfg.n = 120;
  cfg.seeds = {4, 1, 7};
  cfg.stop = StopRule::after_steps(600);
  cfg.record.probes.pairs = 3;
  cfg.record.probes.vertices = 3;
  cfg.format = OutputFormat::Json;
  cfg.threads = 3;
  const auto a = scratch("det_a"), b = scratch("det_b");
  cfg.out_dir = a;
  const auto ra = run_ensemble(cfg, EnvelopeConfig{});
  cfg.out_dir = b;
  cfg.threads = 1;
  const auto rb = run_ensemble(cfg, EnvelopeConfig{});
  EXPECT_EQ(ra.runs, rb.runs);
  EXPECT_EQ(ra.runs.front().seed, 1u);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(read_file(entry.path()), read_file(b / entry.path().filename()));
  }
  EXPECT_EQ(files, 4u);
  const auto loaded = load_run_records(a);
  EXPECT_EQ(loaded, ra.runs);
  EXPECT_EQ(to_json(summarize(loaded, EnvelopeConfig{})), read_file(a / "summary_n120.json"));
}

TEST(Ensemble, SummaryRejectsMixedGrids) {
  auto r1 = small_run(50, 1, StopRule::after_steps(100));
  auto r2 = small_run(60, 1, StopRule::after_steps(100));
  EXPECT_THROW(summarize({r1, r2}, EnvelopeConfig{}), InvalidInput);
  EXPECT_THROW(compare({r1, r2}, EnvelopeConfig{}), InvalidInput);
}

TEST(Ensemble, WriteFailureNamesThePath) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  write_file(dir / "file", "x");
  try {
    write_file(dir / "file" / "child.csv", "y");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("child.csv"), std::string::npos);
  }
}

TEST(Stats, IntegerStats) {
  const auto s = integer_stats({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.stddev, std::sqrt(32.0 / 7), 1e-12);
  EXPECT_EQ(s.min, 2);
  EXPECT_EQ(s.max, 9);
  EXPECT_EQ(integer_stats({9, 5, 4, 7, 2, 4, 5, 4}), s);
}

TEST(Compare, InitialRowIsExact) {
  std::vector<RunRecord> runs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) runs.push_back(small_run(100, seed, StopRule::after_steps(500), 6));
  const auto rep = compare(runs, EnvelopeConfig{});
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows.front().t, 0);
  for (const auto& d : rep.rows.front().observables) {
    EXPECT_EQ(d.abs_dev, 0) << d.name;
    EXPECT_EQ(d.inside, 1) << d.name;
  }
  EXPECT_EQ(rep.rows.size(), 500 / default_stride(100) + 1);
  EXPECT_TRUE(rep.inside_fraction.contains("Q0"));
  EXPECT_TRUE(rep.inside_fraction.contains("D1"));
}

TEST(Compare, TrajectoryGridMustMatch) {
  const auto r = small_run(100, 1, StopRule::after_steps(200));
  std::vector<TrajectoryPoint> traj;
  for (const auto& s : r.snapshots) traj.push_back(closed_form(s.t));
  const auto with = compare({r}, EnvelopeConfig{}, traj);
  const auto without = compare({r}, EnvelopeConfig{});
  ASSERT_EQ(with.rows.size(), without.rows.size());
  EXPECT_EQ(with.rows.back().find("Q0")->predicted, without.rows.back().find("Q0")->predicted);
  traj.pop_back();
  traj.pop_back();
  EXPECT_THROW(compare({r}, EnvelopeConfig{}, traj), InvalidInput);
}

TEST(Blue, FirstStepAndPrediction) {
  ProcessState s(50, 1);
  RecordRule rule;
  rule.stride = 1;
  const auto r = run(s, StopRule::after_steps(20), rule);
  const auto rep = blue_fraction_check({r});
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows.front().i, 1u);
  EXPECT_EQ(rep.rows.front().fraction, 1.0);
  const double t = rep.rows.front().t;
  EXPECT_DOUBLE_EQ(rep.rows.front().predicted, (2 * t + solve_r(t)) / (3 * t));
  EXPECT_FALSE(rep.terminal_fraction.has_value());
}

TEST(Fit, TwoVertices) {
  const auto table = fit_final_size({2}, {1, 2, 3});
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].mean_m, 1.0);
  EXPECT_TRUE(std::isfinite(table.rows[0].c));
  EXPECT_EQ(table.max_ratio, 1.0);
}

TEST(Fit, PermutationInvariant) {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6};
  const auto a = fit_final_size({30, 60}, seeds);
  std::shuffle(seeds.begin(), seeds.end(), std::mt19937(5));
  const auto b = fit_final_size({30, 60}, seeds);
  EXPECT_EQ(to_json(a), to_json(b));
  ASSERT_EQ(a.doublings.size(), 1u);
  EXPECT_NEAR(a.doublings[0].predicted, std::pow(2.0, 1.5) * std::sqrt(std::log(60.0) / std::log(30.0)), 1e-12);
}

TEST(Independence, SmallCases) {
  ProcessState empty(7, 1);
  EXPECT_EQ(greedy_blue_independence(empty), 7u);
  ProcessState one(3, 1);
  one.apply_edge(encode_pair(0, 1));
  EXPECT_EQ(greedy_blue_independence(one), 2u);
}

TEST(Independence, GreedyBoundedByExact) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Vertex n = 20 + seed % 21;
    auto s = support::random_state(n, seed, 1000000);
    const auto blue = blue_subgraph(s);
    const auto greedy = greedy_independent_set(blue);
    for (std::size_t a = 0; a < greedy.size(); ++a) {
      for (const Vertex w : blue[greedy[a]]) {
        ASSERT_EQ(std::find(greedy.begin(), greedy.end(), w), greedy.end());
      }
    }
    const auto alpha = exact_independence_number(blue);
    EXPECT_LE(greedy.size(), alpha);
    // in a diamond-free graph the neighbourhood of any vertex spans a matching
    AdjacencyList full(n);
    for (const PairId e : s.edges()) {
      const auto [u, v] = decode_pair(e);
      full[u].push_back(v);
      full[v].push_back(u);
    }
    std::size_t max_deg = 0;
    for (const auto& nb : full) max_deg = std::max(max_deg, nb.size());
    EXPECT_GE(2 * exact_independence_number(full), max_deg);
  }
}
