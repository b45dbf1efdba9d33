#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dfp/analysis.hpp"
#include "dfp/ensemble.hpp"
#include "dfp/errors.hpp"
#include "dfp/oracle.hpp"
#include "dfp/process.hpp"
#include "dfp/trajectory.hpp"

namespace dfp::cli {

namespace {

struct Options {
  Vertex n = 0;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  bool terminate = false;
  std::optional<double> t_max;
  std::optional<double> mu;
  double K = 10.0;
  double epsilon = 1.0 / 41.0;
  std::uint64_t stride = 0;
  std::uint32_t probes = 0;
  std::string codegree = "auto";
  std::string out = "dfp_out";
  std::string format = "csv";
  unsigned threads = 0;
};

// "a..b" is an inclusive range; a bare k means 1..k.
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw InvalidParameter("--seeds: expected a..b or k, got '" + text + "'");
    }
    return std::stoull(s);
  };
  std::uint64_t lo = 1, hi = 0;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    lo = number(text.substr(0, dots));
    hi = number(text.substr(dots + 2));
  } else {
    hi = number(text);
  }
  if (hi < lo) throw InvalidParameter("--seeds: empty range '" + text + "'");
  if (hi - lo >= 1000000) throw InvalidParameter("--seeds: range too large");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::vector<std::uint64_t> seeds_of(const Options& o) {
  if (o.seed && !o.seeds.empty()) throw InvalidParameter("--seed and --seeds are mutually exclusive");
  if (o.seed) return {*o.seed};
  if (!o.seeds.empty()) return parse_seed_list(o.seeds);
  return {1};
}

EnvelopeConfig envelope_of(const Options& o, double n) {
  EnvelopeConfig env;
  env.K = o.K;
  env.epsilon = o.epsilon;
  env.mu = o.mu;
  env.n = n;
  env.validate();
  return env;
}

StopRule stop_of(const Options& o, const EnvelopeConfig& env) {
  if (o.terminate) return StopRule::to_termination();
  const double n15 = std::pow(env.n, 1.5);
  if (o.t_max) {
    if (!(*o.t_max >= 0)) throw InvalidParameter("--t-max must be nonnegative");
    return StopRule::after_steps(static_cast<std::uint64_t>(std::floor(*o.t_max * n15)));
  }
  return StopRule::after_steps(static_cast<std::uint64_t>(std::floor(env.step_budget())));
}

CodegreeMode codegree_of(const std::string& s) {
  if (s == "auto") return CodegreeMode::Auto;
  if (s == "exact") return CodegreeMode::Exact;
  return CodegreeMode::Sampled;
}

EnsembleConfig ensemble_of(const Options& o) {
  if (o.n < 2) throw InvalidParameter("--n must be at least 2");
  EnsembleConfig cfg;
  cfg.n = o.n;
  cfg.seeds = seeds_of(o);
  cfg.stop = stop_of(o, envelope_of(o, o.n));
  cfg.record.stride = o.stride;
  cfg.record.probes.pairs = o.probes;
  cfg.record.probes.vertices = o.probes;
  cfg.record.probes.codegree = codegree_of(o.codegree);
  cfg.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.threads = o.threads;
  return cfg;
}

void add_run_flags(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "vertex count")->required();
  auto* seed = app->add_option("--seed", o.seed, "single seed");
  app->add_option("--seeds", o.seeds, "seed range a..b, or k for 1..k")->excludes(seed);
  auto* term = app->add_flag("--terminate", o.terminate, "run until no open pair remains");
  app->add_option("--t-max", o.t_max, "stop at scaled time T")->excludes(term);
  app->add_option("--mu", o.mu, "horizon constant (default epsilon/(2K))");
  app->add_option("--K", o.K, "envelope constant");
  app->add_option("--epsilon", o.epsilon, "envelope exponent, in (0, 1/40)");
  app->add_option("--stride", o.stride, "snapshot stride in steps (default ceil(n^1.5/100))");
  app->add_option("--probes", o.probes, "number of probe pairs and probe vertices");
  app->add_option("--codegree", o.codegree, "max codegree: auto|exact|sampled")
      ->check(CLI::IsMember({"auto", "exact", "sampled"}));
  app->add_option("--threads", o.threads, "worker threads (0: DFP_THREADS or all cores)");
}

// Runs from --runs, or simulated in memory from the run flags.
std::vector<RunRecord> gather_runs(const Options& o, const std::string& runs_dir) {
  if (!runs_dir.empty()) {
    auto runs = load_run_records(runs_dir);
    if (runs.empty()) throw InvalidInput(runs_dir + ": no run_*.json files");
    return runs;
  }
  return run_ensemble(ensemble_of(o), envelope_of(o, o.n)).runs;
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

int cmd_simulate(const Options& o, std::ostream& out) {
  auto cfg = ensemble_of(o);
  cfg.out_dir = o.out;
  const auto result = run_ensemble(cfg, envelope_of(o, o.n));
  for (const auto& r : result.runs) {
    out << "n=" << r.n << " seed=" << r.seed << " edges=" << r.summary.edges
        << " terminated=" << (r.summary.terminated ? "yes" : "no") << " blue=" << r.summary.blue
        << " green=" << r.summary.green << " max_deg=" << r.summary.max_degree
        << " max_codeg=" << r.summary.max_codegree << '\n';
  }
  out << "wrote " << result.runs.size() << " run(s) to " << o.out << '\n';
  return kOk;
}

int cmd_trajectory(const Options& o, double dt, const std::string& method, const std::optional<std::string>& path,
                   std::ostream& out) {
  if (!o.t_max || !(*o.t_max > 0)) throw InvalidParameter("trajectory: --t-max must be positive");
  if (!(dt > 0 && dt <= 1e-2)) throw InvalidParameter("trajectory: --dt must lie in (0, 0.01]");
  const EnvelopeConfig env = envelope_of(o, o.n == 0 ? 1e6 : static_cast<double>(o.n));
  std::vector<TrajectoryPoint> points;
  if (method == "ode") {
    points = integrate_ode(*o.t_max, dt);
  } else {
    const auto steps = static_cast<std::uint64_t>(std::llround(*o.t_max / dt));
    for (std::uint64_t k = 0; k <= steps; ++k) points.push_back(closed_form(std::min(*o.t_max, k * dt)));
  }
  const std::string csv = trajectory_csv(points, env);
  if (path) {
    write_file(*path, csv);
  } else {
    out << csv;
  }
  return kOk;
}

int cmd_compare(const Options& o, const std::string& runs_dir, const std::string& traj_path, double min_inside,
                std::ostream& out) {
  const auto runs = gather_runs(o, runs_dir);
  const Vertex n = runs.front().n;
  std::optional<std::vector<TrajectoryPoint>> traj;
  if (!traj_path.empty()) traj = parse_trajectory_csv(read_file(traj_path));
  const auto rep = compare(runs, envelope_of(o, n), traj);
  const auto file = std::filesystem::path(o.out) / ("compare_n" + std::to_string(n) + ".json");
  write_file(file, to_json(rep));
  out << "compare n=" << n << " seeds=" << rep.seeds << " gridpoints=" << rep.rows.size() << '\n';
  for (const auto& [name, frac] : rep.inside_fraction) out << "  " << name << " inside=" << fixed(frac, 4) << '\n';
  out << "report: " << file.string() << '\n';
  bool ok = true;
  for (const char* q : {"Q0", "Q1"}) {
    const auto it = rep.inside_fraction.find(q);
    if (it != rep.inside_fraction.end() && it->second < min_inside) {
      out << "FAIL: " << q << " envelope fraction " << fixed(it->second, 4) << " < " << min_inside << '\n';
      ok = false;
    }
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_blue(const Options& o, const std::string& runs_dir, std::ostream& out) {
  const auto runs = gather_runs(o, runs_dir);
  const auto rep = blue_fraction_check(runs);
  const auto file = std::filesystem::path(o.out) / ("blue_n" + std::to_string(runs.front().n) + ".json");
  write_file(file, to_json(rep));
  for (const double t : {0.25, 0.5, 1.0}) {
    if (rep.rows.empty() || std::abs(rep.nearest(t).t - t) > 0.05) continue;
    const auto& row = rep.nearest(t);
    out << "t=" << fixed(row.t, 4) << " blue=" << fixed(row.fraction) << " predicted=" << fixed(row.predicted)
        << " deviation=" << fixed(row.deviation) << '\n';
  }
  if (rep.terminal_fraction) {
    out << "terminal blue fraction=" << fixed(*rep.terminal_fraction) << " over " << rep.terminated_runs
        << " run(s) (reference 2/3)\n";
  }
  out << "report: " << file.string() << '\n';
  return kOk;
}

int cmd_fit(const Options& o, const std::vector<Vertex>& ns, double max_ratio, std::ostream& out) {
  if (ns.empty()) throw InvalidParameter("fit: --n needs at least one value");
  for (const Vertex n : ns) {
    if (n < 2) throw InvalidParameter("fit: every n must be at least 2");
  }
  auto sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto table = fit_final_size(sorted, seeds_of(o), o.threads, o.stride);
  write_file(std::filesystem::path(o.out) / "fit.json", to_json(table));
  for (const auto& r : table.rows) {
    out << "n=" << r.n << " seeds=" << r.seeds << " mean_M=" << fixed(r.mean_m, 1) << " c=" << fixed(r.c)
        << " +- " << fixed(r.stderr_c) << '\n';
  }
  for (const auto& d : table.doublings) {
    out << "M(" << d.n_to << ")/M(" << d.n_from << ")=" << fixed(d.observed, 4) << " predicted " << fixed(d.predicted, 4)
        << '\n';
  }
  out << "max c / min c = " << fixed(table.max_ratio, 4) << '\n';
  if (table.max_ratio > max_ratio) {
    out << "FAIL: ratio exceeds " << max_ratio << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.n < 2) throw InvalidParameter("--n must be at least 2");
  if (o.n > 40) throw InvalidParameter("verify: the naive engine is limited to n <= 40");
  std::map<std::string, std::uint64_t> failures;
  std::uint64_t steps = 0, pair_checks = 0, delta_checks = 0;
  for (const std::uint64_t seed : seeds_of(o)) {
    ProcessState fast(o.n, seed);
    oracle::NaiveEngine naive(o.n, seed);
    for (;;) {
      const auto table = fast.state_table();
      if (!std::equal(table.begin(), table.end(), naive.table().begin(), naive.table().end())) {
        ++failures["classification"];
      }
      try {
        fast.check_consistency();
      } catch (const std::exception&) {
        ++failures["counters"];
      }
      if (!fast.terminated()) {
        ++delta_checks;
        if (oracle::expected_deltas_by_formula(fast) != oracle::expected_deltas_by_enumeration(fast)) {
          ++failures["expected-deltas"];
        }
      }
      for (Vertex v = 1; v < o.n; ++v) {
        for (Vertex u = 0; u < v; ++u) {
          ++pair_checks;
          if (pair_observables(fast, u, v) != oracle::naive_pair_observables(naive.graph(), naive.table(), u, v)) {
            ++failures["pair-observables"];
          }
        }
      }
      const auto a = fast.sample_open_canonical();
      const auto b = naive.step();
      if (a != b) {
        ++failures["edge-sequence"];
        break;
      }
      if (!a) break;
      fast.apply_edge(*a);
      ++steps;
    }
  }
  out << "verify n=" << o.n << " steps=" << steps << " pair-checks=" << pair_checks << " delta-checks=" << delta_checks
      << '\n';
  for (const auto& [what, count] : failures) out << "FAIL: " << what << " mismatches=" << count << '\n';
  if (failures.empty()) out << "all oracle checks passed\n";
  return failures.empty() ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diamond-free random graph process: simulation and trajectory checks", "dfp"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "run seeds and write run files");
  add_run_flags(simulate, o);
  simulate->add_option("--out", o.out, "output directory");
  simulate->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  double dt = 1e-3;
  std::string method = "closed";
  std::optional<std::string> traj_out;
  auto* trajectory = app.add_subcommand("trajectory", "write the predicted trajectory as CSV");
  trajectory->add_option("--t-max", o.t_max, "last scaled time")->required();
  trajectory->add_option("--dt", dt, "grid spacing / RK4 step");
  trajectory->add_option("--n", o.n, "vertex count for the envelopes (default 1e6)");
  trajectory->add_option("--K", o.K, "envelope constant");
  trajectory->add_option("--epsilon", o.epsilon, "envelope exponent");
  trajectory->add_option("--mu", o.mu, "horizon constant");
  trajectory->add_option("--method", method, "closed|ode")->check(CLI::IsMember({"closed", "ode"}));
  trajectory->add_option("--out", traj_out, "output file (default stdout)");

  std::string runs_dir, traj_path;
  double min_inside = 0.95;
  auto* cmp = app.add_subcommand("compare", "compare runs with the trajectory and its envelopes");
  add_run_flags(cmp, o);
  cmp->get_option("--n")->required(false);
  cmp->add_option("--runs", runs_dir, "directory of run_*.json files (instead of simulating)");
  cmp->add_option("--trajectory", traj_path, "trajectory CSV to compare against (default closed form)");
  cmp->add_option("--min-inside", min_inside, "required Q0/Q1 envelope fraction");
  cmp->add_option("--out", o.out, "report directory");

  auto* blue = app.add_subcommand("blue", "blue edge fraction against (2t + r)/(3t)");
  add_run_flags(blue, o);
  blue->get_option("--n")->required(false);
  blue->add_option("--runs", runs_dir, "directory of run_*.json files (instead of simulating)");
  blue->add_option("--out", o.out, "report directory");

  std::vector<Vertex> fit_ns;
  double max_ratio = 1.25;
  auto* fit = app.add_subcommand("fit", "final size M / (sqrt(log n) n^1.5) across n");
  fit->add_option("--n", fit_ns, "comma-separated vertex counts")->required()->delimiter(',');
  auto* fit_seed = fit->add_option("--seed", o.seed, "single seed");
  fit->add_option("--seeds", o.seeds, "seed range a..b, or k for 1..k")->excludes(fit_seed);
  fit->add_option("--stride", o.stride, "snapshot stride");
  fit->add_option("--threads", o.threads, "worker threads");
  fit->add_option("--max-ratio", max_ratio, "fail when max c / min c exceeds this");
  fit->add_option("--out", o.out, "report directory");

  auto* verify = app.add_subcommand("verify", "cross-check the engine against the brute-force oracle");
  verify->add_option("--n", o.n, "vertex count (at most 40)")->required();
  auto* verify_seed = verify->add_option("--seed", o.seed, "single seed");
  verify->add_option("--seeds", o.seeds, "seed range a..b, or k for 1..k")->excludes(verify_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*trajectory) return cmd_trajectory(o, dt, method, traj_out, out);
    if (*cmp) {
      if (runs_dir.empty() && o.n == 0) throw InvalidParameter("compare: give --runs or --n");
      return cmd_compare(o, runs_dir, traj_path, min_inside, out);
    }
    if (*blue) {
      if (runs_dir.empty() && o.n == 0) throw InvalidParameter("blue: give --runs or --n");
      return cmd_blue(o, runs_dir, out);
    }
    if (*fit) return cmd_fit(o, fit_ns, max_ratio, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const InvalidParameter& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace dfp::cli
