#include "dfp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dfp/errors.hpp"
#include "json.hpp"

namespace dfp {

using json = nlohmann::ordered_json;

const Deviation* CompareRow::find(const std::string& name) const {
  for (const auto& d : observables) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const CompareRow& CompareReport::nearest(double t) const {
  if (rows.empty()) throw InvalidInput("compare report has no rows");
  return *std::min_element(rows.begin(), rows.end(), [t](const CompareRow& a, const CompareRow& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
}

const BlueRow& BlueReport::nearest(double t) const {
  if (rows.empty()) throw InvalidInput("blue report has no rows");
  return *std::min_element(rows.begin(), rows.end(), [t](const BlueRow& a, const BlueRow& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
}

namespace {

void check_common_grid(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw InvalidInput("no runs to analyse");
  for (const auto& r : runs) {
    if (r.n != runs.front().n || r.stride != runs.front().stride) {
      throw InvalidInput("runs differ in n or stride; grids do not match");
    }
  }
}

// Stride-aligned snapshot of a run at grid index k, if the run reached it.
const Snapshot* grid_snapshot(const RunRecord& r, std::uint64_t k) {
  if (k >= r.snapshots.size() || r.snapshots[k].i != k * r.stride) return nullptr;
  return &r.snapshots[k];
}

std::uint64_t grid_length(const std::vector<RunRecord>& runs) {
  std::uint64_t len = 0;
  for (const auto& r : runs) {
    std::uint64_t k = 0;
    while (grid_snapshot(r, k)) ++k;
    len = std::max(len, k);
  }
  return len;
}

struct Accumulator {
  std::string name;
  double predicted = 0;
  double delta = 0;
  double scale = 1;
  std::uint64_t raw_sum = 0;  // exact, so the mean does not depend on seed order
  std::uint32_t count = 0;
  std::uint32_t inside = 0;

  void add(std::uint64_t raw) {
    raw_sum += raw;
    ++count;
    inside += std::abs(static_cast<double>(raw) / scale - predicted) <= delta;
  }
  double mean() const { return static_cast<double>(raw_sum) / count / scale; }
};

}  // namespace

CompareReport compare(const std::vector<RunRecord>& runs, const EnvelopeConfig& env,
                      const std::optional<std::vector<TrajectoryPoint>>& trajectory) {
  check_common_grid(runs);
  const Vertex n = runs.front().n;
  const double nd = n;
  const double n2 = nd * nd;
  const double n15 = std::pow(nd, 1.5);
  const double sqn = std::sqrt(nd);
  EnvelopeConfig cfg = env;
  cfg.n = nd;

  CompareReport rep;
  rep.n = n;
  rep.seeds = static_cast<std::uint32_t>(runs.size());
  rep.env = cfg;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> totals;  // inside, count

  const std::uint64_t len = grid_length(runs);
  for (std::uint64_t k = 0; k < len; ++k) {
    const std::uint64_t i = k * runs.front().stride;
    const double t = static_cast<double>(i) / n15;
    TrajectoryPoint p;
    if (trajectory) {
      const auto it = std::find_if(trajectory->begin(), trajectory->end(), [t](const TrajectoryPoint& q) {
        return std::abs(q.t - t) <= 1e-9 * std::max(1.0, t);
      });
      if (it == trajectory->end()) throw InvalidInput("trajectory grid does not contain t = " + format_double(t));
      p = *it;
    } else {
      p = closed_form(t);
    }
    Envelopes e = envelopes(t, cfg);

    // name, prediction, envelope half-width
    std::vector<Accumulator> acc = {
        {"Q0", p.q0, e.delta_q, n2},      {"Q1", p.q1, e.delta_q, n2},      {"E0", p.r, e.delta_r / 2, n15},
        {"X0", p.x0, e.delta_x, nd},      {"X1", p.x1, e.delta_x, nd},      {"X2", p.x2, e.delta_x, nd},
        {"Y00", p.y00, e.delta_y, sqn},   {"Y01", p.y01, e.delta_y, sqn},   {"Y10", p.y10, e.delta_y, sqn},
        {"Y11", p.y11, e.delta_y, sqn},   {"W0", 2 * p.q0, e.delta_q, nd},  {"W1", 2 * p.q1, e.delta_q, nd},
        {"D0", 2 * p.r, e.delta_r, sqn},  {"D1", 2 * (t - p.r), e.delta_r, sqn},
    };
    if (i == 0) {
      // exact initial state as the baseline
      for (auto& a : acc) a.predicted = 0;
      acc[0].predicted = static_cast<double>(pair_count(n)) / n2;
      acc[3].predicted = (nd - 2) / nd;
      acc[10].predicted = (nd - 1) / nd;
    }
    auto slot = [&acc](ProbeKind kind) -> Accumulator& {
      return acc[3 + static_cast<std::size_t>(kind)];
    };
    for (const auto& r : runs) {
      const Snapshot* s = grid_snapshot(r, k);
      if (!s) continue;
      acc[0].add(s->counters.q0);
      acc[1].add(s->counters.q1);
      acc[2].add(s->counters.m0);
      for (const auto& pv : s->probes) slot(pv.kind).add(pv.value);
    }
    CompareRow row;
    row.i = i;
    row.t = t;
    for (const auto& a : acc) {
      if (a.count == 0) continue;
      Deviation d;
      d.name = a.name;
      d.empirical = a.mean();
      d.predicted = a.predicted;
      d.abs_dev = d.empirical - d.predicted;
      if (d.predicted != 0) d.rel_dev = d.abs_dev / d.predicted;
      d.inside = static_cast<double>(a.inside) / a.count;
      d.samples = a.count;
      if (i > 0) {
        totals[a.name].first += a.inside;
        totals[a.name].second += a.count;
      }
      row.observables.push_back(std::move(d));
    }
    rep.rows.push_back(std::move(row));
  }
  for (const auto& [name, tally] : totals) {
    rep.inside_fraction[name] = static_cast<double>(tally.first) / static_cast<double>(tally.second);
  }
  return rep;
}

std::string to_json(const CompareReport& r) {
  json j;
  j["schema"] = 1;
  j["kind"] = "compare";
  j["n"] = r.n;
  j["seeds"] = r.seeds;
  j["K"] = r.env.K;
  j["epsilon"] = r.env.epsilon;
  j["mu"] = r.env.horizon_mu();
  json inside = json::object();
  for (const auto& [k, v] : r.inside_fraction) inside[k] = v;
  j["inside_fraction"] = std::move(inside);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json obs = json::array();
    for (const auto& d : row.observables) {
      obs.push_back({{"name", d.name},
                     {"empirical", d.empirical},
                     {"predicted", d.predicted},
                     {"abs_dev", d.abs_dev},
                     {"rel_dev", d.rel_dev ? json(*d.rel_dev) : json(nullptr)},
                     {"inside", d.inside},
                     {"samples", d.samples}});
    }
    rows.push_back({{"i", row.i}, {"t", row.t}, {"observables", std::move(obs)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

BlueReport blue_fraction_check(const std::vector<RunRecord>& runs) {
  check_common_grid(runs);
  const double n15 = std::pow(static_cast<double>(runs.front().n), 1.5);
  BlueReport rep;
  const std::uint64_t len = grid_length(runs);
  for (std::uint64_t k = 1; k < len; ++k) {
    const std::uint64_t i = k * runs.front().stride;
    double sum = 0;
    std::uint32_t count = 0;
    for (const auto& r : runs) {
      if (const Snapshot* s = grid_snapshot(r, k)) {
        sum += static_cast<double>(s->counters.blue) / static_cast<double>(i);
        ++count;
      }
    }
    if (count == 0) continue;
    BlueRow row;
    row.i = i;
    row.t = static_cast<double>(i) / n15;
    row.fraction = sum / count;
    row.predicted = (2 * row.t + solve_r(row.t)) / (3 * row.t);
    row.deviation = row.fraction - row.predicted;
    rep.rows.push_back(row);
  }
  double terminal = 0;
  for (const auto& r : runs) {
    if (!r.summary.terminated || r.summary.edges == 0) continue;
    terminal += static_cast<double>(r.summary.blue) / static_cast<double>(r.summary.edges);
    ++rep.terminated_runs;
  }
  if (rep.terminated_runs > 0) rep.terminal_fraction = terminal / rep.terminated_runs;
  return rep;
}

std::string to_json(const BlueReport& r) {
  json j;
  j["schema"] = 1;
  j["kind"] = "blue";
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"i", row.i},
                    {"t", row.t},
                    {"fraction", row.fraction},
                    {"predicted", row.predicted},
                    {"deviation", row.deviation}});
  }
  j["rows"] = std::move(rows);
  j["terminated_runs"] = r.terminated_runs;
  j["terminal_fraction"] = r.terminal_fraction ? json(*r.terminal_fraction) : json(nullptr);
  j["terminal_reference"] = 2.0 / 3.0;
  return j.dump(1) + "\n";
}

FitTable fit_from_runs(const std::map<Vertex, std::vector<RunRecord>>& runs_by_n) {
  FitTable table;
  for (const auto& [n, runs] : runs_by_n) {
    std::vector<std::uint64_t> sizes;
    for (const auto& r : runs) {
      if (!r.summary.terminated) throw InvalidInput("fit: run n=" + std::to_string(n) + " did not terminate");
      sizes.push_back(r.summary.edges);
    }
    if (sizes.empty()) continue;
    const Stats st = integer_stats(sizes);
    const double norm = std::sqrt(std::log(static_cast<double>(n))) * std::pow(static_cast<double>(n), 1.5);
    FitRow row;
    row.n = n;
    row.seeds = st.count;
    row.mean_m = st.mean;
    row.stderr_m = st.stddev / std::sqrt(static_cast<double>(st.count));
    row.c = row.mean_m / norm;
    row.stderr_c = row.stderr_m / norm;
    table.rows.push_back(row);
  }
  if (!table.rows.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& row : table.rows) {
      lo = std::min(lo, row.c);
      hi = std::max(hi, row.c);
    }
    table.max_ratio = hi / lo;
  }
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const auto& a = table.rows[k - 1];
    const auto& b = table.rows[k];
    const double na = a.n, nb = b.n;
    const double predicted = (na > 1) ? std::pow(nb / na, 1.5) * std::sqrt(std::log(nb) / std::log(na))
                                      : std::numeric_limits<double>::quiet_NaN();
    table.doublings.push_back({a.n, b.n, b.mean_m / a.mean_m, predicted});
  }
  return table;
}

FitTable fit_final_size(const std::vector<Vertex>& ns, const std::vector<std::uint64_t>& seeds, unsigned threads,
                        std::uint64_t stride) {
  std::map<Vertex, std::vector<RunRecord>> by_n;
  for (const Vertex n : ns) {
    EnsembleConfig cfg;
    cfg.n = n;
    cfg.seeds = seeds;
    cfg.stop = StopRule::to_termination();
    // ten gridpoints per unit t; only the final size matters here
    cfg.record.stride = stride != 0 ? stride : std::max<std::uint64_t>(1, default_stride(n) * 10);
    cfg.threads = threads;
    by_n[n] = run_ensemble(cfg, EnvelopeConfig{}).runs;
  }
  return fit_from_runs(by_n);
}

std::string to_json(const FitTable& f) {
  json j;
  j["schema"] = 1;
  j["kind"] = "fit";
  json rows = json::array();
  for (const auto& r : f.rows) {
    rows.push_back({{"n", r.n},
                    {"seeds", r.seeds},
                    {"mean_M", r.mean_m},
                    {"stderr_M", r.stderr_m},
                    {"c", r.c},
                    {"stderr_c", r.stderr_c}});
  }
  j["rows"] = std::move(rows);
  j["max_ratio"] = f.max_ratio;
  json d = json::array();
  for (const auto& x : f.doublings) {
    d.push_back({{"from", x.n_from}, {"to", x.n_to}, {"observed", x.observed}, {"predicted", x.predicted}});
  }
  j["size_ratios"] = std::move(d);
  return j.dump(1) + "\n";
}

}  // namespace dfp
