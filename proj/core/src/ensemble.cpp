#include "dfp/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "dfp/errors.hpp"
#include "dfp/rng.hpp"
#include "dfp/simulation.hpp"
#include "json.hpp"

namespace dfp {

using json = nlohmann::ordered_json;

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DFP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

Stats integer_stats(const std::vector<std::uint64_t>& samples) {
  Stats s;
  s.count = static_cast<std::uint32_t>(samples.size());
  if (samples.empty()) return s;
  Uint128 sum = 0, sum_sq = 0;
  std::uint64_t lo = samples.front(), hi = samples.front();
  for (const auto x : samples) {
    sum += x;
    sum_sq += static_cast<Uint128>(x) * x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double k = static_cast<double>(samples.size());
  s.mean = static_cast<double>(sum) / k;
  if (samples.size() > 1) {
    // k * sum_sq - sum^2 is exact in 128 bits for counts of this size
    const auto num = static_cast<double>(static_cast<Uint128>(samples.size()) * sum_sq - sum * sum);
    s.stddev = std::sqrt(num / (k * (k - 1)));
  }
  s.min = static_cast<double>(lo);
  s.max = static_cast<double>(hi);
  return s;
}

namespace {

std::uint64_t field(const Snapshot& s, std::size_t k) {
  switch (k) {
    case 0: return s.counters.q0;
    case 1: return s.counters.q1;
    case 2: return s.counters.m0;
    case 3: return s.counters.m1;
    case 4: return s.counters.blue;
    case 5: return s.counters.green;
    case 6: return s.max_degree;
    default: return s.max_codegree;
  }
}

}  // namespace

EnsembleSummary summarize(const std::vector<RunRecord>& runs, const EnvelopeConfig& env) {
  if (runs.empty()) throw InvalidInput("summarize: no runs");
  EnsembleSummary out;
  out.n = runs.front().n;
  out.stride = runs.front().stride;
  for (const auto& r : runs) {
    if (r.n != out.n || r.stride != out.stride) throw InvalidInput("summarize: runs differ in n or stride");
    out.seeds.push_back(r.seed);
  }
  std::sort(out.seeds.begin(), out.seeds.end());

  // Only stride-aligned snapshots enter the grid; the trailing final-state
  // snapshot of a run is usually off-grid.
  std::uint64_t max_i = 0;
  for (const auto& r : runs) max_i = std::max(max_i, r.snapshots.back().i);
  const double scale = std::pow(static_cast<double>(out.n), 1.5);
  const double n2 = static_cast<double>(out.n) * out.n;
  std::uint64_t q_samples = 0, q0_out = 0, q1_out = 0;
  for (std::uint64_t i = 0; i <= max_i; i += out.stride) {
    std::array<std::vector<std::uint64_t>, kSnapshotFields.size()> samples;
    for (const auto& r : runs) {
      const std::size_t idx = i / out.stride;
      if (idx >= r.snapshots.size() || r.snapshots[idx].i != i) continue;
      const Snapshot& s = r.snapshots[idx];
      for (std::size_t k = 0; k < samples.size(); ++k) samples[k].push_back(field(s, k));
      if (i > 0) {
        const double t = s.t;
        const auto p = closed_form(t);
        const auto e = envelopes(t, env);
        ++q_samples;
        q0_out += std::abs(static_cast<double>(s.counters.q0) / n2 - p.q0) > e.delta_q;
        q1_out += std::abs(static_cast<double>(s.counters.q1) / n2 - p.q1) > e.delta_q;
      }
    }
    if (samples[0].empty()) continue;
    GridRow row;
    row.i = i;
    row.t = static_cast<double>(i) / scale;
    for (std::size_t k = 0; k < samples.size(); ++k) row.fields[k] = integer_stats(samples[k]);
    out.grid.push_back(row);
  }
  if (q_samples > 0) {
    out.q0_violation = static_cast<double>(q0_out) / static_cast<double>(q_samples);
    out.q1_violation = static_cast<double>(q1_out) / static_cast<double>(q_samples);
  }

  if (std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.summary.terminated; })) {
    std::vector<std::uint64_t> sizes;
    for (const auto& r : runs) sizes.push_back(r.summary.edges);
    const Stats st = integer_stats(sizes);
    const double norm = std::sqrt(std::log(static_cast<double>(out.n))) * scale;
    FitRow fit;
    fit.n = out.n;
    fit.seeds = st.count;
    fit.mean_m = st.mean;
    fit.stderr_m = st.stddev / std::sqrt(static_cast<double>(st.count));
    fit.c = fit.mean_m / norm;
    fit.stderr_c = fit.stderr_m / norm;
    out.fit = fit;
  }
  return out;
}

void write_run_files(const std::filesystem::path& dir, const RunRecord& rec, OutputFormat format) {
  const std::string stem = "n" + std::to_string(rec.n) + "_s" + std::to_string(rec.seed);
  if (format == OutputFormat::Json) {
    write_file(dir / ("run_" + stem + ".json"), to_json(rec));
  } else {
    write_file(dir / ("run_" + stem + ".csv"), run_csv(rec));
    write_file(dir / ("probes_" + stem + ".csv"), probe_csv(rec));
  }
}

std::vector<RunRecord> load_run_records(const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("run_") && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  std::vector<RunRecord> runs;
  for (const auto& f : files) {
    try {
      runs.push_back(run_record_from_json(read_file(f)));
    } catch (const InvalidInput& e) {
      throw InvalidInput(f.string() + ": " + e.what());
    }
  }
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return std::pair(a.n, a.seed) < std::pair(b.n, b.seed); });
  return runs;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg, const EnvelopeConfig& env) {
  if (cfg.seeds.empty()) throw InvalidParameter("run_ensemble: at least one seed required");
  auto seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end()) {
    throw InvalidParameter("run_ensemble: seeds must be distinct");
  }

  EnsembleResult result;
  result.runs.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < seeds.size();) {
      try {
        ProcessState state(cfg.n, seeds[k]);
        result.runs[k] = run(state, cfg.stop, cfg.record);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(resolve_threads(cfg.threads), static_cast<unsigned>(seeds.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  result.summary = summarize(result.runs, env);
  if (cfg.out_dir) {
    for (const auto& r : result.runs) write_run_files(*cfg.out_dir, r, cfg.format);
    write_file(*cfg.out_dir / ("summary_n" + std::to_string(cfg.n) + ".json"), to_json(result.summary));
  }
  return result;
}

namespace {

json stats_json(const Stats& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

}  // namespace

std::string to_json(const EnsembleSummary& s) {
  json j;
  j["schema"] = 1;
  j["kind"] = "ensemble";
  j["n"] = s.n;
  j["seeds"] = s.seeds;
  j["stride"] = s.stride;
  j["envelope_violation"] = {{"Q0", s.q0_violation}, {"Q1", s.q1_violation}};
  json grid = json::array();
  for (const auto& row : s.grid) {
    json r = {{"i", row.i}, {"t", row.t}};
    for (std::size_t k = 0; k < kSnapshotFields.size(); ++k) r[kSnapshotFields[k]] = stats_json(row.fields[k]);
    grid.push_back(std::move(r));
  }
  j["grid"] = std::move(grid);
  if (s.fit) {
    j["fit"] = {{"n", s.fit->n},           {"seeds", s.fit->seeds}, {"mean_M", s.fit->mean_m},
                {"stderr_M", s.fit->stderr_m}, {"c", s.fit->c},         {"stderr_c", s.fit->stderr_c}};
  } else {
    j["fit"] = nullptr;
  }
  return j.dump(1) + "\n";
}

}  // namespace dfp
