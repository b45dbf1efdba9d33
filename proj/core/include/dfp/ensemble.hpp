#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dfp/run_record.hpp"
#include "dfp/trajectory.hpp"

namespace dfp {

enum class OutputFormat : std::uint8_t { Csv, Json };

struct EnsembleConfig {
  Vertex n = 0;
  std::vector<std::uint64_t> seeds;
  StopRule stop;
  RecordRule record;
  /// Per-seed run files and the summary are written here when set.
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::Csv;
  /// 0: DFP_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

/// Worker count honouring the DFP_THREADS cap.
unsigned resolve_threads(unsigned requested);

struct Stats {
  double mean = 0, stddev = 0, min = 0, max = 0;
  std::uint32_t count = 0;

  friend bool operator==(const Stats&, const Stats&) = default;
};

/// Order-independent statistics of integer samples (sums are exact).
Stats integer_stats(const std::vector<std::uint64_t>& samples);

inline constexpr std::array<const char*, 8> kSnapshotFields = {"Q0", "Q1",    "m0",      "m1",
                                                               "blue", "green", "max_deg", "max_codeg"};

struct GridRow {
  std::uint64_t i = 0;
  double t = 0;
  std::array<Stats, kSnapshotFields.size()> fields;
};

struct FitRow {
  Vertex n = 0;
  std::uint32_t seeds = 0;
  double mean_m = 0, stderr_m = 0;
  double c = 0, stderr_c = 0;  // M / (sqrt(log n) n^{3/2})
};

struct EnsembleSummary {
  Vertex n = 0;
  std::vector<std::uint64_t> seeds;
  std::uint64_t stride = 0;
  std::vector<GridRow> grid;
  /// Fraction of (seed, gridpoint) samples outside q_j +- delta_q.
  double q0_violation = 0, q1_violation = 0;
  std::optional<FitRow> fit;  // present when every run terminated
};

/// Aggregates runs of a single n on the common grid i = k * stride.
/// Throws InvalidInput when runs disagree on n or stride.
EnsembleSummary summarize(const std::vector<RunRecord>& runs, const EnvelopeConfig& env);

struct EnsembleResult {
  std::vector<RunRecord> runs;  // in seed order
  EnsembleSummary summary;
};

/// Runs every seed (in parallel), persists per-seed files, aggregates.
EnsembleResult run_ensemble(const EnsembleConfig& cfg, const EnvelopeConfig& env);

std::string to_json(const EnsembleSummary& s);

/// run_n{n}_s{seed}.csv / probes_n{n}_s{seed}.csv, or run_n{n}_s{seed}.json
void write_run_files(const std::filesystem::path& dir, const RunRecord& rec, OutputFormat format);
/// Reads every run_*.json file of a directory, ordered by (n, seed).
std::vector<RunRecord> load_run_records(const std::filesystem::path& dir);

}  // namespace dfp
