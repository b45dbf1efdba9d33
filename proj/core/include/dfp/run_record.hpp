#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dfp/observables.hpp"

namespace dfp {

struct StopRule {
  enum class Kind : std::uint8_t { Steps, ToTermination };
  Kind kind = Kind::ToTermination;
  std::uint64_t steps = 0;

  static StopRule after_steps(std::uint64_t m) { return {Kind::Steps, m}; }
  static StopRule to_termination() { return {Kind::ToTermination, 0}; }

  friend bool operator==(const StopRule&, const StopRule&) = default;
};

struct RecordRule {
  std::uint64_t stride = 0;  // 0 selects the default ceil(n^{3/2} / 100)
  ProbeConfig probes;
};

std::uint64_t default_stride(Vertex n);

struct RunSummary {
  bool terminated = false;
  std::uint64_t edges = 0;  // M when terminated, else the step budget reached
  std::uint64_t blue = 0;
  std::uint64_t green = 0;
  std::uint32_t max_degree = 0;
  std::uint32_t max_codegree = 0;  // maximum over all snapshots
  std::uint32_t blue_independence = 0;  // min-degree greedy on the blue graph

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct RunRecord {
  Vertex n = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  StopRule stop;
  std::uint64_t stride = 0;
  ProbeConfig probe_config;
  std::vector<Snapshot> snapshots;
  RunSummary summary;

  friend bool operator==(const RunRecord& a, const RunRecord& b) {
    return a.n == b.n && a.seed == b.seed && a.rng_algorithm == b.rng_algorithm && a.stop == b.stop &&
           a.stride == b.stride && a.snapshots == b.snapshots && a.summary == b.summary &&
           a.probe_config.pairs == b.probe_config.pairs && a.probe_config.vertices == b.probe_config.vertices;
  }
};

/// Formats a double with 17 significant digits, '.' decimal separator.
std::string format_double(double x);

/// `i,t,Q0,Q1,m0,m1,blue,green,max_deg,max_codeg`
std::string run_csv(const RunRecord& rec);
/// `i,t,kind,id,value`
std::string probe_csv(const RunRecord& rec);

std::string to_json(const RunRecord& rec);
RunRecord run_record_from_json(const std::string& text);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace dfp
