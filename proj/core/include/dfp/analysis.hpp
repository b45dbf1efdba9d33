#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfp/ensemble.hpp"
#include "dfp/run_record.hpp"
#include "dfp/trajectory.hpp"

namespace dfp {

/// One observable at one gridpoint, in trajectory units.
struct Deviation {
  std::string name;
  double empirical = 0;  // mean over seeds (and probes)
  double predicted = 0;
  double abs_dev = 0;
  std::optional<double> rel_dev;  // absent when the prediction is 0
  double inside = 0;  // fraction of samples within the envelope
  std::uint32_t samples = 0;
};

struct CompareRow {
  std::uint64_t i = 0;
  double t = 0;
  std::vector<Deviation> observables;

  const Deviation* find(const std::string& name) const;
};

struct CompareReport {
  Vertex n = 0;
  std::uint32_t seeds = 0;
  EnvelopeConfig env;
  std::vector<CompareRow> rows;
  /// Envelope containment over every (seed, gridpoint[, probe]) sample with t > 0.
  std::map<std::string, double> inside_fraction;

  /// Row whose t is closest to `t`.
  const CompareRow& nearest(double t) const;
};

/// Compares runs of one n against the closed-form trajectory, or against
/// `trajectory` when given (its t values must match the common snapshot
/// grid). The i = 0 row is compared with the exact initial state.
///
/// Observables: Q0, Q1 (per n^2), E0 (|E0| per n^{3/2}), X0..X2 (per n),
/// Y00..Y11 (per sqrt n), W0, W1 (per n, against 2 q_j), D0, D1 (per sqrt n,
/// against 2r and 2(t - r)).
CompareReport compare(const std::vector<RunRecord>& runs, const EnvelopeConfig& env,
                      const std::optional<std::vector<TrajectoryPoint>>& trajectory = std::nullopt);

std::string to_json(const CompareReport& r);

struct BlueRow {
  std::uint64_t i = 0;
  double t = 0;
  double fraction = 0;  // mean blue / i over seeds
  double predicted = 0;  // (2t + r(t)) / (3t)
  double deviation = 0;
};

struct BlueReport {
  std::vector<BlueRow> rows;
  /// Mean terminal blue fraction over terminated runs; observational only.
  std::optional<double> terminal_fraction;
  std::uint32_t terminated_runs = 0;

  const BlueRow& nearest(double t) const;
};

BlueReport blue_fraction_check(const std::vector<RunRecord>& runs);
std::string to_json(const BlueReport& r);

struct FitTable {
  std::vector<FitRow> rows;  // ascending n
  double max_ratio = 0;      // max c / min c
  struct Doubling {
    Vertex n_from = 0, n_to = 0;
    double observed = 0;   // mean M(n_to) / mean M(n_from)
    double predicted = 0;  // (n_to/n_from)^{3/2} sqrt(log n_to / log n_from)
  };
  std::vector<Doubling> doublings;
};

/// Fit table from terminated runs grouped by n.
FitTable fit_from_runs(const std::map<Vertex, std::vector<RunRecord>>& runs_by_n);
/// Runs every n to termination for the given seeds and fits.
FitTable fit_final_size(const std::vector<Vertex>& ns, const std::vector<std::uint64_t>& seeds, unsigned threads = 0,
                        std::uint64_t stride = 0);
std::string to_json(const FitTable& f);

}  // namespace dfp
