#include "dfp/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "dfp/independence.hpp"

namespace dfp {

std::uint64_t default_stride(Vertex n) {
  const double scale = std::pow(static_cast<double>(n), 1.5);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(scale / 100.0)));
}

RunRecord run(ProcessState& state, const StopRule& stop, const RecordRule& record, const StepObserver& observer) {
  RunRecord rec;
  rec.n = state.n();
  rec.seed = state.seed();
  rec.rng_algorithm = std::string(kRngAlgorithm);
  rec.stop = stop;
  rec.stride = record.stride == 0 ? default_stride(state.n()) : record.stride;
  rec.probe_config = record.probes;

  const ProbeSet probes = select_probes(state.n(), state.seed(), record.probes);
  auto capture = [&] {
    rec.snapshots.push_back(snapshot(state, record.probes, probes));
    rec.summary.max_codegree = std::max(rec.summary.max_codegree, rec.snapshots.back().max_codegree);
  };
  capture();

  const auto done = [&] { return stop.kind == StopRule::Kind::Steps && state.steps() >= stop.steps; };
  while (!done()) {
    const auto pick = state.sample_open();
    if (!pick) break;
    const UpdateDelta delta = state.apply_edge(*pick);
    if (observer) observer(state, delta);
    if (state.steps() % rec.stride == 0) capture();
  }
  if (rec.snapshots.back().i != state.steps()) capture();

  rec.summary.terminated = state.terminated();
  rec.summary.edges = state.steps();
  rec.summary.blue = state.counters().blue;
  rec.summary.green = state.counters().green;
  rec.summary.max_degree = max_degree(state);
  rec.summary.blue_independence = greedy_blue_independence(state);
  return rec;
}

}  // namespace dfp
