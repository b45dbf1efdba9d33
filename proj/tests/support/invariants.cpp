#include "invariants.hpp"

#include "dfp/errors.hpp"

namespace dfp::support {

std::optional<std::string> invariant_violation(const ProcessState& s, std::uint32_t samples) {
  try {
    s.check_consistency();
  } catch (const std::exception& e) {
    return std::string("consistency: ") + e.what();
  }
  const Counters& c = s.counters();
  if (c.q0 + c.q1 != s.open_count()) return "Q0 + Q1 differs from the open list";
  if (c.m1 % 3 != 0) return "m1 not divisible by 3";
  if (c.blue + c.green != s.steps()) return "blue + green != i";
  if (c.green != c.m1 / 3) return "green != m1 / 3";
  if (c.blue != c.m0 + 2 * (c.m1 / 3)) return "blue != m0 + 2 m1 / 3";
  for (const PairId e : s.edges()) {
    const auto [u, v] = decode_pair(e);
    if (s.codegree(u, v) > 1) return "diamond on edge " + std::to_string(u) + "-" + std::to_string(v);
  }
  auto check = [&](Vertex u, Vertex v) -> std::optional<std::string> {
    if (s.classify(u, v) != s.state(u, v)) {
      return "class of " + std::to_string(u) + "-" + std::to_string(v) + " is " + std::string(to_string(s.state(u, v))) +
             ", recomputed " + std::string(to_string(s.classify(u, v)));
    }
    return std::nullopt;
  };
  if (s.n() <= 60) {
    for (Vertex v = 1; v < s.n(); ++v) {
      for (Vertex u = 0; u < v; ++u) {
        if (auto bad = check(u, v)) return bad;
      }
    }
  } else {
    Rng rng(mix_seed(s.seed() + s.steps()));
    for (std::uint32_t k = 0; k < samples; ++k) {
      const auto [u, v] = decode_pair(PairId{static_cast<std::uint32_t>(uniform_below(rng, pair_count(s.n())))});
      if (auto bad = check(u, v)) return bad;
    }
  }
  return std::nullopt;
}

std::optional<std::string> delta_violation(const UpdateDelta& d, const Counters& before, const Counters& after) {
  using S = PairState;
  for (const auto& t : d.transitions) {
    const bool ok = (t.from == S::E0 && t.to == S::E1) || (t.from == S::O0 && (t.to == S::O1 || t.to == S::C)) ||
                    (t.from == S::O1 && t.to == S::C);
    if (!ok) return "illegal transition " + std::string(to_string(t.from)) + " -> " + std::string(to_string(t.to));
  }
  if (d.prior == S::O0) {
    if (after.m1 != before.m1) return "m1 changed on an O0 step";
    if (after.blue != before.blue + 1 || after.green != before.green) return "O0 step must add one blue edge";
  } else if (d.prior == S::O1) {
    if (after.m1 != before.m1 + 3) return "m1 must grow by 3 on an O1 step";
    if (after.green != before.green + 1) return "green must grow by 1 on an O1 step";
  } else {
    return "chosen pair was not open";
  }
  return std::nullopt;
}

StepChecker::StepChecker(std::uint64_t full_every, std::uint32_t samples)
    : full_every_(full_every == 0 ? 1 : full_every), samples_(samples) {}

void StepChecker::record(std::optional<std::string> bad) {
  if (!bad) return;
  if (violations_++ == 0) first_ = *bad;
}

void StepChecker::operator()(const ProcessState& s, const UpdateDelta& d) {
  ++steps_;
  if (s.steps() == 1) prev_ = Counters{pair_count(s.n()), 0, 0, 0, 0, 0};
  record(delta_violation(d, prev_, s.counters()));
  prev_ = s.counters();
  if (s.n() <= 60) {
    ++full_checks_;
    record(invariant_violation(s));
    return;
  }
  const Counters& c = s.counters();
  if (c.q0 + c.q1 != s.open_count() || c.m1 % 3 != 0 || c.blue + c.green != s.steps() || c.green != c.m1 / 3 ||
      c.blue != c.m0 + 2 * (c.m1 / 3)) {
    record("counter identities broken at step " + std::to_string(s.steps()));
  }
  // only edges at u or v can have gained a common neighbour
  const auto [u, v] = decode_pair(d.chosen);
  for (const Vertex x : {u, v}) {
    for (const Vertex w : s.neighbors(x)) {
      if (s.codegree(x, w) > 1) record("diamond on edge " + std::to_string(x) + "-" + std::to_string(w));
    }
  }
  auto check = [&](PairId p) {
    const auto [a, b] = decode_pair(p);
    if (s.classify(a, b) != s.state(p)) record("stale class of pair " + std::to_string(p.value));
  };
  check(d.chosen);
  for (const auto& t : d.transitions) check(t.pair);
  for (std::uint32_t k = 0; k < samples_; ++k) {
    check(PairId{static_cast<std::uint32_t>(uniform_below(rng_, pair_count(s.n())))});
  }
  if (s.steps() % full_every_ == 0) finish(s);
}

void StepChecker::finish(const ProcessState& s) {
  ++full_checks_;
  try {
    s.check_consistency();
  } catch (const std::exception& e) {
    record(std::string("consistency: ") + e.what());
  }
}

ProcessState random_state(Vertex n, std::uint64_t seed, std::uint64_t steps) {
  ProcessState s(n, seed);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const auto p = s.sample_open();
    if (!p) break;
    s.apply_edge(*p);
  }
  return s;
}

ProcessState from_edges(Vertex n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  ProcessState s(n, 0);
  for (const auto& [u, v] : edges) s.apply_edge(encode_pair(u, v));
  return s;
}

}  // namespace dfp::support
