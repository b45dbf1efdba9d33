#include "dfp/run_record.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dfp/errors.hpp"
#include "json.hpp"

namespace dfp {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string run_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "i,t,Q0,Q1,m0,m1,blue,green,max_deg,max_codeg\n";
  for (const auto& s : rec.snapshots) {
    const auto& c = s.counters;
    out << s.i << ',' << format_double(s.t) << ',' << c.q0 << ',' << c.q1 << ',' << c.m0 << ',' << c.m1 << ','
        << c.blue << ',' << c.green << ',' << s.max_degree << ',' << s.max_codegree << '\n';
  }
  return out.str();
}

std::string probe_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "i,t,kind,id,value\n";
  for (const auto& s : rec.snapshots) {
    const std::string t = format_double(s.t);
    for (const auto& p : s.probes) {
      out << s.i << ',' << t << ',' << to_string(p.kind) << ',' << p.id << ',' << p.value << '\n';
    }
  }
  return out.str();
}

namespace {

std::string_view codegree_mode_name(CodegreeMode m) {
  switch (m) {
    case CodegreeMode::Auto: return "auto";
    case CodegreeMode::Exact: return "exact";
    case CodegreeMode::Sampled: return "sampled";
  }
  return "auto";
}

CodegreeMode parse_codegree_mode(const std::string& s) {
  if (s == "auto") return CodegreeMode::Auto;
  if (s == "exact") return CodegreeMode::Exact;
  if (s == "sampled") return CodegreeMode::Sampled;
  throw InvalidInput("unknown codegree mode '" + s + "'");
}

}  // namespace

std::string to_json(const RunRecord& rec) {
  json j;
  j["schema"] = 1;
  j["kind"] = "run";
  j["n"] = rec.n;
  j["seed"] = rec.seed;
  j["rng"] = rec.rng_algorithm;
  j["stop"] = {{"rule", rec.stop.kind == StopRule::Kind::Steps ? "steps" : "terminate"}, {"steps", rec.stop.steps}};
  j["stride"] = rec.stride;
  j["probes"] = {{"pairs", rec.probe_config.pairs},
                 {"vertices", rec.probe_config.vertices},
                 {"codegree", codegree_mode_name(rec.probe_config.codegree)},
                 {"codegree_samples", rec.probe_config.codegree_samples}};
  json snaps = json::array();
  for (const auto& s : rec.snapshots) {
    json probes = json::array();
    for (const auto& p : s.probes) probes.push_back(json::array({to_string(p.kind), p.id, p.value}));
    snaps.push_back({{"i", s.i},
                     {"t", s.t},
                     {"Q0", s.counters.q0},
                     {"Q1", s.counters.q1},
                     {"m0", s.counters.m0},
                     {"m1", s.counters.m1},
                     {"blue", s.counters.blue},
                     {"green", s.counters.green},
                     {"max_deg", s.max_degree},
                     {"max_codeg", s.max_codegree},
                     {"probes", std::move(probes)}});
  }
  j["snapshots"] = std::move(snaps);
  const auto& m = rec.summary;
  j["summary"] = {{"terminated", m.terminated},   {"edges", m.edges},
                  {"blue", m.blue},               {"green", m.green},
                  {"max_deg", m.max_degree},      {"max_codeg", m.max_codegree},
                  {"blue_independence", m.blue_independence}};
  return j.dump(1) + "\n";
}

RunRecord run_record_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<int>() != 1 || j.at("kind").get<std::string>() != "run") {
      throw InvalidInput("not a schema-1 run record");
    }
    RunRecord rec;
    rec.n = j.at("n").get<Vertex>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.rng_algorithm = j.at("rng").get<std::string>();
    const auto& stop = j.at("stop");
    rec.stop = stop.at("rule").get<std::string>() == "steps" ? StopRule::after_steps(stop.at("steps").get<std::uint64_t>())
                                                             : StopRule::to_termination();
    rec.stride = j.at("stride").get<std::uint64_t>();
    const auto& pc = j.at("probes");
    rec.probe_config.pairs = pc.at("pairs").get<std::uint32_t>();
    rec.probe_config.vertices = pc.at("vertices").get<std::uint32_t>();
    rec.probe_config.codegree = parse_codegree_mode(pc.at("codegree").get<std::string>());
    rec.probe_config.codegree_samples = pc.at("codegree_samples").get<std::uint32_t>();
    for (const auto& s : j.at("snapshots")) {
      Snapshot snap;
      snap.i = s.at("i").get<std::uint64_t>();
      snap.t = s.at("t").get<double>();
      snap.counters.q0 = s.at("Q0").get<std::uint64_t>();
      snap.counters.q1 = s.at("Q1").get<std::uint64_t>();
      snap.counters.m0 = s.at("m0").get<std::uint64_t>();
      snap.counters.m1 = s.at("m1").get<std::uint64_t>();
      snap.counters.blue = s.at("blue").get<std::uint64_t>();
      snap.counters.green = s.at("green").get<std::uint64_t>();
      snap.max_degree = s.at("max_deg").get<std::uint32_t>();
      snap.max_codegree = s.at("max_codeg").get<std::uint32_t>();
      for (const auto& p : s.at("probes")) {
        const auto kind = parse_probe_kind(p.at(0).get<std::string>());
        if (!kind) throw InvalidInput("unknown probe kind " + p.at(0).dump());
        snap.probes.push_back({*kind, p.at(1).get<std::uint32_t>(), p.at(2).get<std::uint32_t>()});
      }
      rec.snapshots.push_back(std::move(snap));
    }
    const auto& m = j.at("summary");
    rec.summary.terminated = m.at("terminated").get<bool>();
    rec.summary.edges = m.at("edges").get<std::uint64_t>();
    rec.summary.blue = m.at("blue").get<std::uint64_t>();
    rec.summary.green = m.at("green").get<std::uint64_t>();
    rec.summary.max_degree = m.at("max_deg").get<std::uint32_t>();
    rec.summary.max_codegree = m.at("max_codeg").get<std::uint32_t>();
    rec.summary.blue_independence = m.at("blue_independence").get<std::uint32_t>();
    return rec;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed run record: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.string() + ": cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << contents;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace dfp
