#pragma once

// JSON and CSV reports shared by the command-line tool.

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drn/dynamics.hpp"
#include "drn/input_layer.hpp"
#include "drn/modularize.hpp"

namespace drn {

/// Regular components as integers, symbolic ones as [lo, hi].
inline nlohmann::json to_json(const SymbolicState& M) {
  auto j = nlohmann::json::array();
  for (const auto& iv : M) {
    if (iv.regular()) j.push_back(iv.lo);
    else j.push_back({iv.lo, iv.hi});
  }
  return j;
}

/// `{"symbolic_state", "frozen": {name: value}, "modules": [...], "composed_attractors": [...]}`
inline nlohmann::json module_report(const Network& net, const ModularAnalysis& a) {
  nlohmann::json j;
  j["symbolic_state"] = to_json(a.steady_state);
  j["frozen"] = nlohmann::json::object();
  for (auto i : a.steady_state.regular_components()) j["frozen"][net.component(i).name] = a.steady_state[i].lo;
  j["modules"] = nlohmann::json::array();
  for (const auto& m : a.modules) {
    nlohmann::json mj;
    mj["vertices"] = nlohmann::json::array();
    mj["domain"] = nlohmann::json::array();
    for (auto v : m.module.vertices()) mj["vertices"].push_back(net.component(v).name);
    for (const auto& iv : m.module.domain()) mj["domain"].push_back({iv.lo, iv.hi});
    mj["states"] = m.module.domain().cardinality();
    mj["attractors"] = attractor_report(m.attractors)["attractors"];
    j["modules"].push_back(std::move(mj));
  }
  if (a.deferred) j["deferred"] = true;
  j["composed_attractors"] = attractor_report(a.composed)["attractors"];
  return j;
}

/// One row per input combination. The wall-time column is emitted only on
/// request so that default output is reproducible byte for byte.
inline std::string sweep_csv(const Network& net, const std::vector<SweepEntry>& rows, bool timing = false) {
  std::ostringstream os;
  bool first = true;
  for (const auto& r : rows) {
    if (first) {
      for (const auto& [i, v] : r.inputs) os << net.component(i).name << ',';
      os << "frozen,symbolic,modules,module_sizes,attractors,steps,status";
      if (timing) os << ",wall_ms";
      os << '\n';
      first = false;
    }
    for (const auto& [i, v] : r.inputs) os << v << ',';
    const auto& M = r.derived.state;
    os << M.regular_components().size() << ',' << M.symbolic_components().size() << ',' << r.analysis.modules.size()
       << ',';
    for (std::size_t k = 0; k < r.analysis.modules.size(); ++k) {
      if (k) os << ';';
      os << r.analysis.modules[k].module.domain().cardinality();
    }
    os << ',';
    if (r.analysis.deferred) os << ',';
    else os << r.analysis.composed.size() << ',';
    os << r.derived.trace.steps() << ',' << (r.analysis.deferred ? "deferred" : "complete");
    if (timing) os << ',' << static_cast<long long>(r.wall_ms + 0.5);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json sweep_json(const Network& net, const std::vector<SweepEntry>& rows) {
  auto j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json e;
    e["inputs"] = nlohmann::json::object();
    for (const auto& [i, v] : r.inputs) e["inputs"][net.component(i).name] = v;
    e["steps"] = r.derived.trace.steps();
    e["report"] = module_report(net, r.analysis);
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace drn
