#pragma once

// Input vertices (f_i = id on X_i) and the sweep over all input
// combinations that assembles the complete attractor catalogue.

#include <chrono>
#include <map>
#include <vector>

#include "drn/modularize.hpp"
#include "drn/symbolic.hpp"

namespace drn {

/// Components whose rule is extensionally the identity on their range.
inline std::vector<std::size_t> detect_inputs(const Network& net) {
  std::vector<std::size_t> out;
  const auto full = net.full_box();
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto vary = net.support(i);
    if (std::find(vary.begin(), vary.end(), i) == vary.end()) continue;  // constant in x_i
    bool identity = true;
    for_each_assignment(full, vary, full.lower(), [&](const State& x) {
      if (identity && net.apply(i, x) != x[i]) identity = false;
    });
    if (identity) out.push_back(i);
  }
  return out;
}

/// Input component -> level.
using InputAssignment = std::map<std::size_t, int>;

/// Inputs fixed to the assignment, every other component at its full range.
inline SymbolicState input_box(const Network& net, const InputAssignment& inputs) {
  auto box = net.full_box();
  for (const auto& [i, v] : inputs) {
    if (i >= net.size() || v < 0 || v > net.max_level(i)) throw InvalidArgument("input assignment out of range");
    box[i] = Interval::point(v);
  }
  return box;
}

struct SweepEntry {
  InputAssignment inputs;
  DerivedSteadyState derived;
  ModularAnalysis analysis;
  double wall_ms = 0.0;

  const std::vector<Attractor>& attractors() const { return analysis.composed; }
};

/// Every combination of input levels in lexicographic order (first input
/// varies slowest). Modules above `cap` states are reported as deferred.
inline std::vector<SweepEntry> sweep(const Network& net, std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  const auto inputs = detect_inputs(net);
  if (inputs.empty()) throw InvalidArgument("network has no input vertices");
  std::vector<SweepEntry> out;
  State levels(inputs.size(), 0);
  while (true) {
    const auto t0 = std::chrono::steady_clock::now();
    InputAssignment a;
    for (std::size_t k = 0; k < inputs.size(); ++k) a[inputs[k]] = levels[k];
    auto derived = derive_from_box(net, input_box(net, a));
    auto analysis = analyze_modules(net, derived.state, cap);
    const auto t1 = std::chrono::steady_clock::now();
    out.push_back({std::move(a), std::move(derived), std::move(analysis),
                   std::chrono::duration<double, std::milli>(t1 - t0).count()});

    std::size_t k = inputs.size();
    while (k > 0) {
      if (++levels[k - 1] <= net.max_level(inputs[k - 1])) break;
      levels[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

}  // namespace drn
