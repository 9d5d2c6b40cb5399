#pragma once

// Interval image operator F, extended forward orbits, frozen cores and the
// derivation of (symbolic) steady states.

#include <set>
#include <string>
#include <vector>

#include "drn/model.hpp"

namespace drn {

/// F(M): F_i(M) = [min f_i, max f_i] over the members of M. Only the support
/// coordinates of f_i are enumerated; the rest stay at their lower bound.
inline SymbolicState symbolic_image(const Network& net, const SymbolicState& M,
                                    std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  if (!net.in_range(M)) throw InvalidArgument("box does not belong to the network's state space");
  std::vector<Interval> out(net.size());
  const State base = M.lower();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& sup = net.support(i);
    check_cap(M.project(sup), cap);
    int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
    for_each_assignment(M, sup, base, [&](const State& x) {
      const int v = net.apply(i, x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    });
    out[i] = {lo, hi};
  }
  return SymbolicState(std::move(out));
}

/// M^0, M^1, ..., M^k of an iteration.
struct IterationTrace {
  std::vector<SymbolicState> states;
  bool converged = false;

  /// Number of operator applications that produced a new box.
  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
  const SymbolicState& limit() const { return states.back(); }
};

/// Upper bound on the length of any monotone iteration over the interval
/// lattice of `net`.
inline std::size_t iteration_bound(const Network& net) {
  std::size_t total = 0;
  for (const auto& c : net.components()) total += static_cast<std::size_t>(c.max_level);
  return 2 * total + 2;
}

/// Hull recurrence M~^k_j = hull(M~^{k-1}_j, F_j(M~^{k-1})) up to its fixed
/// point, a box that contains every state reachable from M.
inline IterationTrace extended_forward_orbit(const Network& net, const SymbolicState& M) {
  IterationTrace trace;
  trace.states.push_back(M);
  const auto bound = iteration_bound(net);
  for (std::size_t step = 0; step <= bound; ++step) {
    const auto& cur = trace.states.back();
    const auto image = symbolic_image(net, cur, std::nullopt);
    std::vector<Interval> next(cur.size());
    for (std::size_t j = 0; j < cur.size(); ++j) next[j] = cur[j].hull(image[j]);
    SymbolicState grown(std::move(next));
    if (grown == cur) {
      trace.converged = true;
      return trace;
    }
    trace.states.push_back(std::move(grown));
  }
  throw ConvergenceFailure("extended forward orbit did not converge within " + std::to_string(bound) + " steps");
}

/// Frozen core (I, M): I holds the regular components of M that the
/// extended forward orbit leaves unchanged.
struct FrozenCore {
  std::vector<std::size_t> indices;
  SymbolicState state;

  friend bool operator==(const FrozenCore&, const FrozenCore&) = default;
};

inline FrozenCore frozen_core(const Network& net, const SymbolicState& M) {
  const auto orbit = extended_forward_orbit(net, M).limit();
  FrozenCore core{{}, M};
  for (std::size_t i = 0; i < M.size(); ++i)
    if (M[i].regular() && orbit[i] == M[i]) core.indices.push_back(i);
  return core;
}

struct DerivedSteadyState {
  SymbolicState state;
  IterationTrace trace;

  bool regular() const { return state.is_regular(); }
};

/// Starts from the extended forward orbit of the core's box and applies F
/// until F(M) = M. The trace is M^0 (the orbit) through the limit. Throws
/// NotAFrozenCore unless `core.indices` is exactly the frozen core of
/// `core.state`.
inline DerivedSteadyState derive_steady_state(const Network& net, const FrozenCore& core) {
  if (!net.in_range(core.state)) throw InvalidArgument("box does not belong to the network's state space");
  if (frozen_core(net, core.state).indices != core.indices) throw NotAFrozenCore();

  DerivedSteadyState out;
  out.trace.states.push_back(extended_forward_orbit(net, core.state).limit());
  const auto bound = iteration_bound(net);
  for (std::size_t step = 0; step <= bound; ++step) {
    auto image = symbolic_image(net, out.trace.states.back(), std::nullopt);
    if (image == out.trace.states.back()) {
      out.trace.converged = true;
      out.state = std::move(image);
      return out;
    }
    out.trace.states.push_back(std::move(image));
  }
  throw ConvergenceFailure("symbolic steady state iteration did not converge within " + std::to_string(bound) +
                           " steps");
}

/// Convenience: frozen core of `M'` followed by the derivation.
inline DerivedSteadyState derive_from_box(const Network& net, const SymbolicState& start) {
  return derive_steady_state(net, frozen_core(net, start));
}

inline bool is_symbolic_fixed_point(const Network& net, const SymbolicState& M) {
  return symbolic_image(net, M, std::nullopt) == M;
}

/// Tuple notation: `(1,0,0,1,[0,2],0,...)`.
inline std::string format_tuple(const SymbolicState& M) {
  std::string s = "(";
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (i) s += ',';
    if (M[i].regular()) {
      s += std::to_string(M[i].lo);
    } else {
      s += '[' + std::to_string(M[i].lo) + ',' + std::to_string(M[i].hi) + ']';
    }
  }
  return s + ")";
}

inline std::string format_tuple(std::span<const int> x) { return format_tuple(SymbolicState::from_state(x)); }

}  // namespace drn
