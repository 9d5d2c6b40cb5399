#pragma once

// Decomposition of a symbolic steady state M into autonomous network
// modules, the product transition graph built from the module graphs, and
// composition of module attractors into attractors of the full network.

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "drn/dynamics.hpp"
#include "drn/model.hpp"
#include "drn/structure.hpp"
#include "drn/symbolic.hpp"

namespace drn {

/// G^theta(M): the edges of G(f|_M) between symbolic components of M.
struct ThetaGraph {
  InteractionGraph graph;
  SymbolicState source_box;
};

inline void require_symbolic_fixed_point(const Network& net, const SymbolicState& M) {
  if (!net.in_range(M)) throw InvalidArgument("box does not belong to the network's state space");
  if (!is_symbolic_fixed_point(net, M)) throw NotSymbolicSteadyState();
}

inline ThetaGraph theta_graph(const Network& net, const SymbolicState& M) {
  require_symbolic_fixed_point(net, M);
  const auto restricted = interaction_graph_over(net, M, NeighbourScope::within_box, std::nullopt);
  const auto J = M.symbolic_components();
  const std::set<std::size_t> js(J.begin(), J.end());
  ThetaGraph out{InteractionGraph(js), M};
  for (const auto& e : restricted.edges())
    if (js.count(e.src) && js.count(e.dst)) out.graph.add_edge(e);
  return out;
}

/// Weakly connected components of G^theta(M), ordered by smallest index.
inline std::vector<std::vector<std::size_t>> theta_components(const ThetaGraph& g) {
  return g.graph.weak_components();
}

/// Network module f^Z = pi^Z o F o rho^Z derived from a union Z of theta
/// components. Its domain is the box of the original levels M_i, i in Z,
/// and positions map to parent components through `vertices()`.
class NetworkModule {
 public:
  NetworkModule(std::shared_ptr<const Network> parent, SymbolicState steady, std::vector<std::size_t> vertices)
      : parent_(std::move(parent)),
        steady_(std::move(steady)),
        vertices_(std::move(vertices)),
        domain_(steady_.project(vertices_)) {}

  const Network& parent() const { return *parent_; }
  const SymbolicState& steady_state() const noexcept { return steady_; }
  /// iota: position k of the module is parent component vertices()[k].
  const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }
  const SymbolicState& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  /// f^Z(z). Components of M outside Z are pinned to any member value;
  /// independence of Z from the rest of J(M) makes the choice irrelevant.
  void apply(std::span<const int> z, std::span<int> out) const {
    State x = steady_.lower();
    for (std::size_t k = 0; k < vertices_.size(); ++k) x[vertices_[k]] = z[k];
    for (std::size_t k = 0; k < vertices_.size(); ++k) out[k] = parent_->apply(vertices_[k], x);
  }

  State apply(std::span<const int> z) const {
    State out(vertices_.size());
    apply(z, out);
    return out;
  }

  /// pi^Z(x).
  State project(std::span<const int> x) const {
    State z(vertices_.size());
    for (std::size_t k = 0; k < vertices_.size(); ++k) z[k] = x[vertices_[k]];
    return z;
  }

  StepMap step() const {
    return [self = *this](std::span<const int> z, std::span<int> out) { self.apply(z, out); };
  }

  /// S(f^Z) over the module domain.
  TransitionGraph stg(std::optional<std::uint64_t> cap = kDefaultEnumerationCap) const {
    check_cap(domain_, cap);
    auto g = TransitionGraph::asynchronous(domain_, step());
    if (g.vertex_count() < kMaterializeThreshold) g.materialize();
    return g;
  }

  /// G(f^Z) with vertices renamed to parent component indices. Unit steps
  /// stay inside the module domain.
  InteractionGraph interaction_graph() const {
    InteractionGraph g(std::set<std::size_t>(vertices_.begin(), vertices_.end()));
    State fz(vertices_.size()), fy(vertices_.size());
    for (const auto& z : box_members(domain_, std::nullopt)) {
      apply(z, fz);
      State y = z;
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (int c : {-1, 1}) {
          const int v = z[i] + c;
          if (!domain_[i].contains(v)) continue;
          y[i] = v;
          apply(y, fy);
          y[i] = z[i];
          for (std::size_t j = 0; j < vertices_.size(); ++j) {
            const int d = fy[j] - fz[j];
            if (d != 0)
              g.add_edge({vertices_[i], vertices_[j], (d > 0) == (c > 0) ? Sign::positive : Sign::negative});
          }
        }
      }
    }
    return g;
  }

 private:
  std::shared_ptr<const Network> parent_;
  SymbolicState steady_;
  std::vector<std::size_t> vertices_;
  SymbolicState domain_;
};

/// Builds f^Z for a union Z of theta components of the symbolic steady state M.
inline NetworkModule build_module(const Network& net, const SymbolicState& M, std::vector<std::size_t> Z) {
  const auto theta = theta_graph(net, M);
  std::sort(Z.begin(), Z.end());
  Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
  if (Z.empty()) throw NotAComponentUnion();
  const std::set<std::size_t> zs(Z.begin(), Z.end());
  for (auto z : Z)
    if (!theta.graph.vertices().count(z)) throw NotAComponentUnion();
  for (const auto& comp : theta_components(theta)) {
    const auto inside = std::count_if(comp.begin(), comp.end(), [&](std::size_t v) { return zs.count(v) > 0; });
    if (inside != 0 && static_cast<std::size_t>(inside) != comp.size()) throw NotAComponentUnion();
  }
  return NetworkModule(std::make_shared<const Network>(net), M, std::move(Z));
}

/// One module per theta component.
inline std::vector<NetworkModule> build_modules(const Network& net, const SymbolicState& M) {
  const auto theta = theta_graph(net, M);
  auto parent = std::make_shared<const Network>(net);
  std::vector<NetworkModule> out;
  for (auto& comp : theta_components(theta)) out.emplace_back(parent, M, std::move(comp));
  return out;
}

namespace detail {

inline void require_partition(const SymbolicState& M, const std::vector<NetworkModule>& modules) {
  std::vector<std::size_t> covered;
  for (const auto& m : modules) {
    if (!(m.steady_state() == M)) throw InvalidArgument("module derived from a different symbolic steady state");
    covered.insert(covered.end(), m.vertices().begin(), m.vertices().end());
  }
  std::sort(covered.begin(), covered.end());
  if (covered != M.symbolic_components())
    throw InvalidArgument("modules do not partition the symbolic components");
}

}  // namespace detail

/// Product transition graph S^M over the members of M: a self-loop at x iff
/// every module is at a fixed point; otherwise an edge for each move of a
/// single module with all other coordinates unchanged.
inline TransitionGraph product_stg(const Network& net, const SymbolicState& M, const std::vector<NetworkModule>& modules,
                                   std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  require_symbolic_fixed_point(net, M);
  detail::require_partition(M, modules);
  check_cap(M, cap);

  std::vector<TransitionGraph> module_graphs;
  module_graphs.reserve(modules.size());
  for (const auto& m : modules) module_graphs.push_back(m.stg(cap));

  const BoxIndexer idx(M);
  std::vector<TransitionGraph::Edge> edges;
  std::vector<TransitionGraph::Vertex> buf;
  TransitionGraph::Scratch scratch;
  State x(M.size());
  for (TransitionGraph::Vertex v = 0; v < idx.size(); ++v) {
    idx.decode(v, x);
    bool all_fixed = true;
    for (std::size_t j = 0; j < modules.size(); ++j) {
      const auto& g = module_graphs[j];
      const auto& verts = modules[j].vertices();
      const auto zv = g.vertex(modules[j].project(x));
      g.successors(zv, buf, scratch);
      bool fixed = false;
      for (auto w : buf) {
        if (w == zv) {
          fixed = true;
          continue;
        }
        const State z = g.state(w);
        State y = x;
        for (std::size_t k = 0; k < verts.size(); ++k) y[verts[k]] = z[k];
        edges.emplace_back(v, idx.encode(y));
      }
      all_fixed = all_fixed && fixed;
    }
    if (all_fixed) edges.emplace_back(v, v);
  }
  return TransitionGraph::from_edges(M, std::move(edges));
}

struct ModuleAttractors {
  NetworkModule module;
  std::vector<Attractor> attractors;
};

/// Every combination of one attractor per module, embedded into M with the
/// frozen values of M outside J(M). Ordered by smallest member.
inline std::vector<Attractor> compose_attractors(const SymbolicState& M, const std::vector<ModuleAttractors>& parts) {
  std::vector<Attractor> out;
  std::vector<std::size_t> choice(parts.size(), 0);
  for (const auto& p : parts)
    if (p.attractors.empty()) return out;
  while (true) {
    std::vector<State> states{M.lower()};
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto& verts = parts[j].module.vertices();
      const auto& local = parts[j].attractors[choice[j]].states;
      std::vector<State> grown;
      grown.reserve(states.size() * local.size());
      for (const auto& base : states) {
        for (const auto& z : local) {
          State y = base;
          for (std::size_t k = 0; k < verts.size(); ++k) y[verts[k]] = z[k];
          grown.push_back(std::move(y));
        }
      }
      states = std::move(grown);
    }
    std::sort(states.begin(), states.end());
    Attractor a;
    a.kind = states.size() == 1 ? AttractorKind::steady : AttractorKind::cyclic;
    a.states = std::move(states);
    out.push_back(std::move(a));

    std::size_t j = parts.size();
    while (j > 0) {
      if (++choice[j - 1] < parts[j - 1].attractors.size()) break;
      choice[j - 1] = 0;
      --j;
    }
    if (j == 0) break;
  }
  std::sort(out.begin(), out.end(), [](const Attractor& a, const Attractor& b) { return a.states.front() < b.states.front(); });
  return out;
}

/// Modules of M with their attractors, or `deferred` when a module domain
/// exceeds the cap and its attractors were not computed.
struct ModularAnalysis {
  SymbolicState steady_state;
  ThetaGraph theta;
  std::vector<ModuleAttractors> modules;
  bool deferred = false;
  std::vector<Attractor> composed;
};

inline ModularAnalysis analyze_modules(const Network& net, const SymbolicState& M,
                                       std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  ModularAnalysis out{M, theta_graph(net, M), {}, false, {}};
  auto parent = std::make_shared<const Network>(net);
  for (auto& comp : theta_components(out.theta)) {
    NetworkModule m(parent, M, std::move(comp));
    if (cap && m.domain().cardinality() > *cap) {
      out.deferred = true;
      out.modules.push_back({std::move(m), {}});
      continue;
    }
    auto as = attractors(m.stg(std::nullopt));
    out.modules.push_back({std::move(m), std::move(as)});
  }
  if (!out.deferred) out.composed = compose_attractors(M, out.modules);
  return out;
}

}  // namespace drn
