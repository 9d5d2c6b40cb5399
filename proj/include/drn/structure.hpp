#pragma once

// Signed interaction graphs: local graphs G(f)(x), unions over state sets and
// boxes, DOT and JSON export.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "drn/model.hpp"

namespace drn {

enum class Sign : std::int8_t { negative = -1, positive = 1 };

inline const char* to_string(Sign s) { return s == Sign::positive ? "+" : "-"; }

struct SignedEdge {
  std::size_t src;
  std::size_t dst;
  Sign sign;

  friend auto operator<=>(const SignedEdge&, const SignedEdge&) = default;
};

/// Signed directed multigraph over component indices. At most one edge per
/// (src, dst, sign) triple, so at most two parallel edges of opposite sign.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  explicit InteractionGraph(std::set<std::size_t> vertices) : vertices_(std::move(vertices)) {}

  static InteractionGraph over_components(std::size_t n) {
    std::set<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i) v.insert(i);
    return InteractionGraph(std::move(v));
  }

  const std::set<std::size_t>& vertices() const noexcept { return vertices_; }
  const std::set<SignedEdge>& edges() const noexcept { return edges_; }

  void add_vertex(std::size_t v) { vertices_.insert(v); }
  void add_edge(SignedEdge e) {
    vertices_.insert(e.src);
    vertices_.insert(e.dst);
    edges_.insert(e);
  }
  bool has_edge(std::size_t src, std::size_t dst, Sign s) const { return edges_.count({src, dst, s}) > 0; }

  /// Union of vertex and edge sets.
  void merge(const InteractionGraph& o) {
    vertices_.insert(o.vertices_.begin(), o.vertices_.end());
    edges_.insert(o.edges_.begin(), o.edges_.end());
  }

  /// Vertex and edge inclusion.
  bool subgraph_of(const InteractionGraph& o) const {
    return std::includes(o.vertices_.begin(), o.vertices_.end(), vertices_.begin(), vertices_.end()) &&
           std::includes(o.edges_.begin(), o.edges_.end(), edges_.begin(), edges_.end());
  }

  /// Components of the underlying undirected graph, each sorted, ordered by
  /// smallest member.
  std::vector<std::vector<std::size_t>> weak_components() const {
    std::map<std::size_t, std::size_t> parent;
    for (auto v : vertices_) parent[v] = v;
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto& e : edges_) {
      const auto a = find(e.src), b = find(e.dst);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (auto v : vertices_) groups[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
  }

  friend bool operator==(const InteractionGraph&, const InteractionGraph&) = default;

 private:
  std::set<std::size_t> vertices_;
  std::set<SignedEdge> edges_;
};

namespace detail {

// Adds every edge into `j` witnessed at `x` by a unit step of a support
// coordinate. `within` bounds the admissible neighbours.
inline void add_local_edges_into(const Network& net, std::size_t j, State& x, const SymbolicState& within,
                                 InteractionGraph& g) {
  const int here = net.apply(j, x);
  for (auto i : net.support(j)) {
    const int xi = x[i];
    for (int c : {-1, 1}) {
      const int v = xi + c;
      if (!within[i].contains(v)) continue;
      x[i] = v;
      const int d = net.apply(j, x) - here;
      x[i] = xi;
      if (d == 0) continue;
      g.add_edge({i, j, (d > 0) == (c > 0) ? Sign::positive : Sign::negative});
    }
  }
}

}  // namespace detail

/// Local interaction graph G(f)(x): edge (i, j, s) iff a unit step of x_i
/// inside X_i changes f_j with sign s relative to the step direction.
inline InteractionGraph local_interaction_graph(const Network& net, std::span<const int> x) {
  if (!net.in_range(x)) throw InvalidArgument("state does not belong to the network's state space");
  auto g = InteractionGraph::over_components(net.size());
  const auto full = net.full_box();
  State y(x.begin(), x.end());
  for (std::size_t j = 0; j < net.size(); ++j) detail::add_local_edges_into(net, j, y, full, g);
  return g;
}

/// Union of the local graphs over an explicit set of states.
inline InteractionGraph interaction_graph_over(const Network& net, const std::vector<State>& states) {
  if (states.empty()) throw InvalidArgument("interaction graph over an empty state set");
  auto g = InteractionGraph::over_components(net.size());
  for (const auto& x : states) g.merge(local_interaction_graph(net, x));
  return g;
}

enum class NeighbourScope {
  /// Unit steps must stay inside the box: the graph G(f|_M).
  within_box,
  /// Unit steps may leave the box (but not X): the union of G(f)(x), x in M.
  state_space,
};

/// Interaction graph over the members of a box. Only the support
/// coordinates of each target are enumerated, which is exact because f_j is
/// constant in every other coordinate.
inline InteractionGraph interaction_graph_over(const Network& net, const SymbolicState& M,
                                               NeighbourScope scope = NeighbourScope::within_box,
                                               std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  if (!net.in_range(M)) throw InvalidArgument("box does not belong to the network's state space");
  auto g = InteractionGraph::over_components(net.size());
  const auto within = scope == NeighbourScope::within_box ? M : net.full_box();
  for (std::size_t j = 0; j < net.size(); ++j) {
    const auto& sup = net.support(j);
    check_cap(M.project(sup), cap);
    State x = M.lower();
    for_each_assignment(M, sup, x, [&](const State& y) {
      State z = y;
      detail::add_local_edges_into(net, j, z, within, g);
    });
  }
  return g;
}

/// Global interaction graph G(f).
inline InteractionGraph global_interaction_graph(const Network& net) {
  return interaction_graph_over(net, net.full_box(), NeighbourScope::within_box, std::nullopt);
}

/// Graphviz digraph. Activation edges are plain arrows, inhibitions use a tee
/// arrowhead. Vertices and edges are emitted in index order.
inline std::string to_dot(const InteractionGraph& g, const Network& net) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (auto v : g.vertices()) os << "  " << net.component(v).name << ";\n";
  for (const auto& e : g.edges()) {
    os << "  " << net.component(e.src).name << " -> " << net.component(e.dst).name;
    if (e.sign == Sign::negative) os << " [arrowhead=tee]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// `{"vertices": [names], "edges": [{"src","dst","sign"}]}`, arrays sorted by name.
inline nlohmann::json to_json(const InteractionGraph& g, const Network& net) {
  std::vector<std::string> names;
  for (auto v : g.vertices()) names.push_back(net.component(v).name);
  std::sort(names.begin(), names.end());
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& e : g.edges())
    edges.emplace_back(net.component(e.src).name, net.component(e.dst).name, to_string(e.sign));
  std::sort(edges.begin(), edges.end());
  nlohmann::json j;
  j["vertices"] = names;
  j["edges"] = nlohmann::json::array();
  for (const auto& [s, d, sign] : edges) j["edges"].push_back({{"src", s}, {"dst", d}, {"sign", sign}});
  return j;
}

}  // namespace drn
