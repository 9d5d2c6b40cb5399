#pragma once

// Asynchronous state transition graphs over boxes, attractors as terminal
// strongly connected components, trap sets and projections.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drn/model.hpp"

namespace drn {

/// A map x -> g(x) on the members of a box, e.g. a network f or a module f^Z.
using StepMap = std::function<void(std::span<const int> x, std::span<int> image)>;

inline constexpr std::uint64_t kMaterializeThreshold = std::uint64_t{1} << 16;

/// Directed graph whose vertex set is the member set of a box, vertices
/// identified by their mixed-radix index (lexicographic state order).
///
/// Implicit graphs compute asynchronous successors on demand from a step
/// map: a self-loop at fixed points, otherwise one unit step towards g_i(x)
/// for every component with g_i(x) != x_i, dropping steps that leave the
/// box. Materialized graphs keep a sorted adjacency list.
class TransitionGraph {
 public:
  using Vertex = std::uint64_t;
  using Edge = std::pair<Vertex, Vertex>;

  /// Reusable buffers for successor queries on implicit graphs.
  struct Scratch {
    State x;
    State image;
  };

  static TransitionGraph asynchronous(SymbolicState domain, StepMap step) {
    TransitionGraph g(std::move(domain));
    g.step_ = std::make_shared<StepMap>(std::move(step));
    return g;
  }

  /// Materialized graph from an explicit edge list; duplicates are merged.
  static TransitionGraph from_edges(SymbolicState domain, std::vector<Edge> edges) {
    TransitionGraph g(std::move(domain));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.offsets_.assign(g.indexer_.size() + 1, 0);
    for (const auto& [a, b] : edges) {
      if (a >= g.indexer_.size() || b >= g.indexer_.size()) throw InvalidArgument("edge endpoint outside domain");
      ++g.offsets_[a + 1];
    }
    for (std::size_t v = 0; v < g.indexer_.size(); ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.targets_.reserve(edges.size());
    for (const auto& e : edges) g.targets_.push_back(e.second);
    g.materialized_ = true;
    return g;
  }

  const SymbolicState& domain() const noexcept { return indexer_.box(); }
  const BoxIndexer& indexer() const noexcept { return indexer_; }
  std::uint64_t vertex_count() const noexcept { return indexer_.size(); }
  bool materialized() const noexcept { return materialized_; }

  State state(Vertex v) const { return indexer_.decode(v); }
  Vertex vertex(std::span<const int> x) const {
    if (!domain().contains(x)) throw InvalidArgument("state outside the graph's vertex set");
    return indexer_.encode(x);
  }

  /// Successors of `v` in ascending order, written to `out` (cleared first).
  /// `leaves` is set when the unrestricted dynamics has a step out of the box.
  void successors(Vertex v, std::vector<Vertex>& out, Scratch& s, bool* leaves = nullptr) const {
    out.clear();
    if (leaves) *leaves = false;
    if (materialized_) {
      out.assign(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                 targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
      if (leaves && !leaves_.empty()) *leaves = leaves_[v];
      return;
    }
    const auto& box = domain();
    s.x.resize(box.size());
    s.image.resize(box.size());
    indexer_.decode(v, s.x);
    (*step_)(s.x, s.image);
    bool fixed = true;
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (s.image[i] == s.x[i]) continue;
      fixed = false;
      const int next = s.x[i] + (s.image[i] > s.x[i] ? 1 : -1);
      if (!box[i].contains(next)) {
        if (leaves) *leaves = true;
        continue;
      }
      const auto delta = indexer_.stride(i);
      out.push_back(next > s.x[i] ? v + delta : v - delta);
    }
    if (fixed) out.push_back(v);
    std::sort(out.begin(), out.end());
  }

  std::vector<Vertex> successors(Vertex v) const {
    std::vector<Vertex> out;
    Scratch s;
    successors(v, out, s);
    return out;
  }

  bool has_self_loop(Vertex v) const {
    auto succ = successors(v);
    return std::binary_search(succ.begin(), succ.end(), v);
  }

  /// Switches an implicit graph to adjacency storage.
  void materialize() {
    if (materialized_) return;
    std::vector<std::uint64_t> offsets(vertex_count() + 1, 0);
    std::vector<Vertex> targets;
    std::vector<bool> leaves(vertex_count(), false);
    std::vector<Vertex> buf;
    Scratch s;
    for (Vertex v = 0; v < vertex_count(); ++v) {
      bool out = false;
      successors(v, buf, s, &out);
      leaves[v] = out;
      targets.insert(targets.end(), buf.begin(), buf.end());
      offsets[v + 1] = targets.size();
    }
    offsets_ = std::move(offsets);
    targets_ = std::move(targets);
    leaves_ = std::move(leaves);
    materialized_ = true;
  }

  /// All edges, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    std::vector<Vertex> buf;
    Scratch s;
    for (Vertex v = 0; v < vertex_count(); ++v) {
      successors(v, buf, s);
      for (auto w : buf) out.emplace_back(v, w);
    }
    return out;
  }

  std::uint64_t edge_count() const {
    if (materialized_) return targets_.size();
    return edges().size();
  }

  /// Same vertex box and same edge set.
  friend bool operator==(const TransitionGraph& a, const TransitionGraph& b) {
    return a.domain() == b.domain() && a.edges() == b.edges();
  }

 private:
  explicit TransitionGraph(SymbolicState domain) : indexer_(std::move(domain)) {}

  BoxIndexer indexer_;
  std::shared_ptr<const StepMap> step_;
  bool materialized_ = false;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<bool> leaves_;
};

/// The step map of a network.
inline StepMap network_step(const Network& net) {
  return [net](std::span<const int> x, std::span<int> out) { net.apply(x, out); };
}

/// Asynchronous state transition graph S(f), or its induced subgraph on the
/// members of `restrict`. Graphs up to `materialize_below` vertices are
/// stored explicitly.
inline TransitionGraph build_stg(const Network& net, const std::optional<SymbolicState>& restrict = std::nullopt,
                                 std::optional<std::uint64_t> cap = kDefaultEnumerationCap,
                                 std::uint64_t materialize_below = kMaterializeThreshold) {
  auto box = restrict.value_or(net.full_box());
  if (!net.in_range(box)) throw InvalidArgument("restriction box does not belong to the network's state space");
  check_cap(box, cap);
  auto g = TransitionGraph::asynchronous(std::move(box), network_step(net));
  if (g.vertex_count() < materialize_below) g.materialize();
  return g;
}

enum class AttractorKind { steady, cyclic };

inline const char* to_string(AttractorKind k) { return k == AttractorKind::steady ? "steady" : "cyclic"; }

struct Attractor {
  /// Members in lexicographic order.
  std::vector<State> states;
  AttractorKind kind = AttractorKind::steady;
  /// Set for terminal components of a restricted graph from which the
  /// unrestricted dynamics can step out of the restriction box. Such a set is
  /// terminal in the restricted graph only, never an attractor of f.
  bool escapes = false;

  friend bool operator==(const Attractor& a, const Attractor& b) {
    return a.states == b.states && a.kind == b.kind;
  }
};

/// Terminal strongly connected components, via an iterative Tarjan search
/// with an explicit frame stack. Ordered by smallest member.
inline std::vector<Attractor> attractors(const TransitionGraph& g) {
  using Vertex = TransitionGraph::Vertex;
  const std::uint64_t n = g.vertex_count();
  if (n >= std::numeric_limits<std::uint32_t>::max()) throw EnumerationCapExceeded(n, std::numeric_limits<std::uint32_t>::max() - 1);
  constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> index(n, unvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> scc_stack;

  struct Frame {
    Vertex v;
    std::size_t begin;
    std::size_t end;
    std::size_t pos;
    bool exits;  // some member reaches an already closed component
  };
  std::vector<Frame> frames;
  std::vector<Vertex> succ_buf;
  std::vector<Vertex> tmp;
  TransitionGraph::Scratch scratch;
  std::uint32_t counter = 0;

  std::vector<std::vector<Vertex>> terminal;

  auto open = [&](Vertex v) {
    index[v] = low[v] = counter++;
    scc_stack.push_back(v);
    on_stack[v] = true;
    g.successors(v, tmp, scratch);
    const std::size_t begin = succ_buf.size();
    succ_buf.insert(succ_buf.end(), tmp.begin(), tmp.end());
    frames.push_back({v, begin, succ_buf.size(), begin, false});
  };

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    open(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.pos < f.end) {
        const Vertex w = succ_buf[f.pos++];
        if (index[w] == unvisited) {
          open(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        } else {
          f.exits = true;
        }
        continue;
      }
      const Frame done = f;
      frames.pop_back();
      succ_buf.resize(done.begin);
      bool closed = false;
      if (low[done.v] == index[done.v]) {
        std::vector<Vertex> members;
        Vertex w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = false;
          members.push_back(w);
        } while (w != done.v);
        if (!done.exits) terminal.push_back(std::move(members));
        closed = true;
      }
      if (!frames.empty()) {
        Frame& parent = frames.back();
        if (closed) {
          parent.exits = true;
        } else {
          low[parent.v] = std::min(low[parent.v], low[done.v]);
          parent.exits = parent.exits || done.exits;
        }
      }
    }
  }

  std::vector<Attractor> out;
  out.reserve(terminal.size());
  std::vector<Vertex> buf;
  for (auto& members : terminal) {
    std::sort(members.begin(), members.end());
    Attractor a;
    a.kind = members.size() == 1 ? AttractorKind::steady : AttractorKind::cyclic;
    for (auto v : members) {
      bool leaves = false;
      g.successors(v, buf, scratch, &leaves);
      a.escapes = a.escapes || leaves;
      if (members.size() == 1 && !std::binary_search(buf.begin(), buf.end(), v)) a.escapes = true;
      a.states.push_back(g.state(v));
    }
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), [](const Attractor& a, const Attractor& b) { return a.states.front() < b.states.front(); });
  return out;
}

/// True iff no edge of `g` leaves `D` and, for graphs built from a step map, no step of
/// the unrestricted dynamics leaves the box from `D`.
inline bool is_trap_set(const TransitionGraph& g, const std::vector<State>& D) {
  if (D.empty()) return false;
  std::set<TransitionGraph::Vertex> members;
  for (const auto& x : D) members.insert(g.vertex(x));
  std::vector<TransitionGraph::Vertex> buf;
  TransitionGraph::Scratch s;
  for (auto v : members) {
    bool leaves = false;
    g.successors(v, buf, s, &leaves);
    if (leaves) return false;
    for (auto w : buf)
      if (!members.count(w)) return false;
  }
  return true;
}

/// Dynamical module pi^I(g): vertex set pi^I of the domain; an edge
/// pi(v1) -> pi(v2) for each edge v1 -> v2 that is a self-loop or changes a
/// component in I.
inline TransitionGraph project_dynamics(const TransitionGraph& g, std::span<const std::size_t> components) {
  if (components.empty()) throw InvalidArgument("projection onto an empty component set");
  const auto& box = g.domain();
  for (auto i : components)
    if (i >= box.size()) throw InvalidArgument("projection component out of range");
  auto projected = box.project(components);
  BoxIndexer pidx(projected);
  std::vector<TransitionGraph::Edge> edges;
  std::vector<TransitionGraph::Vertex> buf;
  TransitionGraph::Scratch s;
  State a(components.size()), b(components.size());
  for (TransitionGraph::Vertex v = 0; v < g.vertex_count(); ++v) {
    g.successors(v, buf, s);
    if (buf.empty()) continue;
    const State x = g.state(v);
    for (std::size_t k = 0; k < components.size(); ++k) a[k] = x[components[k]];
    const auto pa = pidx.encode(a);
    for (auto w : buf) {
      if (w == v) {
        edges.emplace_back(pa, pa);
        continue;
      }
      const State y = g.state(w);
      bool inside = false;
      for (std::size_t k = 0; k < components.size(); ++k) {
        b[k] = y[components[k]];
        inside = inside || b[k] != a[k];
      }
      if (inside) edges.emplace_back(pa, pidx.encode(b));
    }
  }
  return TransitionGraph::from_edges(std::move(projected), std::move(edges));
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

inline std::string state_label(std::span<const int> x) {
  std::string s;
  for (int v : x) s += std::to_string(v);
  return s;
}

/// Graphviz digraph of a transition graph; vertices labelled by their level
/// string. Refuses graphs above `limit` vertices unless `limit` is nullopt.
inline std::string to_dot(const TransitionGraph& g, std::optional<std::uint64_t> limit = 4096) {
  if (limit && g.vertex_count() > *limit) throw EnumerationCapExceeded(g.vertex_count(), *limit);
  std::ostringstream os;
  os << "digraph S {\n";
  for (TransitionGraph::Vertex v = 0; v < g.vertex_count(); ++v) os << "  \"" << state_label(g.state(v)) << "\";\n";
  for (const auto& [a, b] : g.edges())
    os << "  \"" << state_label(g.state(a)) << "\" -> \"" << state_label(g.state(b)) << "\";\n";
  os << "}\n";
  return os.str();
}

inline nlohmann::json to_json(const Attractor& a) {
  nlohmann::json j;
  j["kind"] = to_string(a.kind);
  j["states"] = a.states;
  if (a.escapes) j["escapes"] = true;
  return j;
}

/// `{"attractors": [{"kind", "states": [[...]]}]}`
inline nlohmann::json attractor_report(const std::vector<Attractor>& as) {
  nlohmann::json j;
  j["attractors"] = nlohmann::json::array();
  for (const auto& a : as) j["attractors"].push_back(to_json(a));
  return j;
}

}  // namespace drn
