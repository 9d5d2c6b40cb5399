#pragma once

// Core model types: component ranges, rule expressions, regular states,
// interval boxes (symbolic states) and pointwise evaluation of a network.
//
// Components are 0-based inside the library. Everything that talks to a
// human (parser diagnostics, reports, tuple notation) uses names or 1-based
// indices.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "drn/error.hpp"

namespace drn {

using State = std::vector<int>;

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class CmpOp : std::uint8_t { eq, ne, lt, le, gt, ge };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

inline bool compare(int lhs, CmpOp op, int rhs) {
  switch (op) {
    case CmpOp::eq: return lhs == rhs;
    case CmpOp::ne: return lhs != rhs;
    case CmpOp::lt: return lhs < rhs;
    case CmpOp::le: return lhs <= rhs;
    case CmpOp::gt: return lhs > rhs;
    case CmpOp::ge: return lhs >= rhs;
  }
  return false;
}

/// Rule expression tree.
///
/// Value-typed kinds (constant, ref, cases, truth) produce an integer level;
/// guard kinds (compare, negation, conjunction, disjunction) produce a bool.
/// `truth` wraps a guard and yields 1 if it holds, 0 otherwise. A `cases`
/// node stores its children as guard0, value0, guard1, value1, ..., default;
/// the first guard that holds selects its value.
class Expr {
 public:
  enum class Kind : std::uint8_t { constant, ref, cases, truth, compare, negation, conjunction, disjunction };

  static Expr constant(int value) { return Expr(Kind::constant, value, 0, CmpOp::eq, {}); }
  static Expr ref(std::size_t component) { return Expr(Kind::ref, 0, component, CmpOp::eq, {}); }
  static Expr compare(std::size_t component, CmpOp op, int value) {
    return Expr(Kind::compare, value, component, op, {});
  }
  static Expr negation(Expr guard) { return Expr(Kind::negation, 0, 0, CmpOp::eq, {std::move(guard)}); }
  static Expr conjunction(std::vector<Expr> guards) {
    if (guards.size() == 1) return std::move(guards.front());
    return Expr(Kind::conjunction, 0, 0, CmpOp::eq, std::move(guards));
  }
  static Expr disjunction(std::vector<Expr> guards) {
    if (guards.size() == 1) return std::move(guards.front());
    return Expr(Kind::disjunction, 0, 0, CmpOp::eq, std::move(guards));
  }
  static Expr truth(Expr guard) { return Expr(Kind::truth, 0, 0, CmpOp::eq, {std::move(guard)}); }
  static Expr cases(std::vector<std::pair<Expr, Expr>> arms, Expr fallback) {
    std::vector<Expr> children;
    children.reserve(2 * arms.size() + 1);
    for (auto& [guard, value] : arms) {
      children.push_back(std::move(guard));
      children.push_back(std::move(value));
    }
    children.push_back(std::move(fallback));
    return Expr(Kind::cases, 0, 0, CmpOp::eq, std::move(children));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_guard() const noexcept { return kind_ >= Kind::compare; }
  /// Constant value, or the right-hand constant of a comparison.
  int value() const noexcept { return value_; }
  /// Referenced component for `ref` and `compare`.
  std::size_t component() const noexcept { return component_; }
  CmpOp op() const noexcept { return op_; }
  const std::vector<Expr>& children() const noexcept { return children_; }

  std::size_t arm_count() const noexcept { return children_.size() / 2; }
  const Expr& arm_guard(std::size_t k) const { return children_[2 * k]; }
  const Expr& arm_value(std::size_t k) const { return children_[2 * k + 1]; }
  const Expr& fallback() const { return children_.back(); }

  int eval(std::span<const int> x) const {
    switch (kind_) {
      case Kind::constant: return value_;
      case Kind::ref: return x[component_];
      case Kind::truth: return children_.front().holds(x) ? 1 : 0;
      case Kind::cases: {
        const std::size_t arms = arm_count();
        for (std::size_t k = 0; k < arms; ++k)
          if (children_[2 * k].holds(x)) return children_[2 * k + 1].eval(x);
        return children_.back().eval(x);
      }
      default: return holds(x) ? 1 : 0;
    }
  }

  bool holds(std::span<const int> x) const {
    switch (kind_) {
      case Kind::compare: return drn::compare(x[component_], op_, value_);
      case Kind::negation: return !children_.front().holds(x);
      case Kind::conjunction:
        return std::all_of(children_.begin(), children_.end(), [&](const Expr& e) { return e.holds(x); });
      case Kind::disjunction:
        return std::any_of(children_.begin(), children_.end(), [&](const Expr& e) { return e.holds(x); });
      default: return eval(x) != 0;
    }
  }

  /// Appends every referenced component (with repetitions) to `out`.
  void collect_refs(std::vector<std::size_t>& out) const {
    if (kind_ == Kind::ref || kind_ == Kind::compare) out.push_back(component_);
    for (const auto& c : children_) c.collect_refs(out);
  }

  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  Expr(Kind kind, int value, std::size_t component, CmpOp op, std::vector<Expr> children)
      : kind_(kind), op_(op), value_(value), component_(component), children_(std::move(children)) {}

  Kind kind_;
  CmpOp op_;
  int value_;
  std::size_t component_;
  std::vector<Expr> children_;
};

// ---------------------------------------------------------------------------
// Intervals and boxes
// ---------------------------------------------------------------------------

/// Discrete interval [lo, hi]. lo == hi is a regular value.
struct Interval {
  int lo = 0;
  int hi = 0;

  static Interval point(int v) { return {v, v}; }

  bool regular() const noexcept { return lo == hi; }
  int width() const noexcept { return hi - lo + 1; }
  bool contains(int v) const noexcept { return lo <= v && v <= hi; }
  bool subset_of(const Interval& o) const noexcept { return o.lo <= lo && hi <= o.hi; }
  Interval hull(const Interval& o) const noexcept { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Element of the interval lattice: one discrete interval per component.
/// Cardinality one means the box is a regular state.
class SymbolicState {
 public:
  SymbolicState() = default;
  explicit SymbolicState(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  static SymbolicState from_state(std::span<const int> x) {
    std::vector<Interval> iv;
    iv.reserve(x.size());
    for (int v : x) iv.push_back(Interval::point(v));
    return SymbolicState(std::move(iv));
  }

  std::size_t size() const noexcept { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  Interval& operator[](std::size_t i) { return intervals_[i]; }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  /// Number of regular states in the box; saturates at UINT64_MAX.
  std::uint64_t cardinality() const noexcept {
    std::uint64_t n = 1;
    for (const auto& iv : intervals_) {
      const auto w = static_cast<std::uint64_t>(iv.width());
      if (n > std::numeric_limits<std::uint64_t>::max() / w) return std::numeric_limits<std::uint64_t>::max();
      n *= w;
    }
    return n;
  }

  bool is_regular() const noexcept {
    return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& iv) { return iv.regular(); });
  }

  /// Components with a symbolic (non-singleton) interval, ascending.
  std::vector<std::size_t> symbolic_components() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < intervals_.size(); ++i)
      if (!intervals_[i].regular()) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> regular_components() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < intervals_.size(); ++i)
      if (intervals_[i].regular()) out.push_back(i);
    return out;
  }

  /// The lower corner; equals the only member when the box is regular.
  State lower() const {
    State x(intervals_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = intervals_[i].lo;
    return x;
  }

  bool contains(std::span<const int> x) const {
    if (x.size() != intervals_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!intervals_[i].contains(x[i])) return false;
    return true;
  }

  /// Componentwise interval inclusion.
  bool subset_of(const SymbolicState& o) const {
    if (o.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (!intervals_[i].subset_of(o.intervals_[i])) return false;
    return true;
  }

  /// Box over the components `idx` (in the given order).
  SymbolicState project(std::span<const std::size_t> idx) const {
    std::vector<Interval> iv;
    iv.reserve(idx.size());
    for (auto i : idx) iv.push_back(intervals_[i]);
    return SymbolicState(std::move(iv));
  }

  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Mixed-radix encoding of the members of a box. Component 0 is the most
/// significant digit, so index order is lexicographic state order. Only
/// meaningful for boxes whose cardinality fits in 64 bits.
class BoxIndexer {
 public:
  BoxIndexer() = default;
  explicit BoxIndexer(SymbolicState box) : box_(std::move(box)), strides_(box_.size()) {
    std::uint64_t stride = 1;
    for (std::size_t i = box_.size(); i-- > 0;) {
      strides_[i] = stride;
      stride *= static_cast<std::uint64_t>(box_[i].width());
    }
    size_ = box_.cardinality();
  }

  const SymbolicState& box() const noexcept { return box_; }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t stride(std::size_t i) const { return strides_[i]; }

  std::uint64_t encode(std::span<const int> x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      idx += static_cast<std::uint64_t>(x[i] - box_[i].lo) * strides_[i];
    return idx;
  }

  void decode(std::uint64_t idx, std::span<int> out) const {
    for (std::size_t i = 0; i < strides_.size(); ++i) {
      out[i] = box_[i].lo + static_cast<int>(idx / strides_[i]);
      idx %= strides_[i];
    }
  }

  State decode(std::uint64_t idx) const {
    State x(box_.size());
    decode(idx, x);
    return x;
  }

 private:
  SymbolicState box_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
};

/// Throws EnumerationCapExceeded if `box` holds more than `cap` states.
inline void check_cap(const SymbolicState& box, std::optional<std::uint64_t> cap) {
  if (cap && box.cardinality() > *cap) throw EnumerationCapExceeded(box.cardinality(), *cap);
}

/// Lazy lexicographic enumeration of the regular states in a box.
class BoxRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = State;
    using difference_type = std::ptrdiff_t;
    using pointer = const State*;
    using reference = const State&;

    iterator() = default;
    iterator(const SymbolicState* box, bool done) : box_(box), done_(done || box->size() == 0) {
      if (!done_) current_ = box_->lower();
    }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }

    iterator& operator++() {
      for (std::size_t i = current_.size(); i-- > 0;) {
        if (current_[i] < (*box_)[i].hi) {
          ++current_[i];
          return *this;
        }
        current_[i] = (*box_)[i].lo;
      }
      done_ = true;
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& a, const iterator& b) {
      if (a.done_ || b.done_) return a.done_ == b.done_;
      return a.current_ == b.current_;
    }

   private:
    const SymbolicState* box_ = nullptr;
    bool done_ = true;
    State current_;
  };

  explicit BoxRange(SymbolicState box) : box_(std::move(box)) {}

  iterator begin() const { return iterator(&box_, false); }
  iterator end() const { return iterator(&box_, true); }
  std::uint64_t size() const { return box_.cardinality(); }

 private:
  SymbolicState box_;
};

/// Enumerates the members of `M` in lexicographic order. Pass std::nullopt
/// as `cap` to opt out of the cardinality check.
inline BoxRange box_members(const SymbolicState& M, std::optional<std::uint64_t> cap = kDefaultEnumerationCap) {
  check_cap(M, cap);
  return BoxRange(M);
}

/// Calls `fn(x)` for every state of `box` that agrees with `base` outside
/// `vary`, enumerating only the coordinates listed in `vary`. `x` is a
/// scratch buffer reused between calls.
template <typename Fn>
void for_each_assignment(const SymbolicState& box, std::span<const std::size_t> vary, State x, Fn&& fn) {
  for (auto i : vary) x[i] = box[i].lo;
  while (true) {
    fn(std::as_const(x));
    std::size_t k = vary.size();
    while (k > 0) {
      const auto i = vary[k - 1];
      if (x[i] < box[i].hi) {
        ++x[i];
        break;
      }
      x[i] = box[i].lo;
      --k;
    }
    if (k == 0) return;
  }
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

struct Component {
  std::string name;
  int max_level = 1;

  friend bool operator==(const Component&, const Component&) = default;
};

/// A discrete network f = (f_1, ..., f_n) over X = X_1 x ... x X_n with
/// X_i = {0, ..., max_level_i}. Immutable after construction.
class Network {
 public:
  Network() = default;

  Network(std::string name, std::vector<Component> components, std::vector<Expr> rules)
      : name_(std::move(name)), components_(std::move(components)), rules_(std::move(rules)) {
    validate();
    supports_.resize(components_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      auto& s = supports_[i];
      rules_[i].collect_refs(s);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<Component>& components() const noexcept { return components_; }
  const Component& component(std::size_t i) const { return components_.at(i); }
  int max_level(std::size_t i) const { return components_[i].max_level; }
  const Expr& rule(std::size_t i) const { return rules_.at(i); }
  const std::vector<Expr>& rules() const noexcept { return rules_; }

  /// Components syntactically referenced by the rule of `i`, ascending.
  const std::vector<std::size_t>& support(std::size_t i) const { return supports_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < components_.size(); ++i)
      if (components_[i].name == name) return i;
    return std::nullopt;
  }

  /// The whole state space X as a box.
  SymbolicState full_box() const {
    std::vector<Interval> iv;
    iv.reserve(size());
    for (const auto& c : components_) iv.push_back({0, c.max_level});
    return SymbolicState(std::move(iv));
  }

  bool in_range(std::span<const int> x) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < 0 || x[i] > components_[i].max_level) return false;
    return true;
  }

  bool in_range(const SymbolicState& M) const {
    if (M.size() != size()) return false;
    for (std::size_t i = 0; i < M.size(); ++i)
      if (M[i].lo < 0 || M[i].lo > M[i].hi || M[i].hi > components_[i].max_level) return false;
    return true;
  }

  /// f_i(x), range-checked.
  int apply(std::size_t i, std::span<const int> x) const {
    const int v = rules_[i].eval(x);
    if (v < 0 || v > components_[i].max_level) throw RangeViolation(i, v);
    return v;
  }

  /// out = f(x).
  void apply(std::span<const int> x, std::span<int> out) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) out[i] = apply(i, x);
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.components_ == b.components_ && a.rules_ == b.rules_;
  }

 private:
  void validate() const {
    if (components_.empty()) throw InvalidModel("network needs at least one component");
    if (rules_.size() != components_.size()) throw InvalidModel("need exactly one rule per component");
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& c = components_[i];
      if (c.name.empty()) throw InvalidModel("component " + std::to_string(i + 1) + " has an empty name");
      if (c.max_level < 1) throw InvalidModel("component " + c.name + " needs max level >= 1");
      if (!seen.emplace(c.name, i).second) throw InvalidModel("duplicate component name " + c.name);
    }
    for (std::size_t i = 0; i < rules_.size(); ++i) check_value(rules_[i], i);
  }

  void check_value(const Expr& e, std::size_t target) const {
    using K = Expr::Kind;
    switch (e.kind()) {
      case K::constant:
        if (e.value() < 0 || e.value() > components_[target].max_level)
          throw InvalidModel("constant " + std::to_string(e.value()) + " outside range of " +
                             components_[target].name);
        return;
      case K::ref: check_component(e.component()); return;
      case K::truth: check_guard(e.children().front()); return;
      case K::cases:
        for (std::size_t k = 0; k < e.arm_count(); ++k) {
          check_guard(e.arm_guard(k));
          check_value(e.arm_value(k), target);
        }
        check_value(e.fallback(), target);
        return;
      default: throw InvalidModel("rule of " + components_[target].name + " is a guard where a value is expected");
    }
  }

  void check_guard(const Expr& e) const {
    using K = Expr::Kind;
    switch (e.kind()) {
      case K::compare: check_component(e.component()); return;
      case K::negation:
      case K::conjunction:
      case K::disjunction:
        if (e.children().empty()) throw InvalidModel("empty boolean connective");
        for (const auto& c : e.children()) check_guard(c);
        return;
      default: throw InvalidModel("value expression used where a guard is expected");
    }
  }

  void check_component(std::size_t c) const {
    if (c >= components_.size()) throw InvalidModel("reference to unknown component " + std::to_string(c + 1));
  }

  std::string name_;
  std::vector<Component> components_;
  std::vector<Expr> rules_;
  std::vector<std::vector<std::size_t>> supports_;
};

/// f(x). Throws InvalidArgument if `x` is not a state of `net`.
inline State evaluate(const Network& net, std::span<const int> x) {
  if (!net.in_range(x)) throw InvalidArgument("state does not belong to the network's state space");
  State out(net.size());
  net.apply(x, out);
  return out;
}

/// Components syntactically referenced by the rule of component `i`.
inline const std::vector<std::size_t>& support(const Network& net, std::size_t i) {
  if (i >= net.size()) throw InvalidArgument("component index out of range");
  return net.support(i);
}

/// Number of states in X.
inline std::uint64_t state_space_size(const Network& net) { return net.full_box().cardinality(); }

}  // namespace drn
