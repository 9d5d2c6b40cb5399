#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "drn/drn.hpp"
#include "support/oracles.hpp"
#include "support/random_network.hpp"
#include "support/thcell_reference.hpp"

using namespace drn;
using drn::testing::random_network;

namespace {

Network identity2() { return parse_model("var a : 0..1\nvar b : 0..1\nrule a := a\nrule b := b\n"); }

SymbolicState box(std::initializer_list<std::pair<int, int>> bounds) {
  std::vector<Interval> iv;
  for (auto [lo, hi] : bounds) iv.push_back({lo, hi});
  return SymbolicState(std::move(iv));
}

}  // namespace

TEST_CASE("identity network maps every state to itself", "[model]") {
  const auto net = identity2();
  for (const auto& x : drn::testing::enumerate({{0, 1}, {0, 1}})) CHECK(evaluate(net, x) == x);
  CHECK(evaluate(net, State{0, 1}) == State{0, 1});
}

TEST_CASE("Th cell receptor copies the IFN-beta input", "[model]") {
  const auto net = load_model(drn::testing::thcell_path());
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    State x(17);
    for (std::size_t i = 0; i < 17; ++i)
      x[i] = std::uniform_int_distribution<int>(0, drn::testing::thcell_max_levels()[i])(rng);
    x[0] = 1;
    CHECK(evaluate(net, x)[3] == 1);
    x[0] = 0;
    CHECK(evaluate(net, x)[3] == 0);
  }
}

TEST_CASE("dynamic range violation names the component and value", "[model]") {
  const auto net = parse_model("var a : 0..1\nvar b : 0..2\nrule a := b\nrule b := b\n");
  CHECK(evaluate(net, State{0, 1}) == State{1, 1});
  try {
    evaluate(net, State{0, 2});
    FAIL("expected RangeViolation");
  } catch (const RangeViolation& e) {
    CHECK(e.component() == 0);
    CHECK(e.value() == 2);
  }
}

TEST_CASE("evaluate rejects states outside X", "[model]") {
  const auto net = identity2();
  CHECK_THROWS_AS(evaluate(net, State{0, 2}), InvalidArgument);
  CHECK_THROWS_AS(evaluate(net, State{0}), InvalidArgument);
  CHECK_THROWS_AS(evaluate(net, State{-1, 0}), InvalidArgument);
}

TEST_CASE("network construction validates components and rules", "[model]") {
  CHECK_THROWS_AS(Network("n", {{"a", 1}, {"a", 1}}, {Expr::constant(0), Expr::constant(0)}), InvalidModel);
  CHECK_THROWS_AS(Network("n", {{"a", 0}}, {Expr::constant(0)}), InvalidModel);
  CHECK_THROWS_AS(Network("n", {{"a", 1}}, {Expr::constant(2)}), InvalidModel);
  CHECK_THROWS_AS(Network("n", {{"a", 1}}, {}), InvalidModel);
  CHECK_THROWS_AS(Network("n", {{"a", 1}}, {Expr::ref(3)}), InvalidModel);
  CHECK_NOTHROW(Network("n", {{"a", 1}}, {Expr::ref(0)}));
}

TEST_CASE("support of Th cell rules", "[model]") {
  const auto net = load_model(drn::testing::thcell_path());
  auto one_based = [&](std::size_t i) {
    std::vector<std::size_t> s;
    for (auto j : support(net, i - 1)) s.push_back(j + 1);
    return s;
  };
  CHECK(one_based(9) == std::vector<std::size_t>{2, 13});
  CHECK(one_based(16) == std::vector<std::size_t>{12, 16, 17});
  CHECK(one_based(1) == std::vector<std::size_t>{1});
  CHECK(one_based(5) == std::vector<std::size_t>{14, 15, 16});
}

TEST_CASE("constant rule has empty support", "[model]") {
  const auto net = parse_model("var a : 0..2\nvar b : 0..1\nrule a := 2\nrule b := case { a=1 -> 1; default 1 }\n");
  CHECK(support(net, 0).empty());
  // syntactic support: b mentions a even though the rule is constant
  CHECK(support(net, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("support is a superset of the functional dependencies", "[model]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rn = random_network(rng, {.max_components = 6, .max_states = 512});
    const auto states = drn::testing::enumerate(drn::testing::bounds_of(rn.max_levels));
    for (std::size_t i = 0; i < rn.net.size(); ++i) {
      const auto& sup = support(rn.net, i);
      const std::set<std::size_t> s(sup.begin(), sup.end());
      for (const auto& x : states)
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (s.count(j) || x[j] == rn.max_levels[j]) continue;
          auto y = x;
          ++y[j];
          REQUIRE(rn.net.apply(i, x) == rn.net.apply(i, y));
        }
    }
  }
}

TEST_CASE("rule expressions agree with their truth tables", "[model]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rn = random_network(rng);
    for (const auto& x : drn::testing::enumerate(drn::testing::bounds_of(rn.max_levels)))
      REQUIRE(evaluate(rn.net, x) == rn.image(x));
  }
}

TEST_CASE("box members of a small box", "[model]") {
  const auto M = box({{0, 1}, {1, 1}});
  std::vector<State> got(box_members(M).begin(), box_members(M).end());
  CHECK(got == std::vector<State>{{0, 1}, {1, 1}});
  CHECK(M.cardinality() == 2);
}

TEST_CASE("regular box has exactly one member", "[model]") {
  const auto M = SymbolicState::from_state(State{1, 0, 2});
  CHECK(M.is_regular());
  std::vector<State> got(box_members(M).begin(), box_members(M).end());
  CHECK(got == std::vector<State>{{1, 0, 2}});
}

TEST_CASE("box members stream lazily through large boxes", "[model]") {
  const auto net = load_model(drn::testing::thcell_path());
  auto M = net.full_box();
  for (std::size_t i = 0; i < 3; ++i) M[i] = Interval::point(0);
  CHECK(M.cardinality() == 82944);
  std::uint64_t n = 0;
  for (const auto& x : box_members(M)) {
    REQUIRE(M.contains(x));
    ++n;
  }
  CHECK(n == 82944);
}

TEST_CASE("enumeration cap", "[model]") {
  const auto net = load_model(drn::testing::thcell_path());
  const auto X = net.full_box();
  CHECK(X.cardinality() == 663552);
  CHECK(state_space_size(net) == 663552);
  try {
    box_members(X, 1000);
    FAIL("expected EnumerationCapExceeded");
  } catch (const EnumerationCapExceeded& e) {
    CHECK(e.cardinality() == 663552);
    CHECK(e.cap() == 1000);
  }
  CHECK(box_members(X, std::nullopt).size() == 663552);
}

TEST_CASE("box members agree with the enumeration oracle", "[model]") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    std::vector<Interval> iv;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = std::uniform_int_distribution<int>(0, 3)(rng);
      const int b = std::uniform_int_distribution<int>(0, 3)(rng);
      iv.push_back({std::min(a, b), std::max(a, b)});
    }
    const SymbolicState M(iv);
    const std::vector<State> got(box_members(M).begin(), box_members(M).end());
    REQUIRE(got == drn::testing::enumerate(drn::testing::bounds_of(M)));
    REQUIRE(got.size() == M.cardinality());

    const BoxIndexer idx(M);
    for (std::uint64_t k = 0; k < got.size(); ++k) {
      REQUIRE(idx.encode(got[k]) == k);
      REQUIRE(idx.decode(k) == got[k]);
    }
  }
}

TEST_CASE("symbolic state queries", "[model]") {
  const auto M = box({{0, 0}, {0, 2}, {1, 1}, {0, 1}});
  CHECK_FALSE(M.is_regular());
  CHECK(M.symbolic_components() == std::vector<std::size_t>{1, 3});
  CHECK(M.regular_components() == std::vector<std::size_t>{0, 2});
  CHECK(M.lower() == State{0, 0, 1, 0});
  CHECK(M.cardinality() == 6);
  CHECK(M.contains(State{0, 2, 1, 1}));
  CHECK_FALSE(M.contains(State{1, 2, 1, 1}));
  const std::vector<std::size_t> idx{1, 3};
  CHECK(M.project(idx) == box({{0, 2}, {0, 1}}));
  CHECK(box({{0, 0}, {1, 2}}).subset_of(box({{0, 1}, {0, 2}})));
  CHECK_FALSE(box({{0, 1}, {1, 2}}).subset_of(box({{0, 0}, {0, 2}})));
}

TEST_CASE("cardinality saturates instead of overflowing", "[model]") {
  std::vector<Interval> iv(70, Interval{0, 1});
  CHECK(SymbolicState(iv).cardinality() == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(box_members(SymbolicState(iv)), EnumerationCapExceeded);
}

TEST_CASE("Th cell rules match the hand-written reference", "[model]") {
  const auto net = load_model(drn::testing::thcell_path());
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    State x(17);
    for (std::size_t i = 0; i < 17; ++i)
      x[i] = std::uniform_int_distribution<int>(0, drn::testing::thcell_max_levels()[i])(rng);
    REQUIRE(evaluate(net, x) == drn::testing::thcell_reference(x));
  }
}
