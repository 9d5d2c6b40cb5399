// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drn/drn.hpp"
#include "support/oracles.hpp"
#include "support/random_network.hpp"
#include "support/thcell_reference.hpp"

using namespace drn;
namespace oracle = drn::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
};

class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && out_.ok) {
      out_.ok = false;
      out_.detail = what;
    }
  }
  Outcome done(std::string detail = {}) {
    if (out_.ok) out_.detail = std::move(detail);
    return out_;
  }

 private:
  Outcome out_;
};

const Network& thcell() {
  static const Network net = load_model(oracle::thcell_path());
  return net;
}

SymbolicState tuple(std::initializer_list<std::pair<int, int>> bounds) {
  std::vector<Interval> iv;
  for (auto [lo, hi] : bounds) iv.push_back({lo, hi});
  return SymbolicState(std::move(iv));
}

SymbolicState thcell_inputs(int a, int b, int c) { return input_box(thcell(), {{0, a}, {1, b}, {2, c}}); }

std::vector<std::vector<State>> member_lists(const std::vector<Attractor>& as) {
  std::vector<std::vector<State>> out;
  for (const auto& a : as) out.push_back(a.states);
  return out;
}

SymbolicState random_box(std::mt19937& rng, const std::vector<int>& levels) {
  std::vector<Interval> iv;
  for (int p : levels) {
    const int a = std::uniform_int_distribution<int>(0, p)(rng);
    const int b = std::uniform_int_distribution<int>(0, p)(rng);
    iv.push_back({std::min(a, b), std::max(a, b)});
  }
  return SymbolicState(iv);
}

// Networks of up to 12 Boolean-equivalent bits with mixed Boolean and
// ternary components.
oracle::RandomNetworkOptions property_options() {
  return {.min_components = 2, .max_components = 12, .max_states = 4096, .ternary_probability = 0.3};
}

constexpr int kPropertyNetworks = 500;

// Symbolic steady state from the first random box that yields one; falls back
// to the last derived (regular) state after a few attempts.
SymbolicState derived_state(std::mt19937& rng, const oracle::RandomNetwork& rn) {
  SymbolicState M;
  for (int attempt = 0; attempt < 8; ++attempt) {
    M = derive_from_box(rn.net, random_box(rng, rn.max_levels)).state;
    if (!M.is_regular()) break;
  }
  return M;
}

// --- Th cell ---------------------------------------------------------------

Outcome wild_type_iteration() {
  Checker c;
  const auto d = derive_from_box(thcell(), thcell_inputs(0, 0, 0));
  const auto expected = tuple({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 2}, {0, 1}, {0, 2}, {0, 1}, {0, 0}, {0, 0},
                               {0, 1}, {0, 2}, {0, 1}, {0, 0}, {0, 0}, {0, 2}, {0, 1}});
  c.expect(d.trace.steps() == 2, "expected 2 steps, got " + std::to_string(d.trace.steps()));
  c.expect(d.state == expected, "M2 = " + format_tuple(d.state));
  return c.done("M2 = " + format_tuple(d.state));
}

Outcome wild_type_modules() {
  Checker c;
  const auto d = derive_from_box(thcell(), thcell_inputs(0, 0, 0));
  const auto analysis = analyze_modules(thcell(), d.state);
  const std::vector<std::size_t> J{4, 5, 6, 7, 10, 11, 12, 15, 16};
  const std::vector<State> expected{{0, 0, 0, 0, 0, 0, 0, 0, 0},
                                    {0, 1, 0, 1, 0, 0, 1, 0, 1},
                                    {1, 0, 1, 0, 1, 1, 0, 1, 0},
                                    {2, 0, 1, 0, 1, 1, 0, 2, 0}};
  std::vector<State> got;
  for (const auto& a : analysis.composed) {
    c.expect(a.kind == AttractorKind::steady, "cyclic attractor among the composed attractors");
    State p;
    for (auto i : J) p.push_back(a.states.front()[i]);
    got.push_back(p);
  }
  c.expect(analysis.composed.size() == 4, std::to_string(analysis.composed.size()) + " composed attractors");
  c.expect(got == expected, "projected fixed points differ");
  return c.done(std::to_string(analysis.modules.size()) + " module(s), " + std::to_string(got.size()) +
                " steady states");
}

Outcome wild_type_direct() {
  Checker c;
  const auto box = thcell_inputs(0, 0, 0);
  const auto direct = attractors(build_stg(thcell(), box));
  const auto d = derive_from_box(thcell(), box);
  const auto analysis = analyze_modules(thcell(), d.state);
  c.expect(box.cardinality() == 82944, "box has " + std::to_string(box.cardinality()) + " states");
  c.expect(direct == analysis.composed, "direct attractors differ from the composed ones");
  for (const auto& a : direct) c.expect(!a.escapes, "direct attractor escapes the input box");
  const auto modules = build_modules(thcell(), d.state);
  c.expect(product_stg(thcell(), d.state, modules) == build_stg(thcell(), d.state),
           "product graph differs from the restricted graph on M2");
  return c.done(std::to_string(direct.size()) + " attractors over 82944 states");
}

Outcome ifn_beta() {
  Checker c;
  const auto d = derive_from_box(thcell(), thcell_inputs(1, 0, 0));
  const auto M9 = tuple({{1, 1}, {0, 0}, {0, 0}, {1, 1}, {1, 2}, {0, 0}, {1, 1}, {0, 0}, {0, 0}, {0, 0},
                         {1, 1}, {1, 1}, {0, 0}, {0, 0}, {0, 0}, {1, 2}, {0, 0}});
  c.expect(d.trace.steps() == 9, "expected 9 steps, got " + std::to_string(d.trace.steps()));
  c.expect(d.state == M9, "M9 = " + format_tuple(d.state));
  const auto analysis = analyze_modules(thcell(), d.state);
  c.expect(analysis.modules.size() == 1, std::to_string(analysis.modules.size()) + " modules");
  if (analysis.modules.size() == 1) {
    const auto& m = analysis.modules[0];
    c.expect(m.module.vertices() == std::vector<std::size_t>{4, 15}, "module vertices are not {IFNg, Tbet}");
    c.expect(m.module.domain() == tuple({{1, 2}, {1, 2}}), "module domain " + format_tuple(m.module.domain()));
    c.expect(thcell_inputs(1, 0, 0).cardinality() / m.module.domain().cardinality() == 20736,
             "reduction factor differs");
    c.expect(member_lists(m.attractors) == std::vector<std::vector<State>>{{{1, 1}}, {{2, 2}}},
             "module steady states differ");
  }
  return c.done("9 steps, module {IFNg, Tbet} on [1,2]x[1,2], steady states (1,1) and (2,2)");
}

Outcome state_counts() {
  Checker c;
  const auto X = state_space_size(thcell());
  c.expect(X == 663552, "|X| = " + std::to_string(X));
  const auto d = derive_from_box(thcell(), thcell_inputs(0, 0, 0));
  const auto modules = build_modules(thcell(), d.state);
  std::uint64_t largest = 0;
  for (const auto& m : modules) largest = std::max(largest, m.domain().cardinality());
  c.expect(largest == 2592, "wild type module has " + std::to_string(largest) + " states");
  return c.done("|X| = 663552, wild type module 2592 states");
}

Outcome input_network() {
  Checker c;
  const auto net = load_model(std::string(DRN_MODELS_DIR) + "/input3.drn");
  const auto rows = sweep(net);
  const auto f = [&](const State& x) { return evaluate(net, x); };
  const auto brute = oracle::brute_force_attractors(f, oracle::enumerate({{0, 1}, {0, 1}, {0, 1}}));
  c.expect(rows.size() == 2, "expected two input combinations");
  if (rows.size() == 2) {
    c.expect(rows[0].derived.state == tuple({{0, 0}, {0, 0}, {0, 1}}), "x1=0 gives " + format_tuple(rows[0].derived.state));
    c.expect(member_lists(rows[0].attractors()) == std::vector<std::vector<State>>{{{0, 0, 0}, {0, 0, 1}}},
             "x1=0 attractor differs");
    c.expect(rows[1].derived.state == tuple({{1, 1}, {1, 1}, {1, 1}}), "x1=1 gives " + format_tuple(rows[1].derived.state));
  }
  c.expect(brute == std::vector<std::vector<State>>{{{0, 0, 0}, {0, 0, 1}}, {{1, 1, 1}}},
           "brute-force attractors of the 8-state graph differ");
  return c.done("(0,0,[0,1]) -> {(0,0,0),(0,0,1)}; (1,1,1) steady; brute force agrees");
}

Outcome worst_case() {
  Checker c;
  const auto d = derive_from_box(thcell(), thcell_inputs(0, 1, 1));
  c.expect(d.state.regular_components() == std::vector<std::size_t>{0, 1, 2, 3},
           "regular components of " + format_tuple(d.state));
  c.expect(d.state[3] == Interval::point(0), "IFNbR not frozen to 0");
  return c.done("only IFNbR frozen beyond the inputs: " + format_tuple(d.state));
}

// --- properties ------------------------------------------------------------

Outcome product_equals_restriction() {
  Checker c;
  std::mt19937 rng(1001);
  int symbolic = 0;
  for (int n = 0; n < kPropertyNetworks; ++n) {
    const auto rn = oracle::random_network(rng, property_options());
    const auto M = derived_state(rng, rn);
    symbolic += M.is_regular() ? 0 : 1;
    const auto product = product_stg(rn.net, M, build_modules(rn.net, M));
    oracle::EdgeSet got;
    for (const auto& [a, b] : product.edges()) got.emplace(product.state(a), product.state(b));
    const auto f = [&](const State& x) { return rn.image(x); };
    c.expect(got == oracle::induced_edges(f, oracle::enumerate(oracle::bounds_of(M))),
             "network " + std::to_string(n) + ": product graph differs on " + format_tuple(M));
  }
  return c.done(std::to_string(kPropertyNetworks) + " networks, " + std::to_string(symbolic) + " symbolic steady states");
}

Outcome composed_attractors() {
  Checker c;
  std::mt19937 rng(1002);
  int symbolic = 0;
  for (int n = 0; n < kPropertyNetworks; ++n) {
    const auto rn = oracle::random_network(rng, property_options());
    const auto M = derived_state(rng, rn);
    symbolic += M.is_regular() ? 0 : 1;
    const auto analysis = analyze_modules(rn.net, M);
    const auto f = [&](const State& x) { return rn.image(x); };
    c.expect(member_lists(analysis.composed) == oracle::kosaraju_attractors(f, oracle::enumerate(oracle::bounds_of(M))),
             "network " + std::to_string(n) + ": composed attractors differ on " + format_tuple(M));
  }
  return c.done(std::to_string(kPropertyNetworks) + " networks, " + std::to_string(symbolic) + " symbolic steady states");
}

Outcome sweep_completeness() {
  Checker c;
  std::mt19937 rng(1003);
  for (int n = 0; n < kPropertyNetworks; ++n) {
    auto opt = property_options();
    opt.inputs = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    opt.min_components = opt.inputs + 1;
    const auto rn = oracle::random_network(rng, opt);
    const auto f = [&](const State& x) { return rn.image(x); };
    std::vector<std::vector<State>> found;
    for (const auto& row : sweep(rn.net))
      for (const auto& a : row.attractors()) found.push_back(a.states);
    std::sort(found.begin(), found.end());
    c.expect(found == oracle::kosaraju_attractors(f, oracle::enumerate(oracle::bounds_of(rn.max_levels))),
             "network " + std::to_string(n) + ": sweep attractors differ from the full attractor set");
  }
  return c.done(std::to_string(kPropertyNetworks) + " input-layer networks");
}

Outcome image_properties() {
  Checker c;
  std::mt19937 rng(1004);
  std::uint64_t singletons = 0, pairs = 0;
  for (int n = 0; n < kPropertyNetworks; ++n) {
    const auto rn = oracle::random_network(rng, property_options());
    for (const auto& x : oracle::enumerate(oracle::bounds_of(rn.max_levels))) {
      ++singletons;
      if (!(symbolic_image(rn.net, SymbolicState::from_state(x)) == SymbolicState::from_state(rn.image(x)))) {
        c.expect(false, "network " + std::to_string(n) + ": F({x}) != {f(x)} at " + format_tuple(x));
        break;
      }
    }
    for (int k = 0; k < 20; ++k) {
      const auto big = random_box(rng, rn.max_levels);
      std::vector<Interval> iv;
      for (const auto& b : big) {
        const int a = std::uniform_int_distribution<int>(b.lo, b.hi)(rng);
        const int d = std::uniform_int_distribution<int>(b.lo, b.hi)(rng);
        iv.push_back({std::min(a, d), std::max(a, d)});
      }
      const SymbolicState small(iv);
      ++pairs;
      c.expect(symbolic_image(rn.net, small).subset_of(symbolic_image(rn.net, big)),
               "network " + std::to_string(n) + ": F not monotone on " + format_tuple(small) + " within " +
                   format_tuple(big));
    }
  }
  return c.done(std::to_string(singletons) + " singletons, " + std::to_string(pairs) + " nested box pairs");
}

Outcome trap_sets() {
  Checker c;
  std::mt19937 rng(1005);
  int symbolic = 0;
  for (int n = 0; n < kPropertyNetworks; ++n) {
    const auto rn = oracle::random_network(rng, property_options());
    const auto M = derived_state(rng, rn);
    symbolic += M.is_regular() ? 0 : 1;
    const auto f = [&](const State& x) { return rn.image(x); };
    for (const auto& x : oracle::enumerate(oracle::bounds_of(M)))
      for (const auto& y : oracle::async_successors(f, x))
        c.expect(M.contains(y), "network " + std::to_string(n) + ": step " + format_tuple(x) + " -> " +
                                    format_tuple(y) + " leaves " + format_tuple(M));
  }
  return c.done(std::to_string(kPropertyNetworks) + " networks, " + std::to_string(symbolic) + " symbolic steady states");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1", "Th cell wild type converges to M2 in 2 steps", 1.0, wild_type_iteration},
      {"2", "Th cell wild type modular analysis gives the 4 listed fixed points", 5.0, wild_type_modules},
      {"3", "Th cell wild type direct attractors equal the composed ones", 60.0, wild_type_direct},
      {"4", "Th cell IFN-beta: 9 steps, module {IFNg, Tbet}, 2 steady states", 1.0, ifn_beta},
      {"5", "state-space accounting", 1.0, state_counts},
      {"6", "input network steady states agree with brute force", 1.0, input_network},
      {"7a", "product graph equals the restricted transition graph", 300.0, product_equals_restriction},
      {"7b", "composed attractors equal direct attractors in M", 300.0, composed_attractors},
      {"7c", "sweep recovers every attractor of input-layer networks", 300.0, sweep_completeness},
      {"7d", "image operator: singleton consistency and monotonicity", 300.0, image_properties},
      {"7e", "derived steady states are trap sets", 300.0, trap_sets},
      {"8", "Th cell worst case (0,1,1) freezes only IFNbR beyond the inputs", 1.0, worst_case},
  };

  int failures = 0;
  double property_total = 0.0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id.front() == '7') property_total += secs;
    std::ostringstream timing;
    timing.precision(3);
    timing << std::fixed << secs << "s";
    if (out.ok && secs > c.limit_s) {
      out.ok = false;
      out.detail = "took " + timing.str() + ", limit " + std::to_string(static_cast<int>(c.limit_s)) + "s";
    }
    failures += out.ok ? 0 : 1;
    std::cout << (out.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " [" << timing.str()
              << "]";
    if (!out.detail.empty()) std::cout << " -- " << out.detail;
    std::cout << std::endl;
  }
  const bool suite_ok = property_total < 300.0;
  if (!suite_ok) ++failures;
  std::ostringstream total;
  total.precision(3);
  total << std::fixed << property_total << "s";
  std::cout << (suite_ok ? "PASS" : "FAIL") << "  criterion 7: property suite total runtime [" << total.str()
            << ", limit 300s]" << std::endl;
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
