// drn: command-line front end for discrete regulatory network analysis.
//
//   drn attractors MODEL [--fix k=v,...] [--modular]
//   drn symbolic   MODEL --fix k=v,... [--trace]
//   drn verify     MODEL [--fix k=v,...]
//   drn graph      MODEL [--fix k=v,...] [--outside]
//   drn stg        MODEL [--fix k=v,...] [--force]
//   drn modules    MODEL [--fix k=v,...]
//   drn sweep      MODEL [--timing]
//
// Exit codes: 0 ok, 1 verification mismatch, 2 model error, 3 enumeration
// cap exceeded, 4 invalid arguments, 5 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drn/drn.hpp"

namespace {

enum ExitCode { kOk = 0, kMismatch = 1, kModelError = 2, kCapExceeded = 3, kBadArguments = 4, kInternal = 5 };

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string fix;
  std::string format;
  std::string out_path;
  std::uint64_t cap = drn::kDefaultEnumerationCap;
  bool modular = false;
  bool trace = false;
  bool outside = false;
  bool force = false;
  bool timing = false;
};

class BadArguments : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// `name=v,3=v,...` with names or 1-based indices.
drn::InputAssignment parse_fix(const drn::Network& net, const std::string& spec) {
  drn::InputAssignment out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw BadArguments("--fix entry '" + item + "' is not of the form name=value");
    const auto key = trim(item.substr(0, eq));
    const auto val = trim(item.substr(eq + 1));
    std::size_t idx;
    if (auto named = net.index_of(key)) {
      idx = *named;
    } else {
      try {
        std::size_t used = 0;
        const long k = std::stol(key, &used);
        if (used != key.size() || k < 1 || static_cast<std::size_t>(k) > net.size()) throw std::out_of_range(key);
        idx = static_cast<std::size_t>(k - 1);
      } catch (const std::logic_error&) {
        throw BadArguments("--fix: unknown component '" + key + "'");
      }
    }
    int level;
    try {
      std::size_t used = 0;
      level = std::stoi(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::logic_error&) {
      throw BadArguments("--fix: '" + val + "' is not an integer level");
    }
    if (level < 0 || level > net.max_level(idx))
      throw BadArguments("--fix: level " + val + " outside range 0.." + std::to_string(net.max_level(idx)) + " of " +
                         net.component(idx).name);
    if (out.count(idx)) throw BadArguments("--fix: component " + net.component(idx).name + " fixed twice");
    out[idx] = level;
  }
  return out;
}

std::string attractors_text(const std::vector<drn::Attractor>& as) {
  std::ostringstream os;
  for (const auto& a : as) {
    os << drn::to_string(a.kind);
    if (a.escapes) os << " (escapes box)";
    if (a.kind == drn::AttractorKind::cyclic) os << ' ' << a.states.size();
    for (const auto& s : a.states) os << ' ' << drn::format_tuple(s);
    os << '\n';
  }
  os << as.size() << (as.size() == 1 ? " attractor\n" : " attractors\n");
  return os.str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw BadArguments("format '" + cfg.format + "' not supported by '" + cfg.command + "' (use " + list + ")");
}

struct Pipeline {
  drn::DerivedSteadyState derived;
  drn::ModularAnalysis analysis;
};

Pipeline modular_pipeline(const drn::Network& net, const drn::SymbolicState& box, std::uint64_t cap) {
  auto derived = drn::derive_from_box(net, box);
  auto analysis = drn::analyze_modules(net, derived.state, cap);
  if (analysis.deferred) {
    std::uint64_t largest = 0;
    for (const auto& m : analysis.modules) largest = std::max(largest, m.module.domain().cardinality());
    throw drn::EnumerationCapExceeded(largest, cap);
  }
  return {std::move(derived), std::move(analysis)};
}

std::string cmd_attractors(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box) {
  require_format(cfg, {"text", "json"});
  std::vector<drn::Attractor> as;
  if (cfg.modular) {
    as = modular_pipeline(net, box, cfg.cap).analysis.composed;
  } else {
    as = drn::attractors(drn::build_stg(net, box, cfg.cap));
  }
  return cfg.format == "json" ? dump(drn::attractor_report(as)) : attractors_text(as);
}

std::string cmd_symbolic(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box) {
  require_format(cfg, {"text", "json"});
  if (box.is_regular()) {
    const auto x = box.lower();
    const bool steady = drn::evaluate(net, x) == x;
    if (cfg.format == "json") {
      nlohmann::json j{{"trace", nlohmann::json::array({drn::to_json(box)})}, {"steps", 0}, {"steady", steady}};
      if (steady) j["state"] = drn::to_json(box);
      return dump(j);
    }
    return steady ? drn::format_tuple(box) + "\nsteady state after 0 steps\n" : "not steady\n";
  }
  const auto derived = drn::derive_from_box(net, box);
  const auto& M = derived.state;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["trace"] = nlohmann::json::array();
    for (const auto& s : derived.trace.states) j["trace"].push_back(drn::to_json(s));
    j["steps"] = derived.trace.steps();
    j["state"] = drn::to_json(M);
    j["regular"] = M.is_regular();
    return dump(j);
  }
  std::ostringstream os;
  if (cfg.trace) {
    for (const auto& s : derived.trace.states) os << drn::format_tuple(s) << '\n';
  } else {
    os << drn::format_tuple(M) << '\n';
  }
  os << (M.is_regular() ? "steady state" : "symbolic steady state") << " after " << derived.trace.steps()
     << " steps\n";
  return os.str();
}

int cmd_verify(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box, std::string& out) {
  require_format(cfg, {"text"});
  const auto derived = drn::derive_from_box(net, box);
  const auto& M = derived.state;
  drn::check_cap(M, cfg.cap);
  const auto modules = drn::build_modules(net, M);
  const auto product = drn::product_stg(net, M, modules, cfg.cap);
  const auto direct = drn::build_stg(net, M, cfg.cap);
  const auto pe = product.edges();
  const auto de = direct.edges();
  std::ostringstream os;
  os << "symbolic steady state " << drn::format_tuple(M) << '\n';
  os << modules.size() << (modules.size() == 1 ? " module, " : " modules, ") << M.cardinality() << " states\n";
  if (pe == de) {
    os << "product graph equals restricted transition graph (" << de.size() << " edges)\n";
    out = os.str();
    return kOk;
  }
  std::vector<drn::TransitionGraph::Edge> missing, extra;
  std::set_difference(de.begin(), de.end(), pe.begin(), pe.end(), std::back_inserter(missing));
  std::set_difference(pe.begin(), pe.end(), de.begin(), de.end(), std::back_inserter(extra));
  os << "MISMATCH: " << missing.size() << " edges missing from product, " << extra.size() << " extra\n";
  for (const auto& [a, b] : missing)
    os << "- " << drn::format_tuple(direct.state(a)) << " -> " << drn::format_tuple(direct.state(b)) << '\n';
  for (const auto& [a, b] : extra)
    os << "+ " << drn::format_tuple(product.state(a)) << " -> " << drn::format_tuple(product.state(b)) << '\n';
  out = os.str();
  return kMismatch;
}

std::string cmd_graph(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box) {
  require_format(cfg, {"dot", "json", "text"});
  const auto scope = cfg.outside ? drn::NeighbourScope::state_space : drn::NeighbourScope::within_box;
  const auto g = drn::interaction_graph_over(net, box, scope, cfg.cap);
  if (cfg.format == "json") return dump(drn::to_json(g, net));
  if (cfg.format == "dot") return drn::to_dot(g, net);
  std::ostringstream os;
  for (const auto& e : g.edges())
    os << net.component(e.src).name << ' ' << drn::to_string(e.sign) << ' ' << net.component(e.dst).name << '\n';
  return os.str();
}

std::string cmd_stg(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box) {
  require_format(cfg, {"dot", "json"});
  const std::optional<std::uint64_t> limit = cfg.force ? std::nullopt : std::optional<std::uint64_t>(4096);
  if (limit && box.cardinality() > *limit) {
    std::cerr << "hint: pass --force to export graphs above " << *limit << " vertices\n";
    drn::check_cap(box, limit);
  }
  const auto g = drn::build_stg(net, box, cfg.cap);
  if (cfg.format == "dot") return drn::to_dot(g, limit);
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (drn::TransitionGraph::Vertex v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.state(v));
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) j["edges"].push_back({a, b});
  return dump(j);
}

std::string cmd_modules(const RunConfig& cfg, const drn::Network& net, const drn::SymbolicState& box) {
  require_format(cfg, {"json", "text"});
  const auto derived = drn::derive_from_box(net, box);
  const auto analysis = drn::analyze_modules(net, derived.state, cfg.cap);
  if (cfg.format == "json") return dump(drn::module_report(net, analysis));
  std::ostringstream os;
  os << "symbolic steady state " << drn::format_tuple(analysis.steady_state) << '\n';
  for (const auto& m : analysis.modules) {
    os << "module {";
    for (std::size_t k = 0; k < m.module.vertices().size(); ++k)
      os << (k ? ", " : "") << net.component(m.module.vertices()[k]).name;
    os << "} domain " << drn::format_tuple(m.module.domain()) << ", " << m.module.domain().cardinality()
       << " states, ";
    if (m.attractors.empty()) os << "attractors deferred\n";
    else os << m.attractors.size() << " attractors\n";
  }
  if (!analysis.deferred) os << attractors_text(analysis.composed);
  return os.str();
}

std::string cmd_sweep(const RunConfig& cfg, const drn::Network& net) {
  require_format(cfg, {"csv", "json"});
  const auto rows = drn::sweep(net, cfg.cap);
  if (cfg.format == "json") return dump(drn::sweep_json(net, rows));
  return drn::sweep_csv(net, rows, cfg.timing);
}

std::string default_format(const std::string& command) {
  if (command == "graph" || command == "stg") return "dot";
  if (command == "modules") return "json";
  if (command == "sweep") return "csv";
  return "text";
}

int run(const RunConfig& cfg) {
  drn::Network net;
  try {
    net = drn::load_model(cfg.model_path);
  } catch (const drn::ParseError& e) {
    std::cerr << e.diagnostic(cfg.model_path) << '\n';
    return kModelError;
  } catch (const drn::InvalidArgument& e) {
    std::cerr << cfg.model_path << ": " << e.what() << '\n';
    return kModelError;
  }

  const auto fix = parse_fix(net, cfg.fix);
  const auto box = drn::input_box(net, fix);

  std::string out;
  int code = kOk;
  if (cfg.command == "attractors") out = cmd_attractors(cfg, net, box);
  else if (cfg.command == "symbolic") out = cmd_symbolic(cfg, net, box);
  else if (cfg.command == "verify") code = cmd_verify(cfg, net, box, out);
  else if (cfg.command == "graph") out = cmd_graph(cfg, net, box);
  else if (cfg.command == "stg") out = cmd_stg(cfg, net, box);
  else if (cfg.command == "modules") out = cmd_modules(cfg, net, box);
  else if (cfg.command == "sweep") out = cmd_sweep(cfg, net);

  if (cfg.out_path.empty()) {
    std::cout << out;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw BadArguments("cannot write " + cfg.out_path);
    f << out;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of discrete regulatory networks"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("DRN_CAP")) {
    try {
      cfg.cap = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "DRN_CAP must be a non-negative integer\n";
      return kBadArguments;
    }
  }

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"attractors", "attractors of the transition graph (optionally restricted by --fix)"},
      {"symbolic", "derive the (symbolic) steady state from the fixed components"},
      {"verify", "check that the product of module graphs equals the restricted transition graph"},
      {"graph", "signed interaction graph"},
      {"stg", "asynchronous state transition graph"},
      {"modules", "decompose the derived symbolic steady state into network modules"},
      {"sweep", "derive steady states and attractors for every input combination"},
  };
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("model", cfg.model_path, "model file (.drn)")->required();
    sub->add_option("--format", cfg.format, "output format");
    sub->add_option("--cap", cfg.cap, "maximum number of states to enumerate");
    sub->add_option("--out", cfg.out_path, "write output to a file");
    if (std::string(s.name) != "sweep") sub->add_option("--fix", cfg.fix, "fixed levels, e.g. IFNb=1,IL12=0");
    if (std::string(s.name) == "attractors") sub->add_flag("--modular", cfg.modular, "use the modular pipeline");
    if (std::string(s.name) == "symbolic") sub->add_flag("--trace", cfg.trace, "print every iterate");
    if (std::string(s.name) == "graph")
      sub->add_flag("--outside", cfg.outside, "allow unit steps that leave the fixed box");
    if (std::string(s.name) == "stg") sub->add_flag("--force", cfg.force, "export graphs above 4096 vertices");
    if (std::string(s.name) == "sweep") sub->add_flag("--timing", cfg.timing, "add a wall-time column");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadArguments;
  }
  if (cfg.format.empty()) cfg.format = default_format(cfg.command);

  try {
    return run(cfg);
  } catch (const BadArguments& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const drn::EnumerationCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const drn::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const drn::RangeViolation& e) {
    std::cerr << cfg.model_path << ": " << e.what() << '\n';
    return kModelError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
