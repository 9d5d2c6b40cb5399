#pragma once

// Reader and writer for the `.drn` network description format.
//
//   network thcell
//   var IFNb : 0..1          # one declaration per component
//   rule IFNb := IFNb
//   rule IFNg := case { Tbet=2 | STAT4=1 & IRAK=1 -> 2; default 0 }
//
// A guard used where a value is expected means 1 if it holds, else 0.

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "drn/error.hpp"
#include "drn/model.hpp"

namespace drn {

enum class ParseErrorKind {
  syntax,
  unknown_component,
  duplicate_component,
  missing_default,
  static_range_violation,
  invalid_range,
  missing_rule,
  duplicate_rule,
};

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::syntax: return "syntax error";
    case ParseErrorKind::unknown_component: return "unknown component";
    case ParseErrorKind::duplicate_component: return "duplicate component";
    case ParseErrorKind::missing_default: return "missing default";
    case ParseErrorKind::static_range_violation: return "static range violation";
    case ParseErrorKind::invalid_range: return "invalid range";
    case ParseErrorKind::missing_rule: return "missing rule";
    case ParseErrorKind::duplicate_rule: return "duplicate rule";
  }
  return "error";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, std::string token, std::string message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column),
        token_(std::move(token)),
        message_(std::move(message)) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }
  const std::string& message() const noexcept { return message_; }

  /// `file:line:col: kind: message`
  std::string diagnostic(std::string_view file) const { return std::string(file) + ":" + what(); }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
  std::string token_;
  std::string message_;
};

namespace detail {

enum class Tok {
  ident, integer, colon, dotdot, assign, arrow, semi, lbrace, rbrace, lparen, rparen,
  bar, amp, bang, eq, ne, lt, le, gt, ge, eof,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::integer, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case ':':
        if (two('=')) kind = Tok::assign, len = 2;
        else kind = Tok::colon;
        break;
      case '.':
        if (!two('.')) throw ParseError(ParseErrorKind::syntax, l, cl, ".", "expected '..'");
        kind = Tok::dotdot, len = 2;
        break;
      case '-':
        if (!two('>')) throw ParseError(ParseErrorKind::syntax, l, cl, "-", "expected '->'");
        kind = Tok::arrow, len = 2;
        break;
      case ';': kind = Tok::semi; break;
      case '{': kind = Tok::lbrace; break;
      case '}': kind = Tok::rbrace; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case '|': kind = Tok::bar; break;
      case '&': kind = Tok::amp; break;
      case '=': kind = Tok::eq; break;
      case '!':
        if (two('=')) kind = Tok::ne, len = 2;
        else kind = Tok::bang;
        break;
      case '<':
        if (two('=')) kind = Tok::le, len = 2;
        else kind = Tok::lt;
        break;
      case '>':
        if (two('=')) kind = Tok::ge, len = 2;
        else kind = Tok::gt;
        break;
      default:
        throw ParseError(ParseErrorKind::syntax, l, cl, std::string(1, c), "unexpected character");
    }
    out.push_back({kind, std::string(src.substr(i, len)), l, cl});
    advance(len);
  }
  out.push_back({Tok::eof, "<eof>", line, col});
  return out;
}

inline bool is_keyword(std::string_view s) {
  return s == "network" || s == "var" || s == "rule" || s == "case" || s == "default";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Network parse() {
    std::string name = "unnamed";
    if (at_keyword("network")) {
      next();
      name = expect_ident("network name").text;
    }
    declare_components();
    std::vector<std::optional<Expr>> rules(components_.size());
    std::vector<Token> rule_sites(components_.size());
    while (peek().kind != Tok::eof) {
      if (at_keyword("var")) {
        next();
        next();  // name, already registered
        expect(Tok::colon, "':'");
        next();
        expect(Tok::dotdot, "'..'");
        next();
      } else if (at_keyword("rule")) {
        next();
        const Token target = expect_ident("component name");
        const auto idx = lookup(target);
        if (rules[idx])
          throw ParseError(ParseErrorKind::duplicate_rule, target.line, target.column, target.text,
                           "second rule for '" + target.text + "'");
        expect(Tok::assign, "':='");
        target_ = idx;
        rules[idx] = parse_value();
        rule_sites[idx] = target;
      } else {
        fail("expected 'var' or 'rule'");
      }
    }
    std::vector<Expr> out;
    out.reserve(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!rules[i])
        throw ParseError(ParseErrorKind::missing_rule, decl_sites_[i].line, decl_sites_[i].column,
                         components_[i].name, "no rule for '" + components_[i].name + "'");
      out.push_back(std::move(*rules[i]));
    }
    return Network(std::move(name), components_, std::move(out));
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::ident && peek().text == kw; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(ParseErrorKind::syntax, t.line, t.column, t.text, msg + ", found '" + t.text + "'");
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
    return next();
  }

  int expect_int() {
    const auto& t = expect(Tok::integer, "integer");
    try {
      return std::stoi(t.text);
    } catch (const std::out_of_range&) {
      throw ParseError(ParseErrorKind::syntax, t.line, t.column, t.text, "integer too large");
    }
  }

  // Collects every `var` declaration up front so rules may reference
  // components declared further down.
  void declare_components() {
    const std::size_t saved = pos_;
    while (peek().kind != Tok::eof) {
      if (!at_keyword("var")) {
        next();
        continue;
      }
      next();
      const Token id = expect_ident("component name");
      expect(Tok::colon, "':'");
      const Token lo_tok = peek();
      const int lo = expect_int();
      expect(Tok::dotdot, "'..'");
      const Token hi_tok = peek();
      const int hi = expect_int();
      if (lo != 0)
        throw ParseError(ParseErrorKind::invalid_range, lo_tok.line, lo_tok.column, lo_tok.text,
                         "ranges start at 0");
      if (hi < 1)
        throw ParseError(ParseErrorKind::invalid_range, hi_tok.line, hi_tok.column, hi_tok.text,
                         "'" + id.text + "' needs at least two levels");
      if (index_.count(id.text))
        throw ParseError(ParseErrorKind::duplicate_component, id.line, id.column, id.text,
                         "'" + id.text + "' declared twice");
      index_.emplace(id.text, components_.size());
      components_.push_back({id.text, hi});
      decl_sites_.push_back(id);
    }
    if (components_.empty()) fail("expected at least one 'var' declaration");
    pos_ = saved;
  }

  std::size_t lookup(const Token& t) const {
    auto it = index_.find(t.text);
    if (it == index_.end())
      throw ParseError(ParseErrorKind::unknown_component, t.line, t.column, t.text,
                       "'" + t.text + "' is not declared");
    return it->second;
  }

  static bool is_cmp(Tok k) {
    return k == Tok::eq || k == Tok::ne || k == Tok::lt || k == Tok::le || k == Tok::gt || k == Tok::ge;
  }

  Expr parse_value() {
    const Token& t = peek();
    if (t.kind == Tok::integer) {
      const int v = expect_int();
      if (v > components_[target_].max_level)
        throw ParseError(ParseErrorKind::static_range_violation, t.line, t.column, t.text,
                         "value " + t.text + " outside range 0.." +
                             std::to_string(components_[target_].max_level) + " of '" +
                             components_[target_].name + "'");
      return Expr::constant(v);
    }
    if (t.kind == Tok::ident && t.text == "case") return parse_case();
    if (t.kind == Tok::ident && !is_keyword(t.text) && !is_cmp(peek(1).kind)) {
      const auto idx = lookup(t);
      next();
      return Expr::ref(idx);
    }
    if (t.kind == Tok::ident || t.kind == Tok::bang || t.kind == Tok::lparen) return Expr::truth(parse_guard());
    fail("expected a value expression");
  }

  Expr parse_case() {
    next();
    expect(Tok::lbrace, "'{'");
    std::vector<std::pair<Expr, Expr>> arms;
    while (!at_keyword("default")) {
      if (peek().kind == Tok::rbrace) {
        const auto& t = peek();
        throw ParseError(ParseErrorKind::missing_default, t.line, t.column, t.text,
                         "case expression needs a 'default' branch");
      }
      Expr guard = parse_guard();
      expect(Tok::arrow, "'->'");
      Expr value = parse_value();
      expect(Tok::semi, "';'");
      arms.emplace_back(std::move(guard), std::move(value));
    }
    if (arms.empty()) fail("expected at least one guarded branch before 'default'");
    next();
    Expr fallback = parse_value();
    if (peek().kind == Tok::semi) next();
    expect(Tok::rbrace, "'}'");
    return Expr::cases(std::move(arms), std::move(fallback));
  }

  Expr parse_guard() {
    std::vector<Expr> terms;
    terms.push_back(parse_term());
    while (peek().kind == Tok::bar) {
      next();
      terms.push_back(parse_term());
    }
    return Expr::disjunction(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors;
    factors.push_back(parse_factor());
    while (peek().kind == Tok::amp) {
      next();
      factors.push_back(parse_factor());
    }
    return Expr::conjunction(std::move(factors));
  }

  Expr parse_factor() {
    const Token& t = peek();
    if (t.kind == Tok::bang) {
      next();
      return Expr::negation(parse_factor());
    }
    if (t.kind == Tok::lparen) {
      next();
      Expr inner = parse_guard();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind == Tok::ident && !is_keyword(t.text)) {
      const Token id = next();
      const auto idx = lookup(id);
      if (!is_cmp(peek().kind)) fail("expected a comparison operator after '" + id.text + "'");
      const Tok op_tok = next().kind;
      const int v = expect_int();
      CmpOp op = CmpOp::eq;
      switch (op_tok) {
        case Tok::eq: op = CmpOp::eq; break;
        case Tok::ne: op = CmpOp::ne; break;
        case Tok::lt: op = CmpOp::lt; break;
        case Tok::le: op = CmpOp::le; break;
        case Tok::gt: op = CmpOp::gt; break;
        default: op = CmpOp::ge; break;
      }
      return Expr::compare(idx, op, v);
    }
    fail("expected a condition");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Component> components_;
  std::vector<Token> decl_sites_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t target_ = 0;
};

inline void write_guard(std::ostream& os, const Network& net, const Expr& e, Expr::Kind parent);

inline void write_value(std::ostream& os, const Network& net, const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: os << e.value(); return;
    case K::ref: os << net.component(e.component()).name; return;
    case K::truth: write_guard(os, net, e.children().front(), K::truth); return;
    case K::cases:
      os << "case { ";
      for (std::size_t k = 0; k < e.arm_count(); ++k) {
        write_guard(os, net, e.arm_guard(k), K::cases);
        os << " -> ";
        write_value(os, net, e.arm_value(k));
        os << "; ";
      }
      os << "default ";
      write_value(os, net, e.fallback());
      os << " }";
      return;
    default: write_guard(os, net, e, K::truth); return;
  }
}

// Parentheses are emitted exactly where re-parsing would otherwise build a
// different tree: a connective nested in a connective or under negation.
inline void write_guard(std::ostream& os, const Network& net, const Expr& e, Expr::Kind parent) {
  using K = Expr::Kind;
  const bool connective = e.kind() == K::conjunction || e.kind() == K::disjunction;
  const bool parens = connective && (parent == K::conjunction || parent == K::disjunction ||
                                     parent == K::negation) &&
                      !(parent == K::disjunction && e.kind() == K::conjunction);
  if (parens) os << '(';
  switch (e.kind()) {
    case K::compare:
      os << net.component(e.component()).name << to_string(e.op()) << e.value();
      break;
    case K::negation:
      os << '!';
      write_guard(os, net, e.children().front(), K::negation);
      break;
    case K::conjunction:
    case K::disjunction: {
      const char* sep = e.kind() == K::conjunction ? " & " : " | ";
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) os << sep;
        first = false;
        write_guard(os, net, c, e.kind());
      }
      break;
    }
    default: write_value(os, net, e); break;
  }
  if (parens) os << ')';
}

}  // namespace detail

/// Parses `.drn` text into a validated network. Throws ParseError.
inline Network parse_model(std::string_view text) { return detail::Parser(text).parse(); }

inline Network load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

/// Canonical text: declarations in component order, then rules in the same
/// order. Deterministic and accepted by parse_model.
inline std::string serialize_model(const Network& net) {
  std::ostringstream os;
  os << "network " << net.name() << "\n\n";
  for (const auto& c : net.components()) os << "var " << c.name << " : 0.." << c.max_level << "\n";
  os << "\n";
  for (std::size_t i = 0; i < net.size(); ++i) {
    os << "rule " << net.component(i).name << " := ";
    detail::write_value(os, net, net.rule(i));
    os << "\n";
  }
  return os.str();
}

}  // namespace drn
