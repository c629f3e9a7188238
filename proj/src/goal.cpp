#include "tacsearch/goal.hpp"

#include <cctype>
#include <map>

namespace tacs {

namespace {

// Minimal scanner for the goal grammar:
//   goal := [eq ("," eq)*] "|-" eq | eq
//   eq   := term "=" term
//   term := SYMBOL "(" term ("," term)* ")" | SYMBOL | VARIABLE
struct Scanner {
  const std::string& text;
  size_t pos = 0, line = 1, col = 1;

  explicit Scanner(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos, line, col);
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      for (size_t i = 0; i < tok.size(); ++i) advance();
      return true;
    }
    return false;
  }

  bool peek(const std::string& tok) {
    skip_ws();
    return text.compare(pos, tok.size(), tok) == 0;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      fail(std::string("unexpected character '") + c + "'");
    std::string out;
    while (pos < text.size() && ident_char(text[pos])) {
      out += text[pos];
      advance();
    }
    return out;
  }

  Term term() {
    std::string name = ident();
    const SymbolInfo* info = find_symbol(name);
    if (info) {
      std::vector<Term> args;
      if (info->arity > 0) {
        if (!eat("(")) fail("'" + name + "' expects " + std::to_string(info->arity) + " argument(s)");
        args.push_back(term());
        while (eat(",")) args.push_back(term());
        if (!eat(")")) fail("expected ')'");
      }
      if (static_cast<int>(args.size()) != info->arity)
        fail("'" + name + "' expects " + std::to_string(info->arity) + " argument(s)");
      return Term::apply(name, std::move(args));
    }
    if (!std::islower(static_cast<unsigned char>(name[0])))
      fail("unknown symbol '" + name + "'");
    if (peek("(")) fail("variable '" + name + "' applied to arguments");
    return Term::variable(name);
  }

  Equation equation() {
    Term lhs = term();
    if (!eat("=")) fail("expected '='");
    Term rhs = term();
    return {std::move(lhs), std::move(rhs)};
  }

  void expect_end() {
    skip_ws();
    if (pos != text.size()) fail("trailing input");
  }
};

}  // namespace

Term parse_term(const std::string& text) {
  Scanner s(text);
  Term t = s.term();
  s.expect_end();
  return t;
}

Goal parse_goal(const std::string& text) {
  Scanner s(text);
  Goal g;
  if (s.eat("|-")) {
    g.concl = s.equation();
    s.expect_end();
    return g;
  }
  Equation first = s.equation();
  if (s.peek(",") || s.peek("|-")) {
    g.hyps.push_back(std::move(first));
    while (s.eat(",")) g.hyps.push_back(s.equation());
    if (!s.eat("|-")) s.fail("expected '|-'");
    g.concl = s.equation();
  } else {
    g.concl = std::move(first);
  }
  s.expect_end();
  return g;
}

std::string print_equation(const Equation& e) {
  return print_term(e.lhs) + " = " + print_term(e.rhs);
}

std::string print_goal(const Goal& g) {
  std::string out;
  for (size_t i = 0; i < g.hyps.size(); ++i) {
    if (i) out += ", ";
    out += print_equation(g.hyps[i]);
  }
  if (!g.hyps.empty()) out += ' ';
  out += "|- ";
  out += print_equation(g.concl);
  return out;
}

namespace {

bool alpha_terms(const Term& a, const Term& b, std::map<std::string, std::string>& fwd,
                 std::map<std::string, std::string>& bwd) {
  if (a.var != b.var) return false;
  if (a.var) {
    auto [fit, ffresh] = fwd.emplace(a.head, b.head);
    if (!ffresh && fit->second != b.head) return false;
    auto [bit, bfresh] = bwd.emplace(b.head, a.head);
    return bfresh ? true : bit->second == a.head;
  }
  if (a.head != b.head) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!alpha_terms(a.args[i], b.args[i], fwd, bwd)) return false;
  return true;
}

}  // namespace

bool alpha_equiv(const Goal& a, const Goal& b) {
  if (a.hyps.size() != b.hyps.size()) return false;
  std::map<std::string, std::string> fwd, bwd;
  for (size_t i = 0; i < a.hyps.size(); ++i) {
    if (!alpha_terms(a.hyps[i].lhs, b.hyps[i].lhs, fwd, bwd)) return false;
    if (!alpha_terms(a.hyps[i].rhs, b.hyps[i].rhs, fwd, bwd)) return false;
  }
  return alpha_terms(a.concl.lhs, b.concl.lhs, fwd, bwd) &&
         alpha_terms(a.concl.rhs, b.concl.rhs, fwd, bwd);
}

std::string alpha_key(const Goal& g) {
  std::vector<std::string> vars = goal_vars(g);
  Subst renaming;
  for (size_t i = 0; i < vars.size(); ++i)
    renaming.emplace(vars[i], Term::variable("v" + std::to_string(i)));
  return print_goal(substitute(g, renaming));
}

Goal substitute(const Goal& g, const Subst& s) {
  Goal out;
  out.hyps.reserve(g.hyps.size());
  for (const auto& h : g.hyps) out.hyps.push_back({substitute(h.lhs, s), substitute(h.rhs, s)});
  out.concl = {substitute(g.concl.lhs, s), substitute(g.concl.rhs, s)};
  return out;
}

std::vector<std::string> goal_vars(const Goal& g) {
  std::vector<std::string> vars;
  for (const auto& h : g.hyps) {
    collect_vars(h.lhs, vars);
    collect_vars(h.rhs, vars);
  }
  collect_vars(g.concl.lhs, vars);
  collect_vars(g.concl.rhs, vars);
  return vars;
}

}  // namespace tacs
