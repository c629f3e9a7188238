#include "tacsearch/tactic.hpp"

#include <cctype>

namespace tacs {

namespace {
struct UnitName {
  UnitKind kind;
  const char* name;
};
constexpr UnitName kUnitNames[] = {
    {UnitKind::Refl, "Refl"},           {UnitKind::Sym, "Sym"},
    {UnitKind::Assumption, "Assumption"}, {UnitKind::Rewrite, "Rewrite"},
    {UnitKind::RewriteRev, "RewriteRev"}, {UnitKind::Simp, "Simp"},
    {UnitKind::Induct, "Induct"},       {UnitKind::Cases, "Cases"},
    {UnitKind::Auto, "Auto"},
};
}  // namespace

const char* unit_name(UnitKind k) {
  for (const auto& u : kUnitNames)
    if (u.kind == k) return u.name;
  return "?";
}

std::optional<UnitKind> unit_by_name(const std::string& s) {
  for (const auto& u : kUnitNames)
    if (s == u.name) return u.kind;
  return std::nullopt;
}

bool unit_takes_thm_list(UnitKind k) {
  switch (k) {
    case UnitKind::Rewrite:
    case UnitKind::RewriteRev:
    case UnitKind::Simp:
    case UnitKind::Auto:
      return true;
    default:
      return false;
  }
}

bool unit_takes_var(UnitKind k) { return k == UnitKind::Induct || k == UnitKind::Cases; }

TacticExpr TacticExpr::mk_unit(UnitKind k) {
  TacticExpr e;
  e.kind = Kind::Unit;
  e.unit = k;
  return e;
}

TacticExpr TacticExpr::mk_unit_thms(UnitKind k, std::vector<ThmRef> thms) {
  TacticExpr e = mk_unit(k);
  e.thms = std::move(thms);
  return e;
}

TacticExpr TacticExpr::mk_unit_var(UnitKind k, std::string var) {
  TacticExpr e = mk_unit(k);
  e.var = std::move(var);
  return e;
}

TacticExpr TacticExpr::mk_alias(std::string name) {
  TacticExpr e;
  e.kind = Kind::Alias;
  e.alias = std::move(name);
  return e;
}

TacticExpr TacticExpr::mk_then(TacticExpr lhs, TacticExpr rhs) {
  TacticExpr e;
  e.kind = Kind::Then;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  return e;
}

TacticExpr TacticExpr::mk_thenl(TacticExpr head, std::vector<TacticExpr> branches) {
  TacticExpr e;
  e.kind = Kind::Thenl;
  e.children.push_back(std::move(head));
  for (auto& b : branches) e.children.push_back(std::move(b));
  return e;
}

namespace {

// Grammar (THEN / THENL at one precedence level, left-associative):
//   expr := atom (("THEN" atom) | ("THENL" "[" expr ("," expr)* "]"))*
//   atom := "(" expr ")" | UNIT | ALIAS
struct TacScanner {
  const std::string& text;
  size_t pos = 0, line = 1, col = 1;

  explicit TacScanner(const std::string& t) : text(t) {}

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

  bool at_end() {
    skip_ws();
    return pos >= text.size();
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

  // A word is an identifier-like token; returns empty if none ahead.
  std::string peek_word() {
    skip_ws();
    size_t p = pos;
    std::string out;
    while (p < text.size() && ident_char(text[p])) out += text[p++];
    return out;
  }

  void eat_word(const std::string& w) {
    skip_ws();
    for (size_t i = 0; i < w.size(); ++i) advance();
  }

  std::string quoted() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '"') fail("expected quoted variable");
    advance();
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      out += text[pos];
      advance();
    }
    if (pos >= text.size()) fail("unterminated quote");
    advance();
    if (out.empty()) fail("empty variable name");
    return out;
  }

  ThmRef thm_ref() {
    std::string first = peek_word();
    if (first.empty()) fail("expected theorem reference");
    eat_word(first);
    ThmRef r;
    if (eat(".")) {
      std::string second = peek_word();
      if (second.empty()) fail("expected theorem name after '.'");
      eat_word(second);
      r.theory = first;
      r.name = second;
    } else {
      r.name = first;
    }
    return r;
  }

  // "[...]" or the placeholder □.
  void thm_list(TacticExpr& unit) {
    if (eat(kPlaceholder)) {
      unit.placeholder = true;
      return;
    }
    if (!eat("[")) fail("expected '[' or placeholder");
    if (eat("]")) return;
    unit.thms.push_back(thm_ref());
    while (eat(",")) unit.thms.push_back(thm_ref());
    if (!eat("]")) fail("expected ']'");
  }

  TacticExpr atom() {
    if (eat("(")) {
      TacticExpr e = expr();
      if (!eat(")")) fail("expected ')'");
      return e;
    }
    std::string word = peek_word();
    if (word.empty()) fail("expected tactic");
    if (word == "THEN" || word == "THENL") fail("expected tactic before '" + word + "'");
    eat_word(word);
    if (auto k = unit_by_name(word)) {
      TacticExpr e = TacticExpr::mk_unit(*k);
      if (unit_takes_thm_list(*k)) {
        thm_list(e);
      } else if (unit_takes_var(*k)) {
        e.var = quoted();
      }
      return e;
    }
    return TacticExpr::mk_alias(word);
  }

  TacticExpr expr() {
    TacticExpr acc = atom();
    for (;;) {
      std::string word = peek_word();
      if (word == "THEN") {
        eat_word(word);
        acc = TacticExpr::mk_then(std::move(acc), atom());
      } else if (word == "THENL") {
        eat_word(word);
        if (!eat("[")) fail("expected '[' after THENL");
        std::vector<TacticExpr> branches;
        if (!eat("]")) {
          branches.push_back(expr());
          while (eat(",")) branches.push_back(expr());
          if (!eat("]")) fail("expected ']'");
        }
        acc = TacticExpr::mk_thenl(std::move(acc), std::move(branches));
      } else {
        return acc;
      }
    }
  }
};

void print_expr(const TacticExpr& e, std::string& out);

void print_atom(const TacticExpr& e, std::string& out) {
  if (e.kind == TacticExpr::Kind::Unit || e.kind == TacticExpr::Kind::Alias) {
    print_expr(e, out);
  } else {
    out += '(';
    print_expr(e, out);
    out += ')';
  }
}

void print_expr(const TacticExpr& e, std::string& out) {
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
      out += unit_name(e.unit);
      if (unit_takes_thm_list(e.unit)) {
        out += ' ';
        if (e.placeholder) {
          out += kPlaceholder;
        } else {
          out += '[';
          for (size_t i = 0; i < e.thms.size(); ++i) {
            if (i) out += ", ";
            out += e.thms[i].str();
          }
          out += ']';
        }
      } else if (unit_takes_var(e.unit)) {
        out += " \"" + e.var + "\"";
      }
      break;
    case TacticExpr::Kind::Alias:
      out += e.alias;
      break;
    case TacticExpr::Kind::Then:
      print_expr(e.children[0], out);
      out += " THEN ";
      print_atom(e.children[1], out);
      break;
    case TacticExpr::Kind::Thenl:
      print_atom(e.children[0], out);
      out += " THENL [";
      for (size_t i = 1; i < e.children.size(); ++i) {
        if (i > 1) out += ", ";
        print_expr(e.children[i], out);
      }
      out += ']';
      break;
  }
}

}  // namespace

TacticExpr parse_tactic(const std::string& text) {
  TacScanner s(text);
  TacticExpr e = s.expr();
  if (!s.at_end()) s.fail("trailing input");
  return e;
}

std::string print_tactic(const TacticExpr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

TacticExpr reassociate(TacticExpr e) {
  for (auto& c : e.children) c = reassociate(std::move(c));
  // (a THEN (b THEN c)) == ((a THEN b) THEN c); rotate until left-nested.
  while (e.kind == TacticExpr::Kind::Then &&
         e.children[1].kind == TacticExpr::Kind::Then) {
    TacticExpr a = std::move(e.children[0]);
    TacticExpr bc = std::move(e.children[1]);
    TacticExpr b = std::move(bc.children[0]);
    TacticExpr c = std::move(bc.children[1]);
    e.children[0] = TacticExpr::mk_then(std::move(a), std::move(b));
    e.children[1] = std::move(c);
  }
  return e;
}

std::string normalize_tactic(const std::string& code) {
  return print_tactic(reassociate(parse_tactic(code)));
}

namespace {
void collect_units(const TacticExpr& e, std::vector<const TacticExpr*>& out) {
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
    case TacticExpr::Kind::Alias:
      out.push_back(&e);
      break;
    case TacticExpr::Kind::Then:
    case TacticExpr::Kind::Thenl:
      for (const auto& c : e.children) collect_units(c, out);
      break;
  }
}
}  // namespace

std::vector<const TacticExpr*> tactic_units(const TacticExpr& e) {
  std::vector<const TacticExpr*> out;
  collect_units(e, out);
  return out;
}

size_t tactic_unit_count(const TacticExpr& e) { return tactic_units(e).size(); }

namespace {
bool abstract_in_place(TacticExpr& e) {
  bool changed = false;
  if (e.kind == TacticExpr::Kind::Unit && unit_takes_thm_list(e.unit) && !e.placeholder) {
    e.thms.clear();
    e.placeholder = true;
    changed = true;
  }
  for (auto& c : e.children) changed |= abstract_in_place(c);
  return changed;
}
}  // namespace

std::optional<TacticExpr> abstract_lists(const TacticExpr& e) {
  TacticExpr out = e;
  if (!abstract_in_place(out)) return std::nullopt;
  return out;
}

TacticExpr instantiate_lists(const TacticExpr& e, const std::vector<ThmRef>& thms) {
  TacticExpr out = e;
  if (out.kind == TacticExpr::Kind::Unit && out.placeholder) {
    out.placeholder = false;
    out.thms = thms;
  }
  for (auto& c : out.children) c = instantiate_lists(c, thms);
  return out;
}

bool has_placeholder(const TacticExpr& e) {
  if (e.kind == TacticExpr::Kind::Unit && e.placeholder) return true;
  for (const auto& c : e.children)
    if (has_placeholder(c)) return true;
  return false;
}

std::vector<std::vector<ThmRef>> literal_lists(const TacticExpr& e) {
  std::vector<std::vector<ThmRef>> out;
  if (e.kind == TacticExpr::Kind::Unit && unit_takes_thm_list(e.unit) && !e.placeholder)
    out.push_back(e.thms);
  for (const auto& c : e.children)
    for (auto& l : literal_lists(c)) out.push_back(std::move(l));
  return out;
}

}  // namespace tacs
