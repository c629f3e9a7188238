#include "tacsearch/term.hpp"

#include <cassert>
#include <stdexcept>

namespace tacs {

const std::vector<SymbolInfo>& signature() {
  static const std::vector<SymbolInfo> sig = {
      {"0", 0, Sort::nat, {}},
      {"S", 1, Sort::nat, {Sort::nat}},
      {"add", 2, Sort::nat, {Sort::nat, Sort::nat}},
      {"mul", 2, Sort::nat, {Sort::nat, Sort::nat}},
      {"nil", 0, Sort::list, {}},
      {"cons", 2, Sort::list, {Sort::nat, Sort::list}},
      {"app", 2, Sort::list, {Sort::list, Sort::list}},
      {"len", 1, Sort::nat, {Sort::list}},
      {"rev", 1, Sort::list, {Sort::list}},
  };
  return sig;
}

const SymbolInfo* find_symbol(const std::string& name) {
  for (const auto& s : signature())
    if (s.name == name) return &s;
  return nullptr;
}

Term Term::variable(std::string name) {
  Term t;
  t.var = true;
  t.head = std::move(name);
  return t;
}

Term Term::apply(std::string sym, std::vector<Term> args) {
  const SymbolInfo* info = find_symbol(sym);
  if (!info || static_cast<size_t>(info->arity) != args.size())
    throw std::logic_error("malformed application of '" + sym + "'");
  Term t;
  t.head = std::move(sym);
  t.args = std::move(args);
  return t;
}

static void print_into(const Term& t, std::string& out) {
  out += t.head;
  if (!t.args.empty()) {
    out += '(';
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      print_into(t.args[i], out);
    }
    out += ')';
  }
}

std::string print_term(const Term& t) {
  std::string out;
  print_into(t, out);
  return out;
}

Term substitute(const Term& t, const Subst& s) {
  if (t.var) {
    auto it = s.find(t.head);
    return it == s.end() ? t : it->second;
  }
  Term out;
  out.head = t.head;
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute(a, s));
  return out;
}

bool match_term(const Term& pattern, const Term& t, Subst& binding) {
  if (pattern.var) {
    auto [it, fresh] = binding.emplace(pattern.head, t);
    return fresh || it->second == t;
  }
  if (t.var || t.head != pattern.head) return false;
  assert(t.args.size() == pattern.args.size());
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], t.args[i], binding)) return false;
  return true;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.var) {
    for (const auto& v : out)
      if (v == t.head) return;
    out.push_back(t.head);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

bool contains_var(const Term& t, const std::string& name) {
  if (t.var) return t.head == name;
  for (const auto& a : t.args)
    if (contains_var(a, name)) return true;
  return false;
}

}  // namespace tacs
