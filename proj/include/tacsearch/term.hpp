#pragma once

#include <map>
#include <string>
#include <vector>

namespace tacs {

enum class Sort { nat, list };

struct SymbolInfo {
  std::string name;
  int arity;
  Sort result;
  std::vector<Sort> arg_sorts;
};

// The fixed first-order signature of the object logic.
const std::vector<SymbolInfo>& signature();
const SymbolInfo* find_symbol(const std::string& name);

// A term is a variable or an arity-correct application of a signature
// symbol. Values are immutable once built.
struct Term {
  bool var = false;
  std::string head;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term apply(std::string sym, std::vector<Term> args = {});

  bool operator==(const Term&) const = default;
};

std::string print_term(const Term&);

using Subst = std::map<std::string, Term>;

Term substitute(const Term&, const Subst&);

// One-sided first-order matching: extends `binding` so that
// substitute(pattern, binding) == t. On failure returns false and leaves
// `binding` in an unspecified state.
bool match_term(const Term& pattern, const Term& t, Subst& binding);

void collect_vars(const Term&, std::vector<std::string>& out);
bool contains_var(const Term&, const std::string& name);

}  // namespace tacs
