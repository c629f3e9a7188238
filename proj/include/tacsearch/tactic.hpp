#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tacsearch/goal.hpp"

namespace tacs {

// Theorem reference inside a tactic argument; theory is empty while the
// reference is still unqualified.
struct ThmRef {
  std::string theory;
  std::string name;
  bool qualified() const { return !theory.empty(); }
  std::string str() const { return qualified() ? theory + "." + name : name; }
  bool operator==(const ThmRef&) const = default;
};

enum class UnitKind { Refl, Sym, Assumption, Rewrite, RewriteRev, Simp, Induct, Cases, Auto };

const char* unit_name(UnitKind);
std::optional<UnitKind> unit_by_name(const std::string&);
bool unit_takes_thm_list(UnitKind);
bool unit_takes_var(UnitKind);

// Placeholder token standing for an erased theorem-list argument.
inline const std::string kPlaceholder = "□";  // □

// Tactic expression tree. THEN is associative and is kept left-nested; the
// canonical printer emits flat chains like "A THEN B THENL [C, D]".
struct TacticExpr {
  enum class Kind { Unit, Alias, Then, Thenl };
  Kind kind = Kind::Unit;

  // Kind::Unit
  UnitKind unit = UnitKind::Refl;
  std::vector<ThmRef> thms;
  bool placeholder = false;  // theorem list erased (prints as □)
  std::string var;           // Induct / Cases argument

  // Kind::Alias
  std::string alias;

  // Kind::Then: children = {lhs, rhs}. Kind::Thenl: children[0] is the head,
  // the rest are the branch tactics.
  std::vector<TacticExpr> children;

  static TacticExpr mk_unit(UnitKind k);
  static TacticExpr mk_unit_thms(UnitKind k, std::vector<ThmRef> thms);
  static TacticExpr mk_unit_var(UnitKind k, std::string var);
  static TacticExpr mk_alias(std::string name);
  static TacticExpr mk_then(TacticExpr lhs, TacticExpr rhs);
  static TacticExpr mk_thenl(TacticExpr head, std::vector<TacticExpr> branches);

  bool operator==(const TacticExpr&) const = default;
};

TacticExpr parse_tactic(const std::string& text);
std::string print_tactic(const TacticExpr&);

// Re-associates nested THEN chains to the canonical left-nested form.
TacticExpr reassociate(TacticExpr);
// parse + reassociate + print; the identity of a tactic is its normalized text.
std::string normalize_tactic(const std::string& code);

// Leaves (units / alias references) in execution order.
std::vector<const TacticExpr*> tactic_units(const TacticExpr&);
size_t tactic_unit_count(const TacticExpr&);

// Replaces every literal theorem-list argument with the placeholder; none if
// the tactic has no such argument.
std::optional<TacticExpr> abstract_lists(const TacticExpr&);
// Fills every placeholder with the given list.
TacticExpr instantiate_lists(const TacticExpr&, const std::vector<ThmRef>&);
bool has_placeholder(const TacticExpr&);
// The literal lists in reading order (used to check abstraction round-trips).
std::vector<std::vector<ThmRef>> literal_lists(const TacticExpr&);

}  // namespace tacs
