#include "tacsearch/engine.hpp"

#include <deque>
#include <set>

namespace tacs {

namespace {

struct Rule {
  Term lhs, rhs;
  bool pattern;  // theorem rule: variables match; hypothesis rule: ground
};

// Resolves a theorem reference against the visible scope. Unqualified names
// must be unique among visible theorems.
std::optional<size_t> resolve_ref(const ThmRef& ref, const TheoremScope& scope,
                                  std::string& error) {
  if (ref.qualified()) {
    auto idx = scope.find_qualified(ref.theory, ref.name);
    if (!idx) error = "unknown theorem '" + ref.str() + "'";
    return idx;
  }
  auto matches = scope.find_named(ref.name);
  if (matches.empty()) {
    error = "unknown theorem '" + ref.name + "'";
    return std::nullopt;
  }
  if (matches.size() > 1) {
    error = "ambiguous theorem '" + ref.name + "'";
    return std::nullopt;
  }
  return matches[0];
}

bool gather_rules(const std::vector<ThmRef>& refs, const TacticEnv& env, bool reversed,
                  std::vector<Rule>& out, std::string& error) {
  for (const auto& ref : refs) {
    auto idx = resolve_ref(ref, env.thms, error);
    if (!idx) return false;
    // A theorem with hypotheses only guarantees its conclusion under those
    // hypotheses, which the engine cannot discharge here, so it contributes
    // no rule.
    if (!env.thms.at(*idx).statement.hyps.empty()) continue;
    const Equation& eq = env.thms.at(*idx).statement.concl;
    if (reversed)
      out.push_back({eq.rhs, eq.lhs, true});
    else
      out.push_back({eq.lhs, eq.rhs, true});
  }
  return true;
}

void gather_hyp_rules(const Goal& g, bool reversed, std::vector<Rule>& out) {
  for (const auto& h : g.hyps) {
    if (reversed)
      out.push_back({h.rhs, h.lhs, false});
    else
      out.push_back({h.lhs, h.rhs, false});
  }
}

bool rule_applies(const Rule& rule, const Term& t, Term& out) {
  if (rule.pattern) {
    Subst b;
    if (!match_term(rule.lhs, t, b)) return false;
    out = substitute(rule.rhs, b);
    return true;
  }
  if (!(t == rule.lhs)) return false;
  out = rule.rhs;
  return true;
}

// One leftmost-outermost step: rules are tried in order at the root first,
// then recursively in the arguments left to right.
std::optional<Term> rewrite_once(const Term& t, const std::vector<Rule>& rules) {
  Term replaced;
  for (const auto& rule : rules)
    if (rule_applies(rule, t, replaced)) return replaced;
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (auto sub = rewrite_once(t.args[i], rules)) {
      Term out = t;
      out.args[i] = std::move(*sub);
      return out;
    }
  }
  return std::nullopt;
}

enum class NormStatus { Done, OutOfTime };

NormStatus normalize(Term& t, const std::vector<Rule>& rules, int& budget,
                     const Deadline& deadline, int& steps_applied) {
  while (budget > 0) {
    if (deadline.expired()) return NormStatus::OutOfTime;
    auto next = rewrite_once(t, rules);
    if (!next) return NormStatus::Done;
    t = std::move(*next);
    --budget;
    ++steps_applied;
  }
  return NormStatus::Done;
}

TacticOutcome rewrite_tactic(const Goal& g, std::vector<Rule> rules, const Deadline& deadline) {
  int budget = kRewriteStepBound;
  int steps = 0;
  Term lhs = g.concl.lhs, rhs = g.concl.rhs;
  if (normalize(lhs, rules, budget, deadline, steps) == NormStatus::OutOfTime)
    return TacticOutcome::timeout();
  if (normalize(rhs, rules, budget, deadline, steps) == NormStatus::OutOfTime)
    return TacticOutcome::timeout();
  if (lhs == rhs) return TacticOutcome::success({});
  if (steps == 0) return TacticOutcome::fail("no rewrite applied");
  Goal out = g;
  out.concl = {std::move(lhs), std::move(rhs)};
  return TacticOutcome::success({std::move(out)});
}

// --- structural induction -------------------------------------------------

// Sort of a variable as constrained by its argument positions; root
// occurrences of a bare variable are unconstrained. The first constrained
// occurrence (hypotheses before conclusion, left before right, outside-in)
// decides; a variable that occurs only unconstrained defaults to nat.
std::optional<Sort> var_sort_in_term(const Term& t, const std::string& v,
                                     std::optional<Sort> expected, bool& seen) {
  if (t.var) {
    if (t.head == v) {
      seen = true;
      if (expected) return expected;
    }
    return std::nullopt;
  }
  const SymbolInfo* info = find_symbol(t.head);
  for (size_t i = 0; i < t.args.size(); ++i)
    if (auto s = var_sort_in_term(t.args[i], v, info->arg_sorts[i], seen)) return s;
  return std::nullopt;
}

std::optional<Sort> equation_root_sort(const Equation& e) {
  if (!e.lhs.var) return find_symbol(e.lhs.head)->result;
  if (!e.rhs.var) return find_symbol(e.rhs.head)->result;
  return std::nullopt;
}

std::optional<Sort> infer_var_sort(const Goal& g, const std::string& v) {
  bool seen = false;
  std::vector<const Equation*> eqs;
  for (const auto& h : g.hyps) eqs.push_back(&h);
  eqs.push_back(&g.concl);
  for (const Equation* e : eqs) {
    std::optional<Sort> root = equation_root_sort(*e);
    if (auto s = var_sort_in_term(e->lhs, v, root, seen)) return s;
    if (auto s = var_sort_in_term(e->rhs, v, root, seen)) return s;
  }
  if (seen) return Sort::nat;
  return std::nullopt;
}

std::string fresh_var(const Goal& g, const std::string& base) {
  std::vector<std::string> used = goal_vars(g);
  auto taken = [&](const std::string& n) {
    for (const auto& u : used)
      if (u == n) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!taken(cand)) return cand;
  }
}

// Base and step goals for structural induction or a bare case split. The
// induction variable itself names the structurally smaller piece in the
// step case; the induction hypothesis is the original conclusion verbatim.
TacticOutcome induct_tactic(const Goal& g, const std::string& v, bool with_hypothesis) {
  auto sort = infer_var_sort(g, v);
  if (!sort) return TacticOutcome::fail("variable '" + v + "' not in goal");

  Subst base_subst, step_subst;
  if (*sort == Sort::nat) {
    base_subst.emplace(v, Term::apply("0"));
    step_subst.emplace(v, Term::apply("S", {Term::variable(v)}));
  } else {
    base_subst.emplace(v, Term::apply("nil"));
    step_subst.emplace(
        v, Term::apply("cons", {Term::variable(fresh_var(g, "h")), Term::variable(v)}));
  }

  Goal base = substitute(g, base_subst);
  Goal step;
  for (const auto& h : g.hyps)
    step.hyps.push_back({substitute(h.lhs, step_subst), substitute(h.rhs, step_subst)});
  if (with_hypothesis) step.hyps.push_back(g.concl);
  step.concl = {substitute(g.concl.lhs, step_subst), substitute(g.concl.rhs, step_subst)};
  return TacticOutcome::success({std::move(base), std::move(step)});
}

// --- bounded bidirectional rewrite search (Auto) ----------------------------

bool instance_of(const Equation& pattern, const Equation& eq) {
  Subst b;
  return match_term(pattern.lhs, eq.lhs, b) && match_term(pattern.rhs, eq.rhs, b);
}

bool auto_closed(const Equation& eq, const Goal& g, const std::vector<Equation>& premises) {
  if (eq.lhs == eq.rhs) return true;
  for (const auto& h : g.hyps)
    if (eq == h) return true;
  for (const auto& p : premises) {
    if (instance_of(p, eq)) return true;
    if (instance_of({p.rhs, p.lhs}, eq)) return true;
  }
  return false;
}

void term_rewrites(const Term& t, const std::vector<Rule>& rules, std::vector<Term>& out) {
  Term replaced;
  for (const auto& rule : rules)
    if (rule_applies(rule, t, replaced)) out.push_back(replaced);
  for (size_t i = 0; i < t.args.size(); ++i) {
    std::vector<Term> sub;
    term_rewrites(t.args[i], rules, sub);
    for (auto& s : sub) {
      Term copy = t;
      copy.args[i] = std::move(s);
      out.push_back(std::move(copy));
    }
  }
}

TacticOutcome auto_tactic(const Goal& g, const std::vector<ThmRef>& refs, const TacticEnv& env,
                          const Deadline& deadline) {
  std::vector<Equation> premises;
  for (const auto& ref : refs) {
    std::string error;
    auto idx = resolve_ref(ref, env.thms, error);
    if (!idx) return TacticOutcome::fail(error);
    // Same restriction as gather_rules: a conditional conclusion is not a
    // usable premise.
    if (!env.thms.at(*idx).statement.hyps.empty()) continue;
    premises.push_back(env.thms.at(*idx).statement.concl);
  }

  std::vector<Rule> rules;
  for (const auto& p : premises) {
    rules.push_back({p.lhs, p.rhs, true});
    rules.push_back({p.rhs, p.lhs, true});
  }
  gather_hyp_rules(g, false, rules);
  gather_hyp_rules(g, true, rules);

  if (auto_closed(g.concl, g, premises)) return TacticOutcome::success({});

  std::deque<std::pair<Equation, int>> queue;
  std::set<std::string> visited;
  queue.emplace_back(g.concl, 0);
  visited.insert(print_equation(g.concl));
  int generated = 0;

  while (!queue.empty()) {
    if (deadline.expired()) return TacticOutcome::timeout();
    auto [eq, depth] = queue.front();
    queue.pop_front();
    if (depth >= kAutoDepthBound) continue;

    std::vector<Term> lhs_rw, rhs_rw;
    term_rewrites(eq.lhs, rules, lhs_rw);
    term_rewrites(eq.rhs, rules, rhs_rw);
    std::vector<Equation> children;
    children.reserve(lhs_rw.size() + rhs_rw.size());
    for (auto& l : lhs_rw) children.push_back({std::move(l), eq.rhs});
    for (auto& r : rhs_rw) children.push_back({eq.lhs, std::move(r)});

    for (auto& child : children) {
      if (++generated > kAutoNodeBudget) return TacticOutcome::fail("search budget exhausted");
      if (auto_closed(child, g, premises)) return TacticOutcome::success({});
      if (visited.insert(print_equation(child)).second) queue.emplace_back(std::move(child), depth + 1);
    }
  }
  return TacticOutcome::fail("no derivation found");
}

// --- unit dispatch ----------------------------------------------------------

TacticOutcome apply_unit(const TacticExpr& e, const Goal& g, const TacticEnv& env,
                         const Deadline& deadline) {
  if (e.placeholder) return TacticOutcome::fail("uninstantiated tactic");
  std::string error;
  switch (e.unit) {
    case UnitKind::Refl:
      if (g.concl.lhs == g.concl.rhs) return TacticOutcome::success({});
      return TacticOutcome::fail("sides differ");

    case UnitKind::Sym: {
      Goal out = g;
      std::swap(out.concl.lhs, out.concl.rhs);
      return TacticOutcome::success({std::move(out)});
    }

    case UnitKind::Assumption:
      for (const auto& h : g.hyps)
        if (h == g.concl) return TacticOutcome::success({});
      return TacticOutcome::fail("no matching hypothesis");

    case UnitKind::Rewrite: {
      std::vector<Rule> rules;
      if (!gather_rules(e.thms, env, false, rules, error)) return TacticOutcome::fail(error);
      gather_hyp_rules(g, false, rules);
      return rewrite_tactic(g, std::move(rules), deadline);
    }

    case UnitKind::RewriteRev: {
      std::vector<Rule> rules;
      if (!gather_rules(e.thms, env, true, rules, error)) return TacticOutcome::fail(error);
      gather_hyp_rules(g, true, rules);
      return rewrite_tactic(g, std::move(rules), deadline);
    }

    case UnitKind::Simp: {
      std::vector<Rule> rules;
      if (!gather_rules(e.thms, env, false, rules, error)) return TacticOutcome::fail(error);
      if (env.simpset)
        for (const auto& eq : *env.simpset) rules.push_back({eq.lhs, eq.rhs, true});
      gather_hyp_rules(g, false, rules);
      return rewrite_tactic(g, std::move(rules), deadline);
    }

    case UnitKind::Induct:
      return induct_tactic(g, e.var, true);
    case UnitKind::Cases:
      return induct_tactic(g, e.var, false);

    case UnitKind::Auto:
      return auto_tactic(g, e.thms, env, deadline);
  }
  return TacticOutcome::fail("unhandled tactic");
}

}  // namespace

TacticOutcome apply_tactic(const TacticExpr& e, const Goal& g, const TacticEnv& env,
                           Deadline deadline) {
  if (deadline.expired()) return TacticOutcome::timeout();
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
      return apply_unit(e, g, env, deadline);
    case TacticExpr::Kind::Alias:
      return TacticOutcome::fail("unresolved tactic '" + e.alias + "'");
    case TacticExpr::Kind::Then: {
      TacticOutcome first = apply_tactic(e.children[0], g, env, deadline);
      if (!first.ok()) return first;
      std::vector<Goal> out;
      for (const auto& sub : first.goals) {
        TacticOutcome next = apply_tactic(e.children[1], sub, env, deadline);
        if (!next.ok()) return next;
        for (auto& sg : next.goals) out.push_back(std::move(sg));
      }
      return TacticOutcome::success(std::move(out));
    }
    case TacticExpr::Kind::Thenl: {
      TacticOutcome first = apply_tactic(e.children[0], g, env, deadline);
      if (!first.ok()) return first;
      if (first.goals.size() != e.children.size() - 1)
        return TacticOutcome::fail("THENL arity mismatch: " +
                                   std::to_string(first.goals.size()) + " goal(s), " +
                                   std::to_string(e.children.size() - 1) + " tactic(s)");
      std::vector<Goal> out;
      for (size_t i = 0; i < first.goals.size(); ++i) {
        TacticOutcome next = apply_tactic(e.children[i + 1], first.goals[i], env, deadline);
        if (!next.ok()) return next;
        for (auto& sg : next.goals) out.push_back(std::move(sg));
      }
      return TacticOutcome::success(std::move(out));
    }
  }
  return TacticOutcome::fail("unhandled tactic");
}

TacticOutcome apply_tactic(const std::string& code, const Goal& g, const TacticEnv& env,
                           Deadline deadline) {
  TacticExpr e;
  try {
    e = parse_tactic(code);
  } catch (const ParseError& err) {
    return TacticOutcome::fail(std::string("parse error: ") + err.what());
  }
  return apply_tactic(e, g, env, deadline);
}

std::optional<std::vector<Goal>> run_script(const TacticExpr& e, const Goal& g,
                                            const TacticEnv& env, double unit_timeout) {
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
    case TacticExpr::Kind::Alias: {
      TacticOutcome out = apply_tactic(e, g, env, Deadline::after(unit_timeout));
      if (!out.ok()) return std::nullopt;
      return std::move(out.goals);
    }
    case TacticExpr::Kind::Then: {
      auto first = run_script(e.children[0], g, env, unit_timeout);
      if (!first) return std::nullopt;
      std::vector<Goal> out;
      for (const auto& sub : *first) {
        auto next = run_script(e.children[1], sub, env, unit_timeout);
        if (!next) return std::nullopt;
        for (auto& sg : *next) out.push_back(std::move(sg));
      }
      return out;
    }
    case TacticExpr::Kind::Thenl: {
      auto first = run_script(e.children[0], g, env, unit_timeout);
      if (!first) return std::nullopt;
      if (first->size() != e.children.size() - 1) return std::nullopt;
      std::vector<Goal> out;
      for (size_t i = 0; i < first->size(); ++i) {
        auto next = run_script(e.children[i + 1], (*first)[i], env, unit_timeout);
        if (!next) return std::nullopt;
        for (auto& sg : *next) out.push_back(std::move(sg));
      }
      return out;
    }
  }
  return std::nullopt;
}

bool replay_proof(const TacticExpr& e, const Goal& g, const TacticEnv& env, double unit_timeout) {
  auto remaining = run_script(e, g, env, unit_timeout);
  return remaining && remaining->empty();
}

bool replay_proof(const std::string& script, const Goal& g, const TacticEnv& env,
                  double unit_timeout) {
  TacticExpr e;
  try {
    e = parse_tactic(script);
  } catch (const ParseError&) {
    return false;
  }
  return replay_proof(e, g, env, unit_timeout);
}

}  // namespace tacs
