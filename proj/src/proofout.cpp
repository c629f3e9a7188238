#include "tacsearch/proofout.hpp"

#include <cassert>
#include <map>

#include "tacsearch/knowledge.hpp"
#include "tacsearch/search.hpp"

namespace tacs {

namespace {

// P_goal: the first applied tactic whose child node is solved, followed by
// the proofs of that child's goals. Singleton branch lists become THEN;
// empty ones vanish.
TacticExpr proof_for_goal(const SearchTree& tree, const GoalState& gs) {
  const AppliedTactic* sol = nullptr;
  for (const AppliedTactic& at : gs.applied) {
    if (at.child >= 0 && tree.nodes[at.child].solved) {
      sol = &at;
      break;
    }
  }
  assert(sol && "solved goal without a solving tactic");
  TacticExpr head = parse_tactic(sol->code);
  const SearchNode& child = tree.nodes[sol->child];
  std::vector<TacticExpr> branches;
  for (const GoalState& sub : child.goals) branches.push_back(proof_for_goal(tree, sub));
  if (branches.empty()) return head;
  if (branches.size() == 1) return TacticExpr::mk_then(std::move(head), std::move(branches[0]));
  return TacticExpr::mk_thenl(std::move(head), std::move(branches));
}

}  // namespace

TacticExpr extract_proof(const SearchTree& tree) {
  assert(tree.nodes[tree.root].solved && "extraction requires a solved root");
  const SearchNode& root = tree.nodes[tree.root];
  assert(root.goals.size() == 1);
  return reassociate(proof_for_goal(tree, root.goals[0]));
}

// --- replay instrumentation ------------------------------------------------

namespace {

using Path = std::vector<int>;

// Applies the script structurally, recording the goals each sub-expression
// is invoked on (keyed by tree path).
std::optional<std::vector<Goal>> run_collect(const TacticExpr& e, Path& path, const Goal& g,
                                             const TacticEnv& env, double unit_timeout,
                                             std::map<Path, std::vector<Goal>>& inputs) {
  inputs[path].push_back(g);
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
    case TacticExpr::Kind::Alias: {
      TacticOutcome out = apply_tactic(e, g, env, Deadline::after(unit_timeout));
      if (!out.ok()) return std::nullopt;
      return std::move(out.goals);
    }
    case TacticExpr::Kind::Then: {
      path.push_back(0);
      auto first = run_collect(e.children[0], path, g, env, unit_timeout, inputs);
      path.back() = 1;
      std::optional<std::vector<Goal>> all;
      if (first) {
        all.emplace();
        for (const Goal& sub : *first) {
          auto next = run_collect(e.children[1], path, sub, env, unit_timeout, inputs);
          if (!next) {
            all.reset();
            break;
          }
          for (auto& sg : *next) all->push_back(std::move(sg));
        }
      }
      path.pop_back();
      return all;
    }
    case TacticExpr::Kind::Thenl: {
      path.push_back(0);
      auto first = run_collect(e.children[0], path, g, env, unit_timeout, inputs);
      std::optional<std::vector<Goal>> all;
      if (first && first->size() == e.children.size() - 1) {
        all.emplace();
        for (size_t i = 0; i + 1 < e.children.size(); ++i) {
          path.back() = static_cast<int>(i) + 1;
          auto next = run_collect(e.children[i + 1], path, (*first)[i], env, unit_timeout, inputs);
          if (!next) {
            all.reset();
            break;
          }
          for (auto& sg : *next) all->push_back(std::move(sg));
        }
      } else {
        all.reset();
      }
      path.pop_back();
      return all;
    }
  }
  return std::nullopt;
}

std::optional<std::map<Path, std::vector<Goal>>> collect_inputs(const TacticExpr& script,
                                                                const Goal& conjecture,
                                                                const TacticEnv& env,
                                                                double unit_timeout) {
  std::map<Path, std::vector<Goal>> inputs;
  Path path;
  auto res = run_collect(script, path, conjecture, env, unit_timeout, inputs);
  if (!res || !res->empty()) return std::nullopt;
  return inputs;
}

const TacticExpr* at_path(const TacticExpr& root, const Path& p) {
  const TacticExpr* e = &root;
  for (int i : p) {
    if (i < 0 || static_cast<size_t>(i) >= e->children.size()) return nullptr;
    e = &e->children[i];
  }
  return e;
}

TacticExpr* at_path(TacticExpr& root, const Path& p) {
  return const_cast<TacticExpr*>(at_path(static_cast<const TacticExpr&>(root), p));
}

// Same goal lists, element-wise up to renaming.
bool same_effect_lists(const std::vector<Goal>& a, const std::vector<Goal>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!alpha_equiv(a[i], b[i])) return false;
  return true;
}

// Replacing position p by `candidate` keeps the replay effect on every goal
// the original sub-expression was applied to.
bool equal_effect_at(const TacticExpr& original, const TacticExpr& candidate,
                     const std::vector<Goal>& inputs, const TacticEnv& env,
                     double unit_timeout) {
  for (const Goal& g : inputs) {
    TacticOutcome was = apply_tactic(original, g, env, Deadline::after(unit_timeout));
    TacticOutcome now = apply_tactic(candidate, g, env, Deadline::after(unit_timeout));
    if (!was.ok() || !now.ok()) return false;
    if (!same_effect_lists(was.goals, now.goals)) return false;
  }
  return true;
}

void all_paths(const TacticExpr& e, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  for (size_t i = 0; i < e.children.size(); ++i) {
    cur.push_back(static_cast<int>(i));
    all_paths(e.children[i], cur, out);
    cur.pop_back();
  }
}

}  // namespace

TacticExpr minimize_length(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                           double unit_timeout) {
  for (bool changed = true; changed;) {
    changed = false;
    auto inputs = collect_inputs(script, conjecture, env, unit_timeout);
    if (!inputs) return script;  // does not replay; leave untouched
    std::vector<Path> paths;
    Path cur;
    all_paths(script, cur, paths);
    for (const Path& p : paths) {
      const TacticExpr* sub = at_path(script, p);
      if (!sub || sub->kind != TacticExpr::Kind::Then) continue;
      auto in = inputs->find(p);
      if (in == inputs->end()) continue;
      if (!equal_effect_at(*sub, sub->children[1], in->second, env, unit_timeout)) continue;
      TacticExpr replacement = sub->children[1];
      *at_path(script, p) = std::move(replacement);
      script = reassociate(std::move(script));
      changed = true;
      break;  // positions moved; rescan
    }
  }
  return script;
}

TacticExpr minimize_args(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                         double unit_timeout) {
  // Dropping one element can make an earlier one redundant (rules shadow
  // each other in application order), so the greedy pass repeats until the
  // script is stable.
  bool changed = true;
  while (changed) {
    changed = false;
    auto inputs = collect_inputs(script, conjecture, env, unit_timeout);
    if (!inputs) return script;
    std::vector<Path> paths;
    Path cur;
    all_paths(script, cur, paths);
    for (const Path& p : paths) {
      TacticExpr* sub = at_path(script, p);
      if (!sub || sub->kind != TacticExpr::Kind::Unit || !unit_takes_thm_list(sub->unit))
        continue;
      auto in = inputs->find(p);
      if (in == inputs->end()) continue;
      for (size_t i = 0; i < sub->thms.size();) {
        TacticExpr trimmed = *sub;
        trimmed.thms.erase(trimmed.thms.begin() + static_cast<long>(i));
        if (equal_effect_at(*sub, trimmed, in->second, env, unit_timeout)) {
          *sub = std::move(trimmed);
          changed = true;
        } else {
          ++i;
        }
      }
    }
  }
  return script;
}

TacticExpr embellish(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                     double unit_timeout) {
  auto inputs = collect_inputs(script, conjecture, env, unit_timeout);
  if (!inputs) return script;
  std::vector<Path> paths;
  Path cur;
  all_paths(script, cur, paths);
  for (const Path& p : paths) {
    TacticExpr* sub = at_path(script, p);
    if (!sub || sub->kind != TacticExpr::Kind::Unit || sub->thms.empty()) continue;
    auto in = inputs->find(p);
    if (in == inputs->end()) continue;
    for (size_t i = 0; i < sub->thms.size(); ++i) {
      if (!sub->thms[i].qualified()) continue;
      if (env.thms.find_named(sub->thms[i].name).size() != 1) continue;  // ambiguous: keep
      TacticExpr stripped = *sub;
      stripped.thms[i].theory.clear();
      if (equal_effect_at(*sub, stripped, in->second, env, unit_timeout))
        *sub = std::move(stripped);
    }
  }
  return script;
}

}  // namespace tacs
