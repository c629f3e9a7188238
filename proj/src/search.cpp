#include "tacsearch/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>

#include "tacsearch/proofout.hpp"

namespace tacs {

const char* status_name(SearchStatusKind k) {
  switch (k) {
    case SearchStatusKind::Proved: return "proved";
    case SearchStatusKind::Saturated: return "saturated";
    case SearchStatusKind::TimedOut: return "timeout";
  }
  return "?";
}

double prior_policy_value(size_t rank, const SearchConfig& cfg) {
  if (cfg.uniform_policy) return cfg.c_policy;
  return std::pow(1.0 - cfg.c_policy, static_cast<double>(rank)) * cfg.c_policy;
}

double widening_policy_value(size_t applied, const SearchConfig& cfg) {
  if (cfg.uniform_policy) return cfg.c_policy;
  return std::pow(1.0 - cfg.c_policy, static_cast<double>(applied)) * cfg.c_policy;
}

double current_policy(long child_visit, long parent_visit) {
  assert(parent_visit > 0 && "selection cannot reach a child before its parent was visited");
  return (1.0 + static_cast<double>(child_visit)) / std::sqrt(static_cast<double>(parent_visit));
}

double current_evaluation(const SearchNode& n) {
  double denom = static_cast<double>(n.desc_count + n.failure);
  if (denom <= 0.0) return 0.0;
  return n.eval_sum / denom;
}

double node_value(const SearchNode& child, const SearchNode& parent, const SearchConfig& cfg) {
  double exploration = child.prior_policy / current_policy(child.visit, parent.visit);
  return current_evaluation(child) + cfg.c_exploration * exploration;
}

Searcher::Searcher(Goal conjecture, const PreselectedContext* ctx, TacticEnv env,
                   SearchConfig cfg)
    : ctx_(ctx), env_(env), cfg_(cfg), deadline_(Deadline::after(cfg.global_timeout)) {
  double pe = 0.0;
  if (cfg_.use_evaluation) {
    std::vector<Goal> gs{conjecture};
    pe = ctx_->prior_evaluation(extract_goal_list_features(gs), cfg_.eval_radius);
  }
  int root = new_node(-1, {std::move(conjecture)}, 1.0, pe);
  SearchNode& r = tree_.nodes[root];
  r.visit = 1;
  r.desc_count = 1;
  r.eval_sum = r.prior_eval;
}

int Searcher::new_node(int parent, std::vector<Goal> goals, double prior_policy,
                       double prior_eval) {
  int id = static_cast<int>(tree_.nodes.size());
  SearchNode n;
  n.id = id;
  n.parent = parent;
  n.prior_policy = prior_policy;
  n.prior_eval = prior_eval;
  for (auto& g : goals) {
    GoalState gs;
    gs.goal = std::move(g);
    gs.counted = true;
    ++tree_.open_counter;
    n.goals.push_back(std::move(gs));
  }
  tree_.nodes.push_back(std::move(n));
  tree_.stats.nodes = static_cast<long>(tree_.nodes.size());
  return id;
}

const FeatureSet& Searcher::goal_feats(GoalState& gs) {
  if (!gs.feats_ready) {
    gs.feats = extract_goal_features(gs.goal);
    gs.feats_ready = true;
  }
  return gs.feats;
}

void Searcher::ensure_candidates(GoalState& gs) {
  if (gs.cands_ready) return;
  gs.cands_ready = true;
  gs.auto_pending = cfg_.use_auto;
  gs.candidates = ctx_->predict_tactics(goal_feats(gs), ctx_->pair_feats.size());
}

TacticOutcome Searcher::apply_cached(const Goal& g, const std::string& code,
                                     const TacticExpr& expr, double timeout) {
  auto key = std::make_pair(alpha_key(g), code);
  auto it = tree_.cache.find(key);
  if (it != tree_.cache.end()) {
    ++tree_.stats.cache_hits;
    return it->second;
  }
  TacticOutcome out = apply_tactic(expr, g, env_, Deadline::after(timeout));
  tree_.cache.emplace(std::move(key), out);
  return out;
}

bool Searcher::under_solved(int node_id) const {
  for (int a = tree_.nodes[node_id].parent; a != -1; a = tree_.nodes[a].parent)
    if (tree_.nodes[a].solved) return true;
  return false;
}

std::vector<int> Searcher::select_path() {
  std::vector<int> path{tree_.root};
  int cur = tree_.root;
  for (;;) {
    const SearchNode& node = tree_.nodes[cur];
    int gi = node.open_goal();
    if (gi < 0) break;
    const std::vector<int>& children = node.goals[gi].children;
    if (children.empty()) break;
    int best = -1;
    double best_value = 0.0;
    for (int c : children) {  // creation order = rank order; strict > keeps the lowest rank
      double v = node_value(tree_.nodes[c], node, cfg_);
      if (best < 0 || v > best_value) {
        best = c;
        best_value = v;
      }
    }
    if (widening_policy_value(children.size(), cfg_) >= best_value) break;
    cur = best;
    path.push_back(cur);
  }
  return path;
}

Searcher::Extension Searcher::extend(int node_id) {
  if (tree_.nodes[node_id].solved || under_solved(node_id)) return {};
  int gi = tree_.nodes[node_id].open_goal();
  if (gi < 0) return {};

  std::string code;
  TacticExpr expr;
  double timeout = cfg_.tactic_timeout;
  bool have = false;
  bool parse_failed = false;
  {
    GoalState& gs = tree_.nodes[node_id].goals[gi];
    ensure_candidates(gs);
    if (gs.auto_pending) {
      gs.auto_pending = false;
      std::vector<ThmRef> premises = ctx_->predict_theorems(goal_feats(gs), cfg_.auto_premises);
      expr = TacticExpr::mk_unit_thms(UnitKind::Auto, premises);
      code = print_tactic(expr);
      timeout = cfg_.auto_timeout;
      have = true;
    } else if (gs.next_candidate < gs.candidates.size()) {
      const std::string& raw = gs.candidates[gs.next_candidate++];
      try {
        expr = parse_tactic(raw);
        if (has_placeholder(expr))
          expr = instantiate_lists(expr, ctx_->predict_theorems(goal_feats(gs), cfg_.abs_radius));
        code = print_tactic(expr);
      } catch (const ParseError&) {
        parse_failed = true;
      }
      have = true;
    }
    if (!gs.auto_pending && gs.next_candidate >= gs.candidates.size() && !gs.exhausted) {
      gs.exhausted = true;
      if (gs.counted && !gs.solved) {
        gs.counted = false;
        --tree_.open_counter;
      }
    }
  }
  if (!have || parse_failed) return {};

  Goal goal = tree_.nodes[node_id].goals[gi].goal;
  TacticOutcome out = apply_cached(goal, code, expr, timeout);
  if (!out.ok()) return {};

  // Productivity (three checks): the application did not fail above; its
  // output repeats no goal of an ancestor node (the node itself included);
  // and no earlier applied tactic on this goal did at least as well.
  for (int a = node_id; a != -1; a = tree_.nodes[a].parent)
    for (const GoalState& ag : tree_.nodes[a].goals)
      for (const Goal& og : out.goals)
        if (alpha_equiv(og, ag.goal)) {
          tree_.nodes[node_id].goals[gi].applied.push_back({code, out.goals, -1});
          return {};
        }
  for (const AppliedTactic& at : tree_.nodes[node_id].goals[gi].applied)
    if (goal_list_subsumed(at.output, out.goals)) {
      tree_.nodes[node_id].goals[gi].applied.push_back({code, out.goals, -1});
      return {};
    }

  double pp = prior_policy_value(tree_.nodes[node_id].goals[gi].children.size(), cfg_);
  double pe = 0.0;
  if (cfg_.use_evaluation)
    pe = ctx_->prior_evaluation(extract_goal_list_features(out.goals), cfg_.eval_radius);
  int child = new_node(node_id, out.goals, pp, pe);
  GoalState& gs = tree_.nodes[node_id].goals[gi];  // re-fetch: new_node reallocates
  gs.applied.push_back({code, out.goals, child});
  gs.children.push_back(child);
  return {true, child};
}

void Searcher::backpropagate(const std::vector<int>& path, const Extension& ext) {
  if (ext.success) {
    double pe = tree_.nodes[ext.child].prior_eval;
    for (int id : path) {
      SearchNode& n = tree_.nodes[id];
      ++n.visit;
      n.eval_sum += pe;
      ++n.desc_count;
    }
    SearchNode& c = tree_.nodes[ext.child];
    ++c.visit;
    c.eval_sum += pe;
    ++c.desc_count;
    if (c.goals.empty()) mark_node_solved(ext.child);
  } else {
    for (int id : path) {
      SearchNode& n = tree_.nodes[id];
      ++n.visit;
      ++n.failure;
    }
    ++tree_.nodes[path.back()].own_failure;
  }
}

void Searcher::uncount_subtree(int node_id) {
  std::vector<int> stack{node_id};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (GoalState& g : tree_.nodes[id].goals) {
      if (g.counted) {
        g.counted = false;
        --tree_.open_counter;
      }
      for (int c : g.children) stack.push_back(c);
    }
  }
}

void Searcher::mark_node_solved(int node_id) {
  if (tree_.nodes[node_id].solved) return;
  tree_.nodes[node_id].solved = true;
  uncount_subtree(node_id);
  int p = tree_.nodes[node_id].parent;
  if (p < 0) return;
  bool all_solved = true;
  for (GoalState& g : tree_.nodes[p].goals) {
    if (!g.solved &&
        std::find(g.children.begin(), g.children.end(), node_id) != g.children.end()) {
      g.solved = true;
      if (g.counted) {
        g.counted = false;
        --tree_.open_counter;
      }
      // Branches under the goal's other tactics are no longer explorable.
      for (int c : g.children)
        if (c != node_id) uncount_subtree(c);
    }
    if (!g.solved) all_solved = false;
  }
  if (all_solved) mark_node_solved(p);
}

void Searcher::step() {
  std::vector<int> path = select_path();
  Extension ext = extend(path.back());
  backpropagate(path, ext);
  ++tree_.stats.steps;
}

std::optional<SearchStatusKind> Searcher::concluded() const {
  if (tree_.nodes[tree_.root].solved) return SearchStatusKind::Proved;
  if (deadline_.expired()) return SearchStatusKind::TimedOut;
  if (tree_.open_counter == 0) return SearchStatusKind::Saturated;
  return std::nullopt;
}

SearchResult Searcher::run(const StepObserver& observer) {
  auto t0 = std::chrono::steady_clock::now();
  std::optional<SearchStatusKind> st;
  while (!(st = concluded())) {
    step();
    if (observer) observer(tree_);
  }
  tree_.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  SearchResult result;
  result.status = *st;
  result.stats = tree_.stats;
  return result;
}

SearchResult search(const Goal& conjecture, const KnowledgeView& kb, const SearchConfig& cfg,
                    const StepObserver& observer) {
  PreselectedContext ctx = preselect(conjecture, kb, cfg.preselect_n);
  Searcher s(conjecture, &ctx, kb.env(), cfg);
  SearchResult result = s.run(observer);
  if (result.status == SearchStatusKind::Proved) {
    TacticExpr proof = extract_proof(s.tree());
    proof = minimize_length(proof, conjecture, kb.env());
    proof = minimize_args(proof, conjecture, kb.env());
    proof = embellish(proof, conjecture, kb.env());
    result.script = print_tactic(proof);
  }
  return result;
}

}  // namespace tacs
