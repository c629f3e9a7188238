#include "tacsearch/preselect.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tacs {

namespace {

bool output_contains(const GoalTacticPair& parent, const Goal& g) {
  for (const auto& out : parent.output)
    if (alpha_equiv(out, g)) return true;
  return false;
}

// score desc, corpus order on ties
std::vector<int> top_by_score(const std::vector<double>& scores, size_t n) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  if (order.size() > n) order.resize(n);
  return order;
}

}  // namespace

std::vector<int> dependency_closure_pairs(const TacticDb& db, int seed) {
  std::set<int> seen{seed};
  std::vector<int> frontier{seed};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int j : frontier) {
      const GoalTacticPair& parent = db.at(j);
      for (size_t k = 0; k < db.size(); ++k) {
        if (seen.count(static_cast<int>(k))) continue;
        if (output_contains(parent, db.at(k).goal)) {
          seen.insert(static_cast<int>(k));
          next.push_back(static_cast<int>(k));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::string> PreselectedContext::predict_tactics(const FeatureSet& query,
                                                             size_t k) const {
  ScoredPredictions ranked = pair_feats.predict(query, pair_feats.size(), SimMeasure::Sim1);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : ranked) {
    const std::string& code = tactics->at(pair_indices[s.index]).tactic;
    if (seen.insert(code).second) {
      out.push_back(code);
      if (out.size() >= k) break;
    }
  }
  return out;
}

std::vector<ThmRef> PreselectedContext::predict_theorems(const FeatureSet& query,
                                                         size_t k) const {
  std::vector<ThmRef> out;
  for (const auto& s : thm_feats.predict(query, k, SimMeasure::Sim1)) {
    const Theorem& t = theorems->at(theorem_indices[s.index]);
    out.push_back({t.theory, t.name});
  }
  return out;
}

double PreselectedContext::prior_evaluation(const FeatureSet& query, size_t k) const {
  if (gl_feats.size() == 0 || k == 0) return 0.0;
  int positive = 0;
  for (const auto& s : gl_feats.predict(query, k, SimMeasure::Sim2))
    if (goal_lists->at(goal_list_indices[s.index]).positive) ++positive;
  return static_cast<double>(positive) / static_cast<double>(k);
}

int PreselectedContext::max_pair_seq() const {
  int mx = -1;
  for (int i : pair_indices) mx = std::max(mx, tactics->at(i).seq);
  return mx;
}

int PreselectedContext::max_theorem_index() const {
  int mx = -1;
  for (int i : theorem_indices) mx = std::max(mx, i);
  return mx;
}

PreselectedContext preselect(const Goal& conjecture, const KnowledgeView& kb, size_t n) {
  PreselectedContext ctx;
  ctx.tactics = kb.tactics;
  ctx.theorems = kb.theorems;
  ctx.goal_lists = kb.goal_lists;

  FeatureSet cf = extract_goal_features(conjecture);
  const TacticDb& tdb = *kb.tactics;
  const TheoremDb& rdb = *kb.theorems;
  const GoalListDb& ldb = *kb.goal_lists;

  // Own similarities against the full databases.
  std::vector<double> pair_sim(tdb.size());
  for (size_t i = 0; i < tdb.size(); ++i)
    pair_sim[i] = tdb.feats().sim1(tdb.feats().features(static_cast<int>(i)), cf);
  std::vector<double> thm_sim(rdb.size());
  for (size_t i = 0; i < rdb.size(); ++i)
    thm_sim[i] = kb.thm_feats->sim1(kb.thm_feats->features(static_cast<int>(i)), cf);

  // Dependency score = max(own, parent's own). A pair's parent is the first
  // pair whose recorded output contains its goal; a theorem's parent is the
  // first theorem that lists it as a dependency.
  std::vector<double> pair_score = pair_sim;
  for (size_t i = 0; i < tdb.size(); ++i) {
    for (size_t j = 0; j < tdb.size(); ++j) {
      if (output_contains(tdb.at(j), tdb.at(i).goal)) {
        pair_score[i] = std::max(pair_score[i], pair_sim[j]);
        break;
      }
    }
  }
  std::vector<double> thm_score = thm_sim;
  for (size_t i = 0; i < rdb.size(); ++i) {
    const std::string qual = rdb.at(i).qualified();
    for (size_t j = 0; j < rdb.size(); ++j) {
      const auto& deps = rdb.at(j).deps;
      if (std::find(deps.begin(), deps.end(), qual) != deps.end()) {
        thm_score[i] = std::max(thm_score[i], thm_sim[j]);
        break;
      }
    }
  }

  ctx.pair_indices = top_by_score(pair_score, n);
  ctx.theorem_indices = top_by_score(thm_score, n);

  // A goal-list record survives iff its origin goal is among the selected
  // pairs' goals.
  for (size_t i = 0; i < ldb.size(); ++i) {
    const Goal& origin = ldb.at(i).origin;
    for (int p : ctx.pair_indices) {
      if (alpha_equiv(tdb.at(p).goal, origin)) {
        ctx.goal_list_indices.push_back(static_cast<int>(i));
        break;
      }
    }
  }

  for (int i : ctx.pair_indices)
    ctx.pair_feats.add(tdb.feats().id(i), tdb.feats().features(i));
  for (int i : ctx.theorem_indices)
    ctx.thm_feats.add(kb.thm_feats->id(i), kb.thm_feats->features(i));
  for (int i : ctx.goal_list_indices)
    ctx.gl_feats.add(ldb.feats().id(i), ldb.feats().features(i));
  return ctx;
}

}  // namespace tacs
