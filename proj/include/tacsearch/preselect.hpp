#pragma once

#include <string>
#include <vector>

#include "tacsearch/knowledge.hpp"

namespace tacs {

// Forward dependency closure of a recorded pair: the pair itself plus,
// transitively, every pair whose goal appears in the output of a pair
// already in the set. Outputs come from the replay-time record.
std::vector<int> dependency_closure_pairs(const TacticDb& db, int seed);

// The slice of the knowledge base a single search is allowed to see,
// selected once per conjecture. Feature databases are rebuilt over the
// selected subsets so frequencies reflect what the search actually ranks.
struct PreselectedContext {
  const TacticDb* tactics = nullptr;
  const TheoremDb* theorems = nullptr;
  const GoalListDb* goal_lists = nullptr;

  // Indices into the source databases, in selection order
  // (dependency score descending, ties by corpus order).
  std::vector<int> pair_indices;
  std::vector<int> theorem_indices;
  std::vector<int> goal_list_indices;

  FeatureDb pair_feats;   // aligned with pair_indices
  FeatureDb thm_feats;    // aligned with theorem_indices
  FeatureDb gl_feats;     // aligned with goal_list_indices

  // Distinct tactic codes ranked by their best pair's similarity to the query.
  std::vector<std::string> predict_tactics(const FeatureSet& query, size_t k) const;
  std::vector<ThmRef> predict_theorems(const FeatureSet& query, size_t k) const;

  // Fraction of the k nearest goal lists that were recorded as positive
  // (k stays in the denominator even when fewer records exist; an empty
  // database scores 0).
  double prior_evaluation(const FeatureSet& query, size_t k) const;

  // Chronology instrumentation: newest source object visible here.
  int max_pair_seq() const;
  int max_theorem_index() const;
};

PreselectedContext preselect(const Goal& conjecture, const KnowledgeView& kb, size_t n = 500);

}  // namespace tacs
