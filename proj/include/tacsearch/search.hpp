#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tacsearch/preselect.hpp"

namespace tacs {

struct SearchConfig {
  double c_policy = 0.5;
  double c_exploration = 2.0;
  size_t eval_radius = 10;
  double tactic_timeout = 0.05;
  double auto_timeout = 0.1;
  size_t auto_premises = 32;
  double global_timeout = 60.0;
  size_t preselect_n = 500;
  size_t ortho_radius = 20;  // knowledge-build settings, carried in the same config
  size_t abs_radius = 16;

  // Feature switches; all on = the full system.
  bool use_auto = true;
  bool use_evaluation = true;
  bool use_abstraction = true;
  bool use_orthogonalization = true;
  bool uniform_policy = false;  // constant prior/widening policy instead of rank-decay
};

// The baseline for comparative runs: no guidance at all.
inline SearchConfig baseline_config(SearchConfig cfg) {
  cfg.use_auto = false;
  cfg.use_evaluation = false;
  cfg.use_abstraction = false;
  cfg.use_orthogonalization = false;
  cfg.uniform_policy = true;
  return cfg;
}

struct AppliedTactic {
  std::string code;          // concrete executed form (placeholders instantiated)
  std::vector<Goal> output;  // the successful application's goal list
  int child = -1;            // node id when the application was productive
};

struct GoalState {
  Goal goal;
  FeatureSet feats;
  bool feats_ready = false;
  bool cands_ready = false;
  std::vector<std::string> candidates;  // prediction order
  size_t next_candidate = 0;
  bool auto_pending = false;            // the priority Auto slot, consumed first
  std::vector<AppliedTactic> applied;   // successful applications, application order
  std::vector<int> children;            // productive children, creation order = rank
  bool solved = false;
  bool exhausted = false;               // no untried tactic remains
  bool counted = false;                 // saturation-counter membership
};

struct SearchNode {
  int id = 0;
  int parent = -1;
  std::vector<GoalState> goals;
  double prior_policy = 1.0;
  double prior_eval = 0.0;
  long visit = 0;
  long failure = 0;      // failures in this node's subtree
  long own_failure = 0;  // failures at this node itself
  double eval_sum = 0.0;  // sum of descendants' prior evaluations (self included)
  long desc_count = 0;    // |descendants|, self included
  bool solved = false;

  int open_goal() const {
    for (size_t i = 0; i < goals.size(); ++i)
      if (!goals[i].solved) return static_cast<int>(i);
    return -1;
  }
};

struct SearchStats {
  long steps = 0;
  long nodes = 0;
  long cache_hits = 0;
  double wall_ms = 0.0;
};

struct SearchTree {
  std::vector<SearchNode> nodes;
  int root = 0;
  long open_counter = 0;  // goals an extension could still try something on
  std::map<std::pair<std::string, std::string>, TacticOutcome> cache;
  SearchStats stats;
};

enum class SearchStatusKind { Proved, Saturated, TimedOut };
const char* status_name(SearchStatusKind);

struct SearchResult {
  SearchStatusKind status = SearchStatusKind::TimedOut;
  std::string script;  // minimized and embellished, when proved
  SearchStats stats;
};

// Called after each MCTS step's backpropagation; instrumentation only.
using StepObserver = std::function<void(const SearchTree&)>;

// Formula pieces, shared between the engine and conformance tests.
double prior_policy_value(size_t rank, const SearchConfig&);
double widening_policy_value(size_t applied, const SearchConfig&);
double current_policy(long child_visit, long parent_visit);
double current_evaluation(const SearchNode&);
double node_value(const SearchNode& child, const SearchNode& parent, const SearchConfig&);

// The MCTS proof search, stepwise. The tree is exposed read-only so tests can
// audit statistics after every step.
class Searcher {
 public:
  Searcher(Goal conjecture, const PreselectedContext* ctx, TacticEnv env, SearchConfig cfg);

  // One selection/extension/backpropagation step.
  void step();
  // Proved / Saturated / TimedOut once the search is over.
  std::optional<SearchStatusKind> concluded() const;
  const SearchTree& tree() const { return tree_; }
  const SearchConfig& config() const { return cfg_; }
  const TacticEnv& env() const { return env_; }

  SearchResult run(const StepObserver& observer = {});

 private:
  struct Extension {
    bool success = false;
    int child = -1;
  };

  std::vector<int> select_path();
  Extension extend(int node_id);
  void backpropagate(const std::vector<int>& path, const Extension& ext);
  void mark_node_solved(int node_id);
  void uncount_subtree(int node_id);
  bool under_solved(int node_id) const;
  void ensure_candidates(GoalState& gs);
  const FeatureSet& goal_feats(GoalState& gs);
  TacticOutcome apply_cached(const Goal& g, const std::string& code, const TacticExpr& expr,
                             double timeout);
  int new_node(int parent, std::vector<Goal> goals, double prior_policy, double prior_eval);

  const PreselectedContext* ctx_;
  TacticEnv env_;
  SearchConfig cfg_;
  SearchTree tree_;
  Deadline deadline_;
};

// Runs a search and, on success, extracts/minimizes/embellishes the proof.
SearchResult search(const Goal& conjecture, const KnowledgeView& kb, const SearchConfig& cfg,
                    const StepObserver& observer = {});

}  // namespace tacs
