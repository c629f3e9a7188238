#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tacsearch/engine.hpp"
#include "tacsearch/feature_db.hpp"

namespace tacs {

// --- corpus scripts ---------------------------------------------------------

// One declaration of a proof-script file:
//   theory <id>
//   def <NAME> = <tactic-expr>
//   theorem <id> : <goal> := <tactic-expr> .
// Comments run from "--" to end of line.
struct ScriptItem {
  enum class Kind { Theory, Alias, Theorem };
  Kind kind;
  size_t line = 0;
  std::string name;   // theory id / alias name / theorem name
  TacticExpr tactic;  // alias body / theorem proof
  Goal statement;     // theorem only
};

std::vector<ScriptItem> parse_script(const std::string& text);

// --- globalization -----------------------------------------------------------

using AliasEnv = std::map<std::string, TacticExpr>;

struct GlobalizeResult {
  TacticExpr proof;
  // References that could not be resolved; they are kept as written.
  std::vector<std::string> unresolved;
};

// Makes a proof standalone: inlines aliases recursively and qualifies every
// theorem reference as theory.name. Unqualified names resolve to the newest
// visible theorem of the current theory, then the newest visible elsewhere.
GlobalizeResult globalize(const TacticExpr&, const AliasEnv&, const TheoremScope&,
                          const std::string& current_theory);

// --- recorded data -----------------------------------------------------------

struct GoalTacticPair {
  int seq;
  std::string theory;
  Goal goal;
  std::string tactic;  // normalized, fully qualified; may contain □
  std::vector<Goal> output;
};

class TacticDb {
 public:
  int add_pair(std::string theory, Goal goal, std::string tactic, std::vector<Goal> output);
  size_t size() const { return pairs_.size(); }
  const GoalTacticPair& at(size_t i) const { return pairs_[i]; }
  const FeatureDb& feats() const { return feats_; }

  // Number of goals the tactic is recorded for.
  int coverage(const std::string& tactic) const;
  std::optional<int> first_seq(const std::string& tactic) const;
  const std::map<std::string, int>& coverage_map() const { return coverage_; }

  // Distinct tactics ordered by similarity of their recorded goals to the
  // query features (best pair decides a tactic's rank).
  std::vector<std::string> predict_tactics(const FeatureSet& query, size_t k) const;

 private:
  std::vector<GoalTacticPair> pairs_;
  std::map<std::string, int> coverage_;
  std::map<std::string, int> first_seq_;
  FeatureDb feats_;
};

struct GoalListRecord {
  std::vector<Goal> goals;
  Goal origin;
  bool positive;
};

class GoalListDb {
 public:
  int add(GoalListRecord);
  size_t size() const { return records_.size(); }
  const GoalListRecord& at(size_t i) const { return records_[i]; }
  const FeatureDb& feats() const { return feats_; }

 private:
  std::vector<GoalListRecord> records_;
  FeatureDb feats_;
};

// --- tactic subsumption and orthogonalization --------------------------------

// Every goal of `a` is alpha-equivalent to some goal of `b`.
bool goal_list_subsumed(const std::vector<Goal>& a, const std::vector<Goal>& b);

// t1 subsumes t2 on g: both applications succeed and t1's output list is
// subsumed by t2's (t1 progresses at least as far).
bool subsumes_tactic(const TacticExpr& t1, const TacticExpr& t2, const Goal& g,
                     const TacticEnv& env, double timeout);

struct OrthoOptions {
  size_t radius = 20;      // competition pool size from predictions
  size_t abs_radius = 16;  // theorems used to instantiate placeholders
  double tactic_timeout = 0.05;
  bool abstraction = true;
};

struct OrthoApplied {
  std::string code;  // identity (may contain □)
  std::vector<Goal> output;
};

struct OrthoResult {
  std::string winner;
  std::vector<Goal> winner_output;
  std::vector<OrthoApplied> successful;  // every candidate that applied, winner included
};

// The orthogonalization competition for recording tactic `code` on `goal`
// (with its known output): predicted tactics, the tactic itself and its
// abstraction compete; the most covered candidate that subsumes the tactic
// wins and is what gets associated with the goal.
OrthoResult orthogonalize(const std::string& code, const Goal& goal,
                          const std::vector<Goal>& output, const TacticDb& db,
                          const std::vector<ThmRef>& instantiation_thms, const TacticEnv& env,
                          const OrthoOptions& opt);

// --- incremental knowledge construction --------------------------------------

// Chronological view over everything recorded so far; what a search is
// allowed to see.
struct KnowledgeView {
  const TacticDb* tactics = nullptr;
  const TheoremDb* theorems = nullptr;
  const FeatureDb* thm_feats = nullptr;
  const GoalListDb* goal_lists = nullptr;
  TheoremScope scope;
  const std::vector<Equation>* simpset = nullptr;

  TacticEnv env() const { return {scope, simpset}; }
};

class KnowledgeBuilder {
 public:
  struct Options {
    size_t ortho_radius = 20;
    size_t abs_radius = 16;
    double tactic_timeout = 0.05;
    double unit_timeout = 1.0;
    bool orthogonalize = true;
    bool abstraction = true;
  };

  struct RecordResult {
    bool replayed = false;
    int pairs = 0;
    std::vector<std::string> unresolved;
    std::string globalized;
  };

  // Audit hook: fired after each competition's winner has been stored.
  struct CompetitionEvent {
    std::string incumbent;
    Goal goal;
    std::vector<Goal> incumbent_output;
    std::string winner;
    std::vector<Goal> winner_output;
  };
  using CompetitionHook = std::function<void(const CompetitionEvent&, const KnowledgeBuilder&)>;

  KnowledgeBuilder() : KnowledgeBuilder(Options{}) {}
  explicit KnowledgeBuilder(Options opt);

  void begin_theory(const std::string& name);
  void define_alias(const std::string& name, TacticExpr body);
  RecordResult record_theorem(const std::string& name, const Goal& statement,
                              const TacticExpr& proof);

  const TacticDb& tactics() const { return tactics_; }
  const TheoremDb& theorems() const { return theorems_; }
  const GoalListDb& goal_lists() const { return goal_lists_; }
  const FeatureDb& theorem_feats() const { return thm_feats_; }
  const std::vector<Equation>& simpset() const { return simpset_; }
  const std::vector<std::string>& theories() const { return theories_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::string& current_theory() const { return theory_; }

  TheoremScope scope() const { return {&theorems_, theorems_.size()}; }
  TacticEnv env() const { return {scope(), &simpset_}; }
  KnowledgeView view() const {
    return {&tactics_, &theorems_, &thm_feats_, &goal_lists_, scope(), &simpset_};
  }

  // Nearest recorded theorems to a goal, as qualified references.
  std::vector<ThmRef> predict_theorems(const FeatureSet& query, size_t k) const;

  void set_competition_hook(CompetitionHook hook) { hook_ = std::move(hook); }

 private:
  Options opt_;
  std::string theory_;
  std::vector<std::string> theories_;
  AliasEnv aliases_;
  TacticDb tactics_;
  TheoremDb theorems_;
  FeatureDb thm_feats_;
  GoalListDb goal_lists_;
  std::vector<Equation> simpset_;
  std::vector<std::string> warnings_;
  CompetitionHook hook_;
};

// --- persistence --------------------------------------------------------------

// JSON-lines snapshot: tactics.jsonl, theorems.jsonl, goallists.jsonl and
// features.jsonl ({id, kind, features}) under `dir`. Feature frequencies
// are recomputed on load.
void save_knowledge(const std::string& dir, const KnowledgeBuilder&);

struct LoadedKnowledge {
  TacticDb tactics;
  TheoremDb theorems;
  FeatureDb thm_feats;
  GoalListDb goal_lists;
  std::vector<std::string> theories;
  std::vector<Equation> simpset;

  KnowledgeView view() const {
    return {&tactics, &theorems, &thm_feats, &goal_lists,
            TheoremScope{&theorems, theorems.size()}, &simpset};
  }
};

LoadedKnowledge load_knowledge(const std::string& dir);

}  // namespace tacs
