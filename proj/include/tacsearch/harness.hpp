#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tacsearch/search.hpp"

namespace tacs {

struct CorpusItem {
  std::string file;
  ScriptItem item;
};

// Reads every *.thy file of the directory in lexicographic filename order.
// Parse failures abort with file/line in the message.
std::vector<CorpusItem> load_corpus(const std::string& dir);

KnowledgeBuilder::Options builder_options(const SearchConfig&);

// Replays the whole corpus into a knowledge base (chronological order).
KnowledgeBuilder build_knowledge(const std::vector<CorpusItem>&, const SearchConfig&);

struct TheoremOutcome {
  int index = 0;  // position among the corpus' theorems
  std::string theory;
  std::string name;
  std::string status;  // proved | saturated | timeout | skipped
  std::string script;
  double wall_ms = 0.0;
  int proof_units = 0;
  long steps = 0;
};

struct RunReport {
  std::vector<TheoremOutcome> records;
  int total = 0;      // theorems seen
  int attempted = 0;  // theorems searched
  int solved = 0;
  SearchConfig config;
};

// Chronological evaluation: each theorem is searched against only the
// knowledge recorded before it, then its human proof is recorded. `attempt`
// filters which theorem indices are searched (all when empty).
RunReport reprove(const std::vector<CorpusItem>&, const SearchConfig&,
                  const std::function<bool(int)>& attempt = {}, std::ostream* log = nullptr);

// report.json plus curve.csv (cumulative solves over time) and
// histogram.csv (proof length distribution) under out_dir.
void write_report(const RunReport&, const std::string& out_dir);

// Flat key=value configuration (fields of SearchConfig by name).
bool apply_config_value(SearchConfig&, const std::string& key, const std::string& value);
SearchConfig load_config_file(const std::string& path, SearchConfig base);

struct TuneCell {
  std::map<std::string, std::string> assignment;
  int solved = 0;
  int attempted = 0;
};

struct TuneResult {
  std::vector<TuneCell> cells;
  int best = -1;  // highest solved, first listed on ties
};

// Cartesian grid over SearchConfig fields (JSON: {"field": [v, ...], ...}),
// each cell evaluated on the training slice (every 3rd theorem of the first
// half); cells run in parallel.
TuneResult tune(const std::vector<CorpusItem>&, const SearchConfig& base,
                const std::string& grid_path, std::ostream* log = nullptr);
void write_tune(const TuneResult&, const std::string& out_dir);

struct ProveOutcome {
  SearchStatusKind status;
  std::string script;
  SearchStats stats;
};

// One-shot search against the fully built corpus knowledge. The optional
// second pass re-searches with a low policy coefficient and keeps the
// shorter proof.
ProveOutcome prove_goal(const std::vector<CorpusItem>&, const Goal&, const SearchConfig&,
                        bool research_minimize = false);

}  // namespace tacs
