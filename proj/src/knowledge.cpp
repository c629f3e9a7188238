#include "tacsearch/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

namespace tacs {

// --- script parsing -----------------------------------------------------------

namespace {

struct LineIndex {
  std::vector<size_t> starts;
  explicit LineIndex(const std::string& text) {
    starts.push_back(0);
    for (size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') starts.push_back(i + 1);
  }
  size_t line_of(size_t pos) const {
    size_t lo = 0, hi = starts.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      (starts[mid] <= pos ? lo : hi) = mid;
    }
    return lo + 1;
  }
  size_t col_of(size_t pos) const { return pos - starts[line_of(pos) - 1] + 1; }
};

void strip_comments(std::string& text) {
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '-' && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') text[i++] = ' ';
      --i;
    }
  }
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string word_at(const std::string& text, size_t pos) {
  std::string out;
  while (pos < text.size() && ident_char(text[pos])) out += text[pos++];
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "theory" || w == "def" || w == "theorem";
}

}  // namespace

std::vector<ScriptItem> parse_script(const std::string& raw) {
  std::string text = raw;
  strip_comments(text);
  LineIndex lines(text);

  auto fail = [&](const std::string& msg, size_t pos) -> void {
    throw ParseError(msg, pos, lines.line_of(pos), lines.col_of(pos));
  };

  std::vector<ScriptItem> items;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_word = [&]() -> std::string {
    skip_ws();
    std::string w = word_at(text, pos);
    if (w.empty()) fail("expected identifier", pos);
    pos += w.size();
    return w;
  };
  auto expect = [&](const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) != 0) fail("expected '" + tok + "'", pos);
    pos += tok.size();
  };
  // Start of the next line whose first word is a top-level keyword.
  auto next_keyword_pos = [&](size_t from) -> size_t {
    for (size_t ls : lines.starts) {
      if (ls <= from) continue;
      size_t p = ls;
      while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
      if (is_keyword(word_at(text, p))) return ls;
    }
    return text.size();
  };
  auto sub_parse_tactic = [&](const std::string& src, size_t at) -> TacticExpr {
    try {
      return reassociate(parse_tactic(src));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), at, lines.line_of(at), lines.col_of(at));
    }
  };

  for (;;) {
    skip_ws();
    if (pos >= text.size()) break;
    size_t item_pos = pos;
    std::string kw = read_word();
    ScriptItem item;
    item.line = lines.line_of(item_pos);

    if (kw == "theory") {
      item.kind = ScriptItem::Kind::Theory;
      item.name = read_word();
    } else if (kw == "def") {
      item.kind = ScriptItem::Kind::Alias;
      item.name = read_word();
      if (unit_by_name(item.name)) fail("alias shadows builtin tactic '" + item.name + "'", item_pos);
      expect("=");
      size_t end = next_keyword_pos(pos);
      item.tactic = sub_parse_tactic(text.substr(pos, end - pos), pos);
      pos = end;
    } else if (kw == "theorem") {
      item.kind = ScriptItem::Kind::Theorem;
      item.name = read_word();
      expect(":");
      size_t assign = text.find(":=", pos);
      if (assign == std::string::npos) fail("expected ':='", pos);
      try {
        item.statement = parse_goal(text.substr(pos, assign - pos));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), pos, lines.line_of(pos), lines.col_of(pos));
      }
      pos = assign + 2;
      // The proof ends at the first '.' outside brackets and quotes.
      size_t scan = pos;
      int depth = 0;
      bool quoted = false;
      size_t dot = std::string::npos;
      for (; scan < text.size(); ++scan) {
        char c = text[scan];
        if (quoted) {
          if (c == '"') quoted = false;
        } else if (c == '"') {
          quoted = true;
        } else if (c == '[' || c == '(') {
          ++depth;
        } else if (c == ']' || c == ')') {
          --depth;
        } else if (c == '.' && depth == 0) {
          dot = scan;
          break;
        }
      }
      if (dot == std::string::npos) fail("expected '.' terminating proof", pos);
      item.tactic = sub_parse_tactic(text.substr(pos, dot - pos), pos);
      pos = dot + 1;
    } else {
      fail("expected 'theory', 'def' or 'theorem', got '" + kw + "'", item_pos);
    }
    items.push_back(std::move(item));
  }
  return items;
}

// --- globalization --------------------------------------------------------------

namespace {

void globalize_into(const TacticExpr& e, const AliasEnv& aliases, const TheoremScope& scope,
                    const std::string& current_theory, TacticExpr& out,
                    std::vector<std::string>& unresolved) {
  out = e;
  switch (e.kind) {
    case TacticExpr::Kind::Alias: {
      auto it = aliases.find(e.alias);
      if (it == aliases.end()) {
        unresolved.push_back(e.alias);
        return;
      }
      globalize_into(it->second, aliases, scope, current_theory, out, unresolved);
      return;
    }
    case TacticExpr::Kind::Unit: {
      for (auto& ref : out.thms) {
        if (ref.qualified()) {
          if (!scope.find_qualified(ref.theory, ref.name)) unresolved.push_back(ref.str());
          continue;
        }
        auto candidates = scope.find_named(ref.name);
        std::optional<size_t> chosen;
        for (size_t idx : candidates) {  // ascending: later entries win
          if (scope.at(idx).theory == current_theory) chosen = idx;
        }
        if (!chosen)
          for (size_t idx : candidates) chosen = idx;
        if (chosen) {
          ref.theory = scope.at(*chosen).theory;
        } else {
          unresolved.push_back(ref.name);
        }
      }
      return;
    }
    case TacticExpr::Kind::Then:
    case TacticExpr::Kind::Thenl: {
      for (size_t i = 0; i < e.children.size(); ++i)
        globalize_into(e.children[i], aliases, scope, current_theory, out.children[i], unresolved);
      return;
    }
  }
}

}  // namespace

GlobalizeResult globalize(const TacticExpr& e, const AliasEnv& aliases, const TheoremScope& scope,
                          const std::string& current_theory) {
  GlobalizeResult res;
  globalize_into(e, aliases, scope, current_theory, res.proof, res.unresolved);
  res.proof = reassociate(std::move(res.proof));
  return res;
}

// --- databases --------------------------------------------------------------------

int TacticDb::add_pair(std::string theory, Goal goal, std::string tactic,
                       std::vector<Goal> output) {
  int seq = static_cast<int>(pairs_.size());
  feats_.add("pair:" + std::to_string(seq), extract_goal_features(goal));
  ++coverage_[tactic];
  first_seq_.emplace(tactic, seq);
  pairs_.push_back({seq, std::move(theory), std::move(goal), std::move(tactic), std::move(output)});
  return seq;
}

int TacticDb::coverage(const std::string& tactic) const {
  auto it = coverage_.find(tactic);
  return it == coverage_.end() ? 0 : it->second;
}

std::optional<int> TacticDb::first_seq(const std::string& tactic) const {
  auto it = first_seq_.find(tactic);
  if (it == first_seq_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> TacticDb::predict_tactics(const FeatureSet& query, size_t k) const {
  ScoredPredictions ranked = feats_.predict(query, feats_.size(), SimMeasure::Sim1);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : ranked) {
    const std::string& code = pairs_[s.index].tactic;
    if (seen.insert(code).second) {
      out.push_back(code);
      if (out.size() >= k) break;
    }
  }
  return out;
}

int GoalListDb::add(GoalListRecord r) {
  int seq = static_cast<int>(records_.size());
  feats_.add("goal_list:" + std::to_string(seq), extract_goal_list_features(r.goals));
  records_.push_back(std::move(r));
  return seq;
}

// --- subsumption and orthogonalization ----------------------------------------------

bool goal_list_subsumed(const std::vector<Goal>& a, const std::vector<Goal>& b) {
  for (const auto& ga : a) {
    bool found = false;
    for (const auto& gb : b)
      if (alpha_equiv(ga, gb)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool subsumes_tactic(const TacticExpr& t1, const TacticExpr& t2, const Goal& g,
                     const TacticEnv& env, double timeout) {
  TacticOutcome o1 = apply_tactic(t1, g, env, Deadline::after(timeout));
  if (!o1.ok()) return false;
  TacticOutcome o2 = apply_tactic(t2, g, env, Deadline::after(timeout));
  if (!o2.ok()) return false;
  return goal_list_subsumed(o1.goals, o2.goals);
}

OrthoResult orthogonalize(const std::string& code, const Goal& goal,
                          const std::vector<Goal>& output, const TacticDb& db,
                          const std::vector<ThmRef>& instantiation_thms, const TacticEnv& env,
                          const OrthoOptions& opt) {
  FeatureSet gf = extract_goal_features(goal);
  std::vector<std::string> pool = db.predict_tactics(gf, opt.radius);

  auto add_unique = [&](const std::string& c) {
    if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
  };
  add_unique(code);
  std::optional<std::string> abs_code;
  if (opt.abstraction) {
    try {
      if (auto abs = abstract_lists(parse_tactic(code))) abs_code = print_tactic(*abs);
    } catch (const ParseError&) {
    }
    if (abs_code) add_unique(*abs_code);
  }

  struct Cand {
    std::string code;
    std::vector<Goal> out;
    bool eligible;
    double eff;
    std::optional<int> seq;
    int unstored_rank;  // abstraction of the incumbent before the incumbent
  };
  std::vector<Cand> cands;
  OrthoResult res;

  for (const auto& c : pool) {
    std::vector<Goal> applied;
    bool ok;
    if (c == code) {
      applied = output;
      ok = true;
    } else {
      TacticExpr expr;
      try {
        expr = parse_tactic(c);
      } catch (const ParseError&) {
        continue;
      }
      if (has_placeholder(expr)) expr = instantiate_lists(expr, instantiation_thms);
      TacticOutcome o = apply_tactic(expr, goal, env, Deadline::after(opt.tactic_timeout));
      ok = o.ok();
      if (ok) applied = std::move(o.goals);
    }
    if (!ok) continue;
    res.successful.push_back({c, applied});

    Cand cand;
    cand.code = c;
    cand.out = std::move(applied);
    cand.eligible = goal_list_subsumed(cand.out, output);
    bool is_abs = abs_code && c == *abs_code;
    double own = db.coverage(c);
    cand.eff = is_abs ? std::max(own, static_cast<double>(db.coverage(code))) : own;
    cand.seq = db.first_seq(c);
    cand.unstored_rank = is_abs ? 0 : (c == code ? 1 : 2);
    cands.push_back(std::move(cand));
  }

  // Most covered eligible candidate wins. Ties go to the earliest corpus
  // entry; candidates not yet in the database rank after stored ones, with
  // the incumbent's abstraction ahead of the incumbent so that a fresh
  // abstraction can enter the database at all.
  const Cand* best = nullptr;
  auto beats = [](const Cand& a, const Cand& b) {
    if (a.eff != b.eff) return a.eff > b.eff;
    if (a.seq.has_value() != b.seq.has_value()) return a.seq.has_value();
    if (a.seq && b.seq && *a.seq != *b.seq) return *a.seq < *b.seq;
    return a.unstored_rank < b.unstored_rank;
  };
  for (const auto& c : cands) {
    if (!c.eligible) continue;
    if (!best || beats(c, *best)) best = &c;
  }
  if (!best) {  // the incumbent always subsumes itself; keep it regardless
    res.winner = code;
    res.winner_output = output;
    return res;
  }
  res.winner = best->code;
  res.winner_output = best->out;
  return res;
}

// --- knowledge builder ------------------------------------------------------------------

KnowledgeBuilder::KnowledgeBuilder(Options opt) : opt_(opt) {}

void KnowledgeBuilder::begin_theory(const std::string& name) {
  theory_ = name;
  aliases_.clear();
  if (std::find(theories_.begin(), theories_.end(), name) == theories_.end()) {
    theories_.push_back(name);
    for (const auto& eq : base_simpset(name)) simpset_.push_back(eq);
  }
}

void KnowledgeBuilder::define_alias(const std::string& name, TacticExpr body) {
  aliases_[name] = reassociate(std::move(body));
}

std::vector<ThmRef> KnowledgeBuilder::predict_theorems(const FeatureSet& query, size_t k) const {
  std::vector<ThmRef> out;
  for (const auto& s : thm_feats_.predict(query, k, SimMeasure::Sim1)) {
    const Theorem& t = theorems_.at(s.index);
    out.push_back({t.theory, t.name});
  }
  return out;
}

namespace {

struct RecordedUnit {
  const TacticExpr* unit;
  Goal goal;
  std::vector<Goal> output;
};

// Executes the proof, recording every unit application in execution order.
std::optional<std::vector<Goal>> exec_recording(const TacticExpr& e, const Goal& g,
                                                const TacticEnv& env, double unit_timeout,
                                                std::vector<RecordedUnit>& recorded) {
  switch (e.kind) {
    case TacticExpr::Kind::Unit:
    case TacticExpr::Kind::Alias: {
      TacticOutcome out = apply_tactic(e, g, env, Deadline::after(unit_timeout));
      if (!out.ok()) return std::nullopt;
      recorded.push_back({&e, g, out.goals});
      return std::move(out.goals);
    }
    case TacticExpr::Kind::Then: {
      auto first = exec_recording(e.children[0], g, env, unit_timeout, recorded);
      if (!first) return std::nullopt;
      std::vector<Goal> out;
      for (const auto& sub : *first) {
        auto next = exec_recording(e.children[1], sub, env, unit_timeout, recorded);
        if (!next) return std::nullopt;
        for (auto& sg : *next) out.push_back(std::move(sg));
      }
      return out;
    }
    case TacticExpr::Kind::Thenl: {
      auto first = exec_recording(e.children[0], g, env, unit_timeout, recorded);
      if (!first) return std::nullopt;
      if (first->size() != e.children.size() - 1) return std::nullopt;
      std::vector<Goal> out;
      for (size_t i = 0; i < first->size(); ++i) {
        auto next = exec_recording(e.children[i + 1], (*first)[i], env, unit_timeout, recorded);
        if (!next) return std::nullopt;
        for (auto& sg : *next) out.push_back(std::move(sg));
      }
      return out;
    }
  }
  return std::nullopt;
}

void collect_deps(const TacticExpr& e, std::vector<std::string>& deps) {
  if (e.kind == TacticExpr::Kind::Unit) {
    for (const auto& ref : e.thms) {
      if (!ref.qualified()) continue;
      std::string q = ref.str();
      if (std::find(deps.begin(), deps.end(), q) == deps.end()) deps.push_back(q);
    }
  }
  for (const auto& c : e.children) collect_deps(c, deps);
}

}  // namespace

KnowledgeBuilder::RecordResult KnowledgeBuilder::record_theorem(const std::string& name,
                                                                const Goal& statement,
                                                                const TacticExpr& proof) {
  RecordResult result;
  GlobalizeResult glob = globalize(proof, aliases_, scope(), theory_);
  result.unresolved = glob.unresolved;
  result.globalized = print_tactic(glob.proof);
  for (const auto& u : glob.unresolved)
    warnings_.push_back(theory_ + "." + name + ": unresolved reference '" + u + "'");

  Theorem thm;
  thm.theory = theory_;
  thm.name = name;
  thm.statement = statement;
  collect_deps(glob.proof, thm.deps);

  std::vector<RecordedUnit> recorded;
  auto remaining = exec_recording(glob.proof, statement, env(), opt_.unit_timeout, recorded);
  result.replayed = remaining.has_value() && remaining->empty();
  if (!result.replayed) {
    warnings_.push_back(theory_ + "." + name + ": proof does not replay; no pairs recorded");
    thm_feats_.add("thm:" + thm.qualified(), extract_goal_features(statement));
    theorems_.add(std::move(thm));
    return result;
  }

  for (const auto& ru : recorded) {
    std::string code = print_tactic(*ru.unit);
    OrthoResult ortho;
    if (opt_.orthogonalize) {
      std::vector<ThmRef> inst =
          predict_theorems(extract_goal_features(ru.goal), opt_.abs_radius);
      OrthoOptions oopt;
      oopt.radius = opt_.ortho_radius;
      oopt.abs_radius = opt_.abs_radius;
      oopt.tactic_timeout = opt_.tactic_timeout;
      oopt.abstraction = opt_.abstraction;
      ortho = orthogonalize(code, ru.goal, ru.output, tactics_, inst, env(), oopt);
    } else {
      ortho.winner = code;
      ortho.winner_output = ru.output;
    }
    tactics_.add_pair(theory_, ru.goal, ortho.winner, ortho.winner_output);
    ++result.pairs;

    if (opt_.orthogonalize) {
      goal_lists_.add({ortho.winner_output, ru.goal, true});
      for (const auto& s : ortho.successful)
        if (s.code != ortho.winner) goal_lists_.add({s.output, ru.goal, false});
    }
    if (hook_) {
      CompetitionEvent ev{code, ru.goal, ru.output, ortho.winner, ortho.winner_output};
      hook_(ev, *this);
    }
  }

  thm_feats_.add("thm:" + thm.qualified(), extract_goal_features(statement));
  theorems_.add(std::move(thm));
  return result;
}

// --- persistence -----------------------------------------------------------------------

namespace {

using nlohmann::json;

std::vector<std::string> print_goals(const std::vector<Goal>& gs) {
  std::vector<std::string> out;
  out.reserve(gs.size());
  for (const auto& g : gs) out.push_back(print_goal(g));
  return out;
}

std::vector<Goal> parse_goals(const std::vector<std::string>& ss) {
  std::vector<Goal> out;
  out.reserve(ss.size());
  for (const auto& s : ss) out.push_back(parse_goal(s));
  return out;
}

void write_lines(const std::string& path, const std::vector<json>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& j : lines) out << j.dump() << '\n';
}

std::vector<json> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

}  // namespace

void save_knowledge(const std::string& dir, const KnowledgeBuilder& kb) {
  std::filesystem::create_directories(dir);

  std::vector<json> tactic_lines, thm_lines, gl_lines, feat_lines;
  const TacticDb& tdb = kb.tactics();
  for (size_t i = 0; i < tdb.size(); ++i) {
    const GoalTacticPair& p = tdb.at(i);
    tactic_lines.push_back({{"seq", p.seq},
                            {"theory", p.theory},
                            {"goal", print_goal(p.goal)},
                            {"tactic", p.tactic},
                            {"output", print_goals(p.output)}});
    feat_lines.push_back(
        {{"id", "pair:" + std::to_string(p.seq)}, {"kind", "tactic"},
         {"features", tdb.feats().features(static_cast<int>(i))}});
  }
  const TheoremDb& thms = kb.theorems();
  for (size_t i = 0; i < thms.size(); ++i) {
    const Theorem& t = thms.at(i);
    thm_lines.push_back({{"seq", i},
                         {"theory", t.theory},
                         {"name", t.name},
                         {"statement", print_goal(t.statement)},
                         {"deps", t.deps}});
    feat_lines.push_back({{"id", "thm:" + t.qualified()}, {"kind", "theorem"},
                          {"features", kb.theorem_feats().features(static_cast<int>(i))}});
  }
  const GoalListDb& gls = kb.goal_lists();
  for (size_t i = 0; i < gls.size(); ++i) {
    const GoalListRecord& r = gls.at(i);
    gl_lines.push_back({{"seq", i},
                        {"origin", print_goal(r.origin)},
                        {"label", r.positive ? "positive" : "negative"},
                        {"goals", print_goals(r.goals)}});
    feat_lines.push_back({{"id", "goal_list:" + std::to_string(i)}, {"kind", "goal_list"},
                          {"features", gls.feats().features(static_cast<int>(i))}});
  }

  write_lines(dir + "/tactics.jsonl", tactic_lines);
  write_lines(dir + "/theorems.jsonl", thm_lines);
  write_lines(dir + "/goallists.jsonl", gl_lines);
  write_lines(dir + "/features.jsonl", feat_lines);
}

LoadedKnowledge load_knowledge(const std::string& dir) {
  LoadedKnowledge out;
  for (const auto& j : read_lines(dir + "/tactics.jsonl"))
    out.tactics.add_pair(j.at("theory"), parse_goal(j.at("goal")), j.at("tactic"),
                         parse_goals(j.at("output")));
  for (const auto& j : read_lines(dir + "/theorems.jsonl")) {
    Theorem t;
    t.theory = j.at("theory");
    t.name = j.at("name");
    t.statement = parse_goal(j.at("statement"));
    t.deps = j.at("deps").get<std::vector<std::string>>();
    out.thm_feats.add("thm:" + t.qualified(), extract_goal_features(t.statement));
    std::string theory = t.theory;
    out.theorems.add(std::move(t));
    if (std::find(out.theories.begin(), out.theories.end(), theory) == out.theories.end()) {
      out.theories.push_back(theory);
      for (const auto& eq : base_simpset(theory)) out.simpset.push_back(eq);
    }
  }
  for (const auto& j : read_lines(dir + "/goallists.jsonl"))
    out.goal_lists.add(
        {parse_goals(j.at("goals")), parse_goal(j.at("origin")), j.at("label") == "positive"});
  return out;
}

}  // namespace tacs
