#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tacsearch/proofout.hpp"
#include "tacsearch/search.hpp"
#include "test_support.hpp"

using namespace tacs;

namespace {

KnowledgeBuilder training_kb() {
  KnowledgeBuilder kb;
  kb.begin_theory("nat");
  kb.record_theorem("add_0_l", parse_goal("|- add(0,x) = x"), parse_tactic("Simp []"));
  kb.record_theorem("add_S_l", parse_goal("|- add(S(x),y) = S(add(x,y))"),
                    parse_tactic("Simp []"));
  kb.record_theorem("add_0_r", parse_goal("|- add(x,0) = x"),
                    parse_tactic("Induct \"x\" THENL [Simp [], Simp []]"));
  kb.record_theorem("add_S_r", parse_goal("|- add(x,S(y)) = S(add(x,y))"),
                    parse_tactic("Induct \"x\" THENL [Simp [], Simp []]"));
  kb.record_theorem("add_comm", parse_goal("|- add(x,y) = add(y,x)"),
                    parse_tactic("Induct \"x\" THENL [Simp [add_0_r], Simp [add_S_r]]"));
  return kb;
}

struct Extraction {
  TacticExpr raw;
  Goal conjecture;
  SearchStatusKind status;
};

// Runs a search and pulls the unminimized proof out of the solved tree.
Extraction run_search(const KnowledgeBuilder& kb, const std::string& text, double budget = 10.0) {
  Extraction e;
  e.conjecture = parse_goal(text);
  SearchConfig cfg;
  cfg.global_timeout = budget;
  PreselectedContext ctx = preselect(e.conjecture, kb.view(), cfg.preselect_n);
  Searcher s(e.conjecture, &ctx, kb.view().env(), cfg);
  SearchResult r = s.run();
  e.status = r.status;
  if (r.status == SearchStatusKind::Proved) e.raw = extract_proof(s.tree());
  return e;
}

}  // namespace

TEST_CASE("every emitted stage of every found proof replays") {
  KnowledgeBuilder kb = training_kb();
  TacticEnv env = kb.view().env();
  const char* conjectures[] = {
      "|- add(x,S(0)) = S(x)",
      "|- add(S(S(0)),y) = S(S(y))",
      "|- add(q,0) = q",
      "|- add(x,y) = add(y,x)",
      "|- add(add(x,0),0) = x",
  };
  for (const char* text : conjectures) {
    Extraction e = run_search(kb, text);
    REQUIRE(e.status == SearchStatusKind::Proved);
    CHECK(replay_proof(e.raw, e.conjecture, env));

    TacticExpr shorter = minimize_length(e.raw, e.conjecture, env);
    CHECK(replay_proof(shorter, e.conjecture, env));
    CHECK(tactic_unit_count(shorter) <= tactic_unit_count(e.raw));

    TacticExpr trimmed = minimize_args(shorter, e.conjecture, env);
    CHECK(replay_proof(trimmed, e.conjecture, env));
    CHECK(tactic_unit_count(trimmed) == tactic_unit_count(shorter));

    TacticExpr pretty = embellish(trimmed, e.conjecture, env);
    CHECK(replay_proof(pretty, e.conjecture, env));
    CHECK(tactic_unit_count(pretty) == tactic_unit_count(trimmed));

    // Idempotence of each stage.
    CHECK(print_tactic(minimize_length(shorter, e.conjecture, env)) == print_tactic(shorter));
    CHECK(print_tactic(minimize_args(trimmed, e.conjecture, env)) == print_tactic(trimmed));
    CHECK(print_tactic(embellish(pretty, e.conjecture, env)) == print_tactic(pretty));
  }
}

TEST_CASE("extraction picks the first solving tactic and splits per branch") {
  KnowledgeBuilder kb = training_kb();
  // No multiplication lemma is recorded, so simplification alone cannot close
  // this; the only route is the learned induction with one tactic per branch.
  Extraction e = run_search(kb, "|- mul(x,0) = 0");
  REQUIRE(e.status == SearchStatusKind::Proved);
  std::string printed = print_tactic(e.raw);
  CHECK(printed.find("Induct \"x\"") != std::string::npos);
  CHECK(printed.find("THENL") != std::string::npos);
  CHECK(replay_proof(e.raw, e.conjecture, kb.view().env()));
}

TEST_CASE("minimize_length removes a redundant prefix") {
  KnowledgeBuilder kb = training_kb();
  TacticEnv env = kb.view().env();
  Goal g = parse_goal("|- add(0,x) = x");
  // Sym THEN Sym contributes nothing; Simp closes on its own.
  TacticExpr padded = parse_tactic("Sym THEN Sym THEN Simp []");
  REQUIRE(replay_proof(padded, g, env));
  TacticExpr out = minimize_length(padded, g, env);
  CHECK(print_tactic(out) == "Simp []");
  CHECK(tactic_unit_count(out) == 1);

  // A prefix the tail genuinely depends on survives: Assumption only fires
  // after Sym turns the conclusion into the literal hypothesis.
  Goal swapped = parse_goal("x = add(0,y) |- add(0,y) = x");
  TacticExpr needed = parse_tactic("Sym THEN Assumption");
  REQUIRE(replay_proof(needed, swapped, env));
  CHECK(print_tactic(minimize_length(needed, swapped, env)) == "Sym THEN Assumption");
}

TEST_CASE("minimize_length drops an equal-effect step inside THENL branches") {
  KnowledgeBuilder kb = training_kb();
  TacticEnv env = kb.view().env();
  Goal g = parse_goal("|- add(x,0) = x");
  TacticExpr padded =
      parse_tactic("Induct \"x\" THENL [Simp [], Sym THEN Sym THEN Simp []]");
  REQUIRE(replay_proof(padded, g, env));
  TacticExpr out = minimize_length(padded, g, env);
  CHECK(print_tactic(out) == "Induct \"x\" THENL [Simp [], Simp []]");
}

TEST_CASE("minimize_args drops list elements that change nothing") {
  KnowledgeBuilder kb = training_kb();
  TacticEnv env = kb.view().env();
  Goal g = parse_goal("|- add(0,x) = x");
  TacticExpr fat = parse_tactic("Simp [nat.add_0_r, nat.add_comm]");
  REQUIRE(replay_proof(fat, g, env));
  TacticExpr out = minimize_args(fat, g, env);
  CHECK(print_tactic(out) == "Simp []");

  // An element doing real work survives the greedy pass.
  Goal needs = parse_goal("|- add(S(x),0) = S(x)");
  TacticExpr lemma = parse_tactic("Simp [nat.add_0_r]");
  REQUIRE(replay_proof(lemma, needs, env));
  CHECK(print_tactic(minimize_args(lemma, needs, env)) == "Simp [nat.add_0_r]");

  // Unit structure is never touched, only lists shrink.
  Goal both = parse_goal("|- add(x,0) = add(0,x)");
  TacticExpr chain = parse_tactic("Cases \"x\" THENL [Refl, Simp [nat.add_0_r, nat.add_S_r]]");
  REQUIRE(replay_proof(chain, both, env));
  TacticExpr trimmed = minimize_args(chain, both, env);
  CHECK(tactic_unit_count(trimmed) == tactic_unit_count(chain));
  CHECK(print_tactic(trimmed) == "Cases \"x\" THENL [Refl, Simp [nat.add_0_r]]");
}

TEST_CASE("embellish strips qualifiers only while the bare name is unique") {
  KnowledgeBuilder kb = training_kb();
  TacticEnv env = kb.view().env();
  Goal g = parse_goal("|- add(S(x),0) = S(x)");
  TacticExpr q = parse_tactic("Simp [nat.add_0_r]");
  REQUIRE(replay_proof(q, g, env));
  CHECK(print_tactic(embellish(q, g, env)) == "Simp [add_0_r]");

  // A clashing name in a second theory keeps the qualifier.
  KnowledgeBuilder clash = training_kb();
  clash.begin_theory("other");
  clash.record_theorem("add_0_r", parse_goal("|- add(x,0) = x"),
                       parse_tactic("Induct \"x\" THENL [Simp [], Simp []]"));
  TacticEnv cenv = clash.view().env();
  CHECK(print_tactic(embellish(q, g, cenv)) == "Simp [nat.add_0_r]");
}

TEST_CASE("the replay budget constant is what the module promises") {
  CHECK(kReplayUnitTimeout == 1.0);
}
