#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tacsearch/harness.hpp"
#include "tacsearch/preselect.hpp"
#include "tacsearch/proofout.hpp"

using namespace tacs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Scratch directory removed when the test ends.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("tacs_harness_" + std::to_string(rd()) + "_" +
                                        std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string dir() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Eight addition theorems whose replays and searches all finish quickly:
// the suite re-searches this corpus several times.
const char* kMiniCorpus = R"(theory nat

theorem add_0_l : |- add(0,x) = x := Simp [] .
theorem add_S_l : |- add(S(x),y) = S(add(x,y)) := Simp [] .

def AddInd = Induct "x" THENL [Simp [], Simp []]

theorem add_0_r : |- add(x,0) = x := AddInd .
theorem add_S_r : |- add(x,S(y)) = S(add(x,y)) := AddInd .
theorem add_assoc : |- add(add(x,y),z) = add(x,add(y,z)) := AddInd .
theorem add_1_r : |- add(x,S(0)) = S(x) := Simp [add_S_r, add_0_r] .
theorem add_0_r_flip : |- add(y,0) = y := Simp [add_0_r] .
theorem add_S_r_flip : |- add(y,S(x)) = S(add(y,x)) := Simp [add_S_r] .
)";

std::vector<CorpusItem> mini_corpus() {
  TempDir tmp;
  tmp.file("mini.thy", kMiniCorpus);
  return load_corpus(tmp.dir());
}

SearchConfig quick_config() {
  SearchConfig cfg;
  cfg.global_timeout = 10.0;
  return cfg;
}

bool replays(const std::string& script, const Goal& goal, const TacticEnv& env) {
  TacticOutcome out = apply_tactic(parse_tactic(script), goal, env, Deadline::after(5.0));
  return out.ok() && out.goals.empty();
}

}  // namespace

TEST_CASE("load_corpus orders files by name and ignores other extensions") {
  TempDir tmp;
  // Created in reverse name order on purpose; only the filename may matter.
  tmp.file("b_second.thy", "theory two\n\ntheorem t2 : |- mul(0,x) = 0 := Simp [] .\n");
  tmp.file("a_first.thy", "theory one\n\ntheorem t1 : |- add(0,x) = x := Simp [] .\n");
  tmp.file("notes.txt", "theorem broken : this is not a script\n");
  tmp.file("thy.md", "# not a theory file\n");

  std::vector<CorpusItem> items = load_corpus(tmp.dir());
  REQUIRE(items.size() == 4);
  CHECK(fs::path(items[0].file).filename() == "a_first.thy");
  CHECK(items[0].item.kind == ScriptItem::Kind::Theory);
  CHECK(items[0].item.name == "one");
  CHECK(items[1].item.name == "t1");
  CHECK(fs::path(items[2].file).filename() == "b_second.thy");
  CHECK(items[2].item.name == "two");
  CHECK(items[3].item.name == "t2");
  CHECK(items[3].item.kind == ScriptItem::Kind::Theorem);
}

TEST_CASE("load_corpus reports parse failures as file:line: message") {
  TempDir tmp;
  std::string bad = tmp.file("bad.thy", "theory nat\n\ntheorem oops add(0,x) = x := Simp [] .\n");
  try {
    load_corpus(tmp.dir());
    FAIL("expected a parse failure");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find(bad + ":3:") == 0);
    CHECK(msg.size() > bad.size() + 3);  // some explanation follows the position
  }

  CHECK_THROWS_AS(load_corpus((tmp.path / "does_not_exist").string()), std::exception);
}

TEST_CASE("builder_options carries the knowledge fields of the configuration") {
  SearchConfig cfg;
  cfg.ortho_radius = 7;
  cfg.abs_radius = 3;
  cfg.tactic_timeout = 0.125;
  cfg.use_orthogonalization = false;
  cfg.use_abstraction = false;

  KnowledgeBuilder::Options opt = builder_options(cfg);
  CHECK(opt.ortho_radius == 7);
  CHECK(opt.abs_radius == 3);
  CHECK(opt.tactic_timeout == doctest::Approx(0.125));
  CHECK_FALSE(opt.orthogonalize);
  CHECK_FALSE(opt.abstraction);
}

TEST_CASE("build_knowledge records the whole corpus") {
  std::vector<CorpusItem> items = mini_corpus();
  KnowledgeBuilder kb = build_knowledge(items, quick_config());

  CHECK(kb.theorems().size() == 8);
  CHECK(kb.tactics().size() > 8);  // THENL branches split into several pairs
  CHECK(kb.current_theory() == "nat");
  REQUIRE(kb.theories().size() == 1);
  CHECK(kb.theories()[0] == "nat");
  CHECK(kb.warnings().empty());
}

TEST_CASE("reprove searches every theorem against strictly earlier knowledge") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig cfg = quick_config();
  std::ostringstream log;
  RunReport rep = reprove(items, cfg, {}, &log);

  REQUIRE(rep.total == 8);
  CHECK(rep.attempted == 8);
  REQUIRE(rep.records.size() == 8);

  // The first theorem faces an empty database: nothing can be predicted.
  CHECK(rep.records[0].status == "saturated");
  CHECK(rep.records[0].script.empty());
  // The second is closed by the tactic recorded for the first.
  CHECK(rep.records[1].status == "proved");
  CHECK(rep.solved >= 4);

  int solved = 0;
  for (const TheoremOutcome& r : rep.records) {
    CHECK(r.theory == "nat");
    if (r.status == "proved") {
      ++solved;
      CHECK(r.proof_units == (int)tactic_unit_count(parse_tactic(r.script)));
    } else {
      CHECK(r.script.empty());
      CHECK(r.proof_units == 0);
    }
  }
  CHECK(solved == rep.solved);

  // One log line per theorem.
  std::string logged = log.str();
  CHECK(std::count(logged.begin(), logged.end(), '\n') == 8);
  CHECK(logged.find("nat.add_0_l: saturated") != std::string::npos);

  // Chronology oracle: replaying the corpus by hand and searching theorem i
  // against the knowledge recorded so far must reproduce each record, and
  // the preselected slice may never reach an object recorded at index >= i.
  KnowledgeBuilder kb(builder_options(cfg));
  int ti = 0;
  for (const CorpusItem& ci : items) {
    switch (ci.item.kind) {
      case ScriptItem::Kind::Theory: kb.begin_theory(ci.item.name); break;
      case ScriptItem::Kind::Alias: kb.define_alias(ci.item.name, ci.item.tactic); break;
      case ScriptItem::Kind::Theorem: {
        int pairs_before = (int)kb.tactics().size();
        int thms_before = (int)kb.theorems().size();
        PreselectedContext ctx =
            preselect(ci.item.statement, kb.view(), cfg.preselect_n);
        CHECK(ctx.max_pair_seq() < pairs_before);
        CHECK(ctx.max_theorem_index() < thms_before);

        SearchResult r = search(ci.item.statement, kb.view(), cfg);
        CHECK(rep.records[ti].index == ti);
        CHECK(rep.records[ti].name == ci.item.name);
        CHECK(rep.records[ti].status == status_name(r.status));
        CHECK(rep.records[ti].script == r.script);

        kb.record_theorem(ci.item.name, ci.item.statement, ci.item.tactic);
        ++ti;
        break;
      }
    }
  }
  CHECK(ti == 8);
}

TEST_CASE("reprove records skipped theorems without searching them") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig cfg = quick_config();

  RunReport full = reprove(items, cfg);
  RunReport part = reprove(items, cfg, [](int i) { return i % 2 == 1; });

  REQUIRE(part.records.size() == 8);
  CHECK(part.total == 8);
  CHECK(part.attempted == 4);
  CHECK(part.solved <= 4);
  for (int i = 0; i < 8; ++i) {
    if (i % 2 == 0) {
      CHECK(part.records[i].status == "skipped");
      CHECK(part.records[i].script.empty());
      CHECK(part.records[i].wall_ms == 0.0);
      CHECK(part.records[i].steps == 0);
    } else {
      // The human proof is recorded whether or not a theorem is attempted,
      // so an attempted index sees the same knowledge as in the full run.
      CHECK(part.records[i].status == full.records[i].status);
      CHECK(part.records[i].script == full.records[i].script);
    }
  }
}

TEST_CASE("identical inputs give identical reports apart from wall time") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig cfg = quick_config();

  RunReport a = reprove(items, cfg);
  RunReport b = reprove(items, cfg);

  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.total == b.total);
  CHECK(a.attempted == b.attempted);
  CHECK(a.solved == b.solved);
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].index == b.records[i].index);
    CHECK(a.records[i].theory == b.records[i].theory);
    CHECK(a.records[i].name == b.records[i].name);
    CHECK(a.records[i].status == b.records[i].status);
    CHECK(a.records[i].script == b.records[i].script);
    CHECK(a.records[i].proof_units == b.records[i].proof_units);
    CHECK(a.records[i].steps == b.records[i].steps);
  }
}

TEST_CASE("write_report emits the report, the solve curve and the length histogram") {
  RunReport rep;
  rep.config.c_policy = 0.4;
  rep.config.use_auto = false;
  auto rec = [](int index, std::string name, std::string status, std::string script,
                double wall_ms, int units, long steps) {
    TheoremOutcome r;
    r.index = index;
    r.theory = "nat";
    r.name = std::move(name);
    r.status = std::move(status);
    r.script = std::move(script);
    r.wall_ms = wall_ms;
    r.proof_units = units;
    r.steps = steps;
    return r;
  };
  rep.records.push_back(rec(0, "a", "proved", "Simp []", 120.0, 2, 9));
  rep.records.push_back(rec(1, "b", "proved", "Refl", 30.0, 1, 3));
  rep.records.push_back(rec(2, "c", "saturated", "", 55.0, 0, 40));
  rep.records.push_back(rec(3, "d", "proved", "Sym THEN Refl", 75.0, 2, 5));
  rep.records.push_back(rec(4, "e", "skipped", "", 0.0, 0, 0));
  rep.total = 5;
  rep.attempted = 4;
  rep.solved = 3;

  TempDir tmp;
  write_report(rep, tmp.dir());

  json top = json::parse(slurp(tmp.path / "report.json"));
  CHECK(top["total"] == 5);
  CHECK(top["attempted"] == 4);
  CHECK(top["solved"] == 3);
  CHECK(top["solve_rate"] == 0.75);
  CHECK(top["config"]["c_policy"] == 0.4);
  CHECK(top["config"]["use_auto"] == false);
  REQUIRE(top["theorems"].size() == 5);
  CHECK(top["theorems"][0]["name"] == "a");
  CHECK(top["theorems"][0]["status"] == "proved");
  CHECK(top["theorems"][0]["script"] == "Simp []");
  CHECK(top["theorems"][0]["proof_units"] == 2);
  CHECK(top["theorems"][0]["steps"] == 9);
  CHECK(top["theorems"][4]["status"] == "skipped");

  // The curve lists cumulative solves by per-theorem seconds, sorted.
  CHECK(slurp(tmp.path / "curve.csv") == "seconds,solved\n0.03,1\n0.075,2\n0.12,3\n");
  // The histogram counts proved theorems by proof unit count.
  CHECK(slurp(tmp.path / "histogram.csv") == "units,count\n1,1\n2,2\n");
}

TEST_CASE("empty report writes a zero solve rate") {
  RunReport rep;
  TempDir tmp;
  write_report(rep, tmp.dir());
  json top = json::parse(slurp(tmp.path / "report.json"));
  CHECK(top["solve_rate"] == 0.0);
  CHECK(top["theorems"].empty());
  CHECK(slurp(tmp.path / "curve.csv") == "seconds,solved\n");
  CHECK(slurp(tmp.path / "histogram.csv") == "units,count\n");
}

TEST_CASE("apply_config_value sets every field by name") {
  SearchConfig cfg;
  CHECK(apply_config_value(cfg, "c_policy", "0.25"));
  CHECK(apply_config_value(cfg, "c_exploration", "1.25"));
  CHECK(apply_config_value(cfg, "eval_radius", "7"));
  CHECK(apply_config_value(cfg, "tactic_timeout", "0.2"));
  CHECK(apply_config_value(cfg, "auto_timeout", "0.3"));
  CHECK(apply_config_value(cfg, "auto_premises", "12"));
  CHECK(apply_config_value(cfg, "global_timeout", "42"));
  CHECK(apply_config_value(cfg, "preselect_n", "123"));
  CHECK(apply_config_value(cfg, "ortho_radius", "9"));
  CHECK(apply_config_value(cfg, "abs_radius", "5"));
  CHECK(apply_config_value(cfg, "use_auto", "false"));
  CHECK(apply_config_value(cfg, "use_evaluation", "0"));
  CHECK(apply_config_value(cfg, "use_abstraction", "true"));
  CHECK(apply_config_value(cfg, "use_orthogonalization", "1"));
  CHECK(apply_config_value(cfg, "uniform_policy", "true"));

  CHECK(cfg.c_policy == 0.25);
  CHECK(cfg.c_exploration == 1.25);
  CHECK(cfg.eval_radius == 7);
  CHECK(cfg.tactic_timeout == 0.2);
  CHECK(cfg.auto_timeout == 0.3);
  CHECK(cfg.auto_premises == 12);
  CHECK(cfg.global_timeout == 42.0);
  CHECK(cfg.preselect_n == 123);
  CHECK(cfg.ortho_radius == 9);
  CHECK(cfg.abs_radius == 5);
  CHECK_FALSE(cfg.use_auto);
  CHECK_FALSE(cfg.use_evaluation);
  CHECK(cfg.use_abstraction);
  CHECK(cfg.use_orthogonalization);
  CHECK(cfg.uniform_policy);

  CHECK_FALSE(apply_config_value(cfg, "no_such_field", "1"));
  CHECK_THROWS_AS(apply_config_value(cfg, "c_policy", "abc"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_value(cfg, "preselect_n", "many"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_value(cfg, "use_auto", "maybe"), std::runtime_error);
}

TEST_CASE("load_config_file strips comments and whitespace") {
  TempDir tmp;
  std::string path = tmp.file("run.cfg",
                              "# overrides for a quick run\n"
                              "c_policy = 0.25\n"
                              "\n"
                              "use_auto=false   # switched off here\n"
                              "  preselect_n =  64  \n");
  SearchConfig base;
  base.global_timeout = 9.0;
  SearchConfig cfg = load_config_file(path, base);
  CHECK(cfg.c_policy == 0.25);
  CHECK_FALSE(cfg.use_auto);
  CHECK(cfg.preselect_n == 64);
  CHECK(cfg.global_timeout == 9.0);  // untouched fields come from the base

  std::string noeq = tmp.file("noeq.cfg", "# fine\nc_policy 0.5\n");
  try {
    load_config_file(noeq, base);
    FAIL("expected a config failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(noeq + ":2:") == 0);
  }

  std::string unknown = tmp.file("unknown.cfg", "no_such_field = 1\n");
  CHECK_THROWS_WITH_AS(load_config_file(unknown, base),
                       doctest::Contains("unknown key no_such_field"), std::runtime_error);
  CHECK_THROWS_AS(load_config_file((tmp.path / "missing.cfg").string(), base),
                  std::runtime_error);
}

TEST_CASE("tune evaluates a cartesian grid on the training slice") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig base = quick_config();
  base.global_timeout = 5.0;

  TempDir tmp;
  std::string grid =
      tmp.file("grid.json", R"({"c_policy": [0.3, 0.6], "use_auto": [true, false]})");
  TuneResult result = tune(items, base, grid);

  // Two values per field, fields in name order when cells are laid out.
  REQUIRE(result.cells.size() == 4);
  CHECK(result.cells[0].assignment ==
        std::map<std::string, std::string>{{"c_policy", "0.3"}, {"use_auto", "true"}});
  CHECK(result.cells[1].assignment ==
        std::map<std::string, std::string>{{"c_policy", "0.3"}, {"use_auto", "false"}});
  CHECK(result.cells[2].assignment ==
        std::map<std::string, std::string>{{"c_policy", "0.6"}, {"use_auto", "true"}});
  CHECK(result.cells[3].assignment ==
        std::map<std::string, std::string>{{"c_policy", "0.6"}, {"use_auto", "false"}});

  // The slice takes every third theorem of the first half: indices 0 and 3
  // of the eight-theorem corpus.
  for (const TuneCell& c : result.cells) {
    CHECK(c.attempted == 2);
    CHECK(c.solved >= 0);
    CHECK(c.solved <= c.attempted);
  }
  REQUIRE(result.best >= 0);
  REQUIRE(result.best < 4);
  for (int i = 0; i < (int)result.cells.size(); ++i) {
    CHECK(result.cells[i].solved <= result.cells[result.best].solved);
    if (i < result.best)  // ties keep the first listed cell
      CHECK(result.cells[i].solved < result.cells[result.best].solved);
  }

  write_tune(result, tmp.dir());
  json out = json::parse(slurp(tmp.path / "tune.json"));
  CHECK(out["best"] == result.best);
  REQUIRE(out["cells"].size() == 4);
  CHECK(out["cells"][0]["assignment"]["c_policy"] == "0.3");
  CHECK(out["cells"][0]["attempted"] == 2);
}

TEST_CASE("tune rejects malformed grids") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig base = quick_config();
  TempDir tmp;

  CHECK_THROWS_WITH_AS(tune(items, base, tmp.file("a.json", R"({"no_such_field": [1]})")),
                       doctest::Contains("unknown field"), std::runtime_error);
  CHECK_THROWS_WITH_AS(tune(items, base, tmp.file("b.json", R"({"c_policy": 0.3})")),
                       doctest::Contains("non-empty array"), std::runtime_error);
  CHECK_THROWS_WITH_AS(tune(items, base, tmp.file("c.json", R"({"c_policy": []})")),
                       doctest::Contains("non-empty array"), std::runtime_error);
  CHECK_THROWS_WITH_AS(tune(items, base, tmp.file("d.json", R"([0.3, 0.6])")),
                       doctest::Contains("JSON object"), std::runtime_error);
  CHECK_THROWS_AS(tune(items, base, (tmp.path / "missing.json").string()),
                  std::runtime_error);
  CHECK_THROWS_AS(tune(items, base, tmp.file("e.json", "not json")), std::exception);
}

TEST_CASE("prove_goal searches against the fully built corpus") {
  std::vector<CorpusItem> items = mini_corpus();
  SearchConfig cfg = quick_config();

  Goal provable = parse_goal("|- add(S(0),z) = S(z)");
  ProveOutcome out = prove_goal(items, provable, cfg);
  REQUIRE(out.status == SearchStatusKind::Proved);
  REQUIRE_FALSE(out.script.empty());
  CHECK(out.stats.steps > 0);

  KnowledgeBuilder kb = build_knowledge(items, cfg);
  CHECK(replays(out.script, provable, kb.env()));

  ProveOutcome shorter = prove_goal(items, provable, cfg, true);
  REQUIRE(shorter.status == SearchStatusKind::Proved);
  CHECK(tactic_unit_count(parse_tactic(shorter.script)) <=
        tactic_unit_count(parse_tactic(out.script)));
  CHECK(replays(shorter.script, provable, kb.env()));

  SearchConfig tight = cfg;
  tight.global_timeout = 1.5;
  ProveOutcome missed = prove_goal(items, parse_goal("|- add(x,x) = mul(x,x)"), tight);
  CHECK(missed.status != SearchStatusKind::Proved);
  CHECK(missed.script.empty());
}
