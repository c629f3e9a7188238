#include <iostream>

#include <CLI11.hpp>

#include "tacsearch/harness.hpp"
#include "tacsearch/proofout.hpp"

using namespace tacs;

int main(int argc, char** argv) {
  CLI::App app{"tactic proof search over an equational corpus"};
  app.require_subcommand(1);

  std::string corpus, out_dir = "out", config_file, grid_file, goal_text;
  double budget = -1.0;
  bool baseline = false, research_min = false, verbose = false;

  auto add_common = [&](CLI::App* cmd, bool with_corpus = true) {
    if (with_corpus) cmd->add_option("corpus", corpus, "corpus directory")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--config", config_file, "key=value configuration file");
    cmd->add_option("--budget", budget, "per-search time limit in seconds");
    cmd->add_flag("--baseline", baseline, "disable all learning features");
    cmd->add_flag("-v,--verbose", verbose, "progress on stderr");
  };

  CLI::App* cmd_build = app.add_subcommand("build", "record the corpus into a knowledge base");
  add_common(cmd_build);
  CLI::App* cmd_reprove =
      app.add_subcommand("reprove", "chronologically re-prove every corpus theorem");
  add_common(cmd_reprove);
  CLI::App* cmd_tune = app.add_subcommand("tune", "grid-evaluate configurations on a slice");
  add_common(cmd_tune);
  cmd_tune->add_option("--grid", grid_file, "JSON grid of SearchConfig fields")->required();
  CLI::App* cmd_prove = app.add_subcommand("prove", "search a proof for one goal");
  add_common(cmd_prove);
  cmd_prove->add_option("goal", goal_text, "goal text, e.g. \"|- add(x,0) = x\"")->required();
  cmd_prove->add_flag("--research-min", research_min,
                      "second low-policy search for a shorter proof");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    SearchConfig cfg;
    if (!config_file.empty()) cfg = load_config_file(config_file, cfg);
    if (budget >= 0) cfg.global_timeout = budget;
    if (baseline) cfg = baseline_config(cfg);
    std::ostream* log = verbose ? &std::cerr : nullptr;

    std::vector<CorpusItem> items = load_corpus(corpus);

    if (*cmd_build) {
      KnowledgeBuilder kb = build_knowledge(items, cfg);
      save_knowledge(out_dir + "/kb", kb);
      for (const std::string& w : kb.warnings()) std::cerr << "warning: " << w << "\n";
      std::cout << "recorded " << kb.tactics().size() << " pairs, " << kb.theorems().size()
                << " theorems, " << kb.goal_lists().size() << " goal lists -> " << out_dir
                << "/kb\n";
      return 0;
    }
    if (*cmd_reprove) {
      RunReport rep = reprove(items, cfg, {}, log);
      write_report(rep, out_dir);
      std::cout << "solved " << rep.solved << "/" << rep.attempted << " -> " << out_dir
                << "/report.json\n";
      return 0;
    }
    if (*cmd_tune) {
      TuneResult result = tune(items, cfg, grid_file, log);
      write_tune(result, out_dir);
      for (size_t i = 0; i < result.cells.size(); ++i) {
        const TuneCell& c = result.cells[i];
        std::cout << (static_cast<int>(i) == result.best ? "* " : "  ");
        for (const auto& [k, v] : c.assignment) std::cout << k << "=" << v << " ";
        std::cout << "solved " << c.solved << "/" << c.attempted << "\n";
      }
      return 0;
    }
    if (*cmd_prove) {
      Goal goal = parse_goal(goal_text);
      ProveOutcome res = prove_goal(items, goal, cfg, research_min);
      if (res.status == SearchStatusKind::Proved) {
        std::cout << res.script << "\n";
        return 0;
      }
      std::cout << status_name(res.status) << "\n";
      return 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
