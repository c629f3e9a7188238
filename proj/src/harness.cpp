#include "tacsearch/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tacsearch/proofout.hpp"

namespace tacs {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<CorpusItem> load_corpus(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".thy")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end(),
            [](const std::string& a, const std::string& b) {
              return fs::path(a).filename().string() < fs::path(b).filename().string();
            });

  std::vector<CorpusItem> out;
  for (const std::string& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + f);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      for (auto& item : parse_script(buf.str())) out.push_back({f, std::move(item)});
    } catch (const ParseError& e) {
      throw std::runtime_error(f + ":" + std::to_string(e.line) + ": " + e.what());
    }
  }
  return out;
}

KnowledgeBuilder::Options builder_options(const SearchConfig& cfg) {
  KnowledgeBuilder::Options opt;
  opt.ortho_radius = cfg.ortho_radius;
  opt.abs_radius = cfg.abs_radius;
  opt.tactic_timeout = cfg.tactic_timeout;
  opt.orthogonalize = cfg.use_orthogonalization;
  opt.abstraction = cfg.use_abstraction;
  return opt;
}

KnowledgeBuilder build_knowledge(const std::vector<CorpusItem>& items, const SearchConfig& cfg) {
  KnowledgeBuilder kb(builder_options(cfg));
  for (const CorpusItem& ci : items) {
    switch (ci.item.kind) {
      case ScriptItem::Kind::Theory: kb.begin_theory(ci.item.name); break;
      case ScriptItem::Kind::Alias: kb.define_alias(ci.item.name, ci.item.tactic); break;
      case ScriptItem::Kind::Theorem:
        kb.record_theorem(ci.item.name, ci.item.statement, ci.item.tactic);
        break;
    }
  }
  return kb;
}

RunReport reprove(const std::vector<CorpusItem>& items, const SearchConfig& cfg,
                  const std::function<bool(int)>& attempt, std::ostream* log) {
  KnowledgeBuilder kb(builder_options(cfg));
  RunReport rep;
  rep.config = cfg;
  int ti = 0;
  for (const CorpusItem& ci : items) {
    switch (ci.item.kind) {
      case ScriptItem::Kind::Theory: kb.begin_theory(ci.item.name); break;
      case ScriptItem::Kind::Alias: kb.define_alias(ci.item.name, ci.item.tactic); break;
      case ScriptItem::Kind::Theorem: {
        TheoremOutcome rec;
        rec.index = ti;
        rec.theory = kb.current_theory();
        rec.name = ci.item.name;
        if (!attempt || attempt(ti)) {
          ++rep.attempted;
          SearchResult r = search(ci.item.statement, kb.view(), cfg);
          rec.status = status_name(r.status);
          rec.wall_ms = r.stats.wall_ms;
          rec.steps = r.stats.steps;
          if (r.status == SearchStatusKind::Proved) {
            rec.script = r.script;
            rec.proof_units = static_cast<int>(tactic_unit_count(parse_tactic(r.script)));
            ++rep.solved;
          }
        } else {
          rec.status = "skipped";
        }
        if (log)
          (*log) << rec.theory << "." << rec.name << ": " << rec.status
                 << (rec.script.empty() ? "" : "  " + rec.script) << "\n";
        rep.records.push_back(std::move(rec));
        ++rep.total;
        kb.record_theorem(ci.item.name, ci.item.statement, ci.item.tactic);
        ++ti;
        break;
      }
    }
  }
  return rep;
}

namespace {

json config_json(const SearchConfig& c) {
  return {{"c_policy", c.c_policy},
          {"c_exploration", c.c_exploration},
          {"eval_radius", c.eval_radius},
          {"tactic_timeout", c.tactic_timeout},
          {"auto_timeout", c.auto_timeout},
          {"auto_premises", c.auto_premises},
          {"global_timeout", c.global_timeout},
          {"preselect_n", c.preselect_n},
          {"ortho_radius", c.ortho_radius},
          {"abs_radius", c.abs_radius},
          {"use_auto", c.use_auto},
          {"use_evaluation", c.use_evaluation},
          {"use_abstraction", c.use_abstraction},
          {"use_orthogonalization", c.use_orthogonalization},
          {"uniform_policy", c.uniform_policy}};
}

}  // namespace

void write_report(const RunReport& rep, const std::string& out_dir) {
  fs::create_directories(out_dir);

  json records = json::array();
  for (const TheoremOutcome& r : rep.records)
    records.push_back({{"index", r.index},
                       {"theory", r.theory},
                       {"name", r.name},
                       {"status", r.status},
                       {"script", r.script},
                       {"wall_ms", r.wall_ms},
                       {"proof_units", r.proof_units},
                       {"steps", r.steps}});
  json top = {{"config", config_json(rep.config)},
              {"total", rep.total},
              {"attempted", rep.attempted},
              {"solved", rep.solved},
              {"solve_rate", rep.attempted ? double(rep.solved) / rep.attempted : 0.0},
              {"theorems", records}};
  std::ofstream(out_dir + "/report.json") << top.dump(2) << "\n";

  // Cumulative solves against per-theorem search time.
  std::vector<double> times;
  for (const TheoremOutcome& r : rep.records)
    if (r.status == "proved") times.push_back(r.wall_ms / 1000.0);
  std::sort(times.begin(), times.end());
  std::ofstream curve(out_dir + "/curve.csv");
  curve << "seconds,solved\n";
  for (size_t i = 0; i < times.size(); ++i) curve << times[i] << "," << (i + 1) << "\n";

  std::map<int, int> hist;
  for (const TheoremOutcome& r : rep.records)
    if (r.status == "proved") ++hist[r.proof_units];
  std::ofstream histo(out_dir + "/histogram.csv");
  histo << "units,count\n";
  for (const auto& [units, count] : hist) histo << units << "," << count << "\n";
}

bool apply_config_value(SearchConfig& cfg, const std::string& key, const std::string& value) {
  auto as_bool = [&](bool& dst) {
    if (value == "true" || value == "1") dst = true;
    else if (value == "false" || value == "0") dst = false;
    else throw std::runtime_error("bad boolean '" + value + "' for " + key);
  };
  try {
    if (key == "c_policy") cfg.c_policy = std::stod(value);
    else if (key == "c_exploration") cfg.c_exploration = std::stod(value);
    else if (key == "eval_radius") cfg.eval_radius = std::stoul(value);
    else if (key == "tactic_timeout") cfg.tactic_timeout = std::stod(value);
    else if (key == "auto_timeout") cfg.auto_timeout = std::stod(value);
    else if (key == "auto_premises") cfg.auto_premises = std::stoul(value);
    else if (key == "global_timeout") cfg.global_timeout = std::stod(value);
    else if (key == "preselect_n") cfg.preselect_n = std::stoul(value);
    else if (key == "ortho_radius") cfg.ortho_radius = std::stoul(value);
    else if (key == "abs_radius") cfg.abs_radius = std::stoul(value);
    else if (key == "use_auto") as_bool(cfg.use_auto);
    else if (key == "use_evaluation") as_bool(cfg.use_evaluation);
    else if (key == "use_abstraction") as_bool(cfg.use_abstraction);
    else if (key == "use_orthogonalization") as_bool(cfg.use_orthogonalization);
    else if (key == "uniform_policy") as_bool(cfg.uniform_policy);
    else return false;
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("bad value '" + value + "' for " + key);
  }
  return true;
}

SearchConfig load_config_file(const std::string& path, SearchConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    auto strip = [&](std::string& s) {
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    };
    strip(key);
    strip(value);
    if (!apply_config_value(base, key, value))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key " + key);
  }
  return base;
}

TuneResult tune(const std::vector<CorpusItem>& items, const SearchConfig& base,
                const std::string& grid_path, std::ostream* log) {
  std::ifstream in(grid_path);
  if (!in) throw std::runtime_error("cannot read grid " + grid_path);
  json grid = json::parse(in);
  if (!grid.is_object()) throw std::runtime_error("grid must be a JSON object of arrays");

  // Values normalized to strings; bool/number accepted.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty())
      throw std::runtime_error("grid entry " + key + " must be a non-empty array");
    std::vector<std::string> vs;
    for (const auto& v : values) {
      if (v.is_boolean()) vs.push_back(v.get<bool>() ? "true" : "false");
      else if (v.is_string()) vs.push_back(v.get<std::string>());
      else vs.push_back(v.dump());
    }
    SearchConfig probe = base;  // reject unknown fields and bad values upfront
    for (const auto& v : vs)
      if (!apply_config_value(probe, key, v))
        throw std::runtime_error("grid references unknown field " + key);
    axes.emplace_back(key, std::move(vs));
  }

  std::vector<std::map<std::string, std::string>> cells{{}};
  for (const auto& [key, vs] : axes) {
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& cell : cells)
      for (const auto& v : vs) {
        auto c = cell;
        c[key] = v;
        next.push_back(std::move(c));
      }
    cells = std::move(next);
  }

  int theorem_count = 0;
  for (const auto& ci : items)
    if (ci.item.kind == ScriptItem::Kind::Theorem) ++theorem_count;
  int half = theorem_count / 2;
  auto slice = [half](int i) { return i < half && i % 3 == 0; };

  TuneResult result;
  result.cells.resize(cells.size());
  std::vector<std::future<std::pair<int, int>>> futures;
  for (const auto& cell : cells) {
    SearchConfig cfg = base;
    for (const auto& [k, v] : cell) apply_config_value(cfg, k, v);
    futures.push_back(std::async(std::launch::async, [&items, cfg, slice] {
      RunReport rep = reprove(items, cfg, slice);
      return std::make_pair(rep.solved, rep.attempted);
    }));
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    auto [solved, attempted] = futures[i].get();
    result.cells[i] = {cells[i], solved, attempted};
    if (result.best < 0 || solved > result.cells[result.best].solved)
      result.best = static_cast<int>(i);
    if (log) {
      (*log) << "cell " << i << ":";
      for (const auto& [k, v] : cells[i]) (*log) << " " << k << "=" << v;
      (*log) << " -> " << solved << "/" << attempted << "\n";
    }
  }
  return result;
}

void write_tune(const TuneResult& result, const std::string& out_dir) {
  fs::create_directories(out_dir);
  json cells = json::array();
  for (const TuneCell& c : result.cells)
    cells.push_back(
        {{"assignment", c.assignment}, {"solved", c.solved}, {"attempted", c.attempted}});
  std::ofstream(out_dir + "/tune.json")
      << json{{"cells", cells}, {"best", result.best}}.dump(2) << "\n";
}

ProveOutcome prove_goal(const std::vector<CorpusItem>& items, const Goal& goal,
                        const SearchConfig& cfg, bool research_minimize) {
  KnowledgeBuilder kb = build_knowledge(items, cfg);
  SearchResult r = search(goal, kb.view(), cfg);
  ProveOutcome out{r.status, r.script, r.stats};
  if (research_minimize && r.status == SearchStatusKind::Proved) {
    SearchConfig low = cfg;
    low.c_policy = 0.05;  // favor depth: re-search for a shorter proof
    SearchResult r2 = search(goal, kb.view(), low);
    if (r2.status == SearchStatusKind::Proved &&
        tactic_unit_count(parse_tactic(r2.script)) < tactic_unit_count(parse_tactic(r.script)))
      out.script = r2.script;
  }
  return out;
}

}  // namespace tacs
