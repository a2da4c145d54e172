#include "pcl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "pcl/countermodel.hpp"
#include "pcl/json_io.hpp"
#include "pcl/search.hpp"
#include "pcl/semantics.hpp"

namespace pcl::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string logic = "PCL";
  std::string formula;
  std::string file;
  std::string model_file;
  std::string world;
  std::size_t max_nodes = Budget{}.max_nodes;
  std::size_t max_labels = Budget{}.max_labels;
  long timeout_ms = 0;
  std::size_t max_worlds = 3;
  std::size_t jobs = 1;
  std::string format = "text";
  bool verbose = false;

  Budget budget() const {
    Budget b;
    b.max_nodes = max_nodes;
    b.max_labels = max_labels;
    if (timeout_ms > 0) b.wall_clock = std::chrono::milliseconds(timeout_ms);
    return b;
  }
  bool json() const { return format == "json"; }
};

Logic resolve_logic(const std::string& name) {
  auto l = logic_from_name(name);
  if (!l) throw UsageError("unknown logic '" + name + "'");
  return *l;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula read_formula(const RunConfig& cfg) {
  if (!cfg.formula.empty() && !cfg.file.empty())
    throw UsageError("give either a formula or --file, not both");
  std::string text = cfg.file.empty() ? cfg.formula : slurp(cfg.file);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("no formula given");
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("parse error: ") + e.what());
  }
}

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::exception& e) {
    throw UsageError("malformed JSON in '" + path + "': " + e.what());
  }
}

// Semantic confirmation of a refutation.  Returns the model JSON when the
// leaf yields a countermodel of f in the logic's frame class.
struct Confirmation {
  bool ok = false;
  std::string problem;
  Json model;
};

Confirmation confirm(const SearchOutcome& o, const Formula& f, const Logic& logic) {
  Confirmation c;
  if (!o.leaf) {
    c.problem = "no saturated branch";
    return c;
  }
  try {
    const bool absolute = logic.normalized().a;
    ExtractedModel em = absolute ? candidate_model(*o.leaf, logic) : extract_model(*o.leaf, logic);
    if (auto v = check_frame(em.model, logic); !v.empty()) {
      c.problem = "frame condition " + v.front().condition + " fails at " +
                  em.model.world_name(v.front().world);
      return c;
    }
    if (forces(em.model, em.root, f)) {
      c.problem = "formula holds at the root world";
      return c;
    }
    if (!absolute) {
      auto report = model_invariant_report(em.model, *o.leaf, em.realization);
      if (!report.empty()) {
        c.problem = report.front().message;
        return c;
      }
    }
    c.ok = true;
    c.model = model_to_json(em.model, em.root);
  } catch (const std::exception& e) {
    c.problem = e.what();
  }
  return c;
}

Json stats_json(const SearchStats& s) {
  return Json{{"nodes", s.nodes},
              {"labels", s.max_labels},
              {"steps", s.steps},
              {"elapsed_ms", static_cast<double>(s.elapsed.count()) / 1000.0}};
}

std::string set_text(const Json& a) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + a[i].get<std::string>();
  return s + "}";
}

void model_text(const Json& m, std::ostream& out) {
  out << "worlds:";
  for (const auto& w : m.at("worlds")) out << ' ' << w.get<std::string>();
  out << '\n';
  for (const auto& [w, list] : m.at("neighbourhoods").items()) {
    out << "  N(" << w << ") = {";
    for (std::size_t i = 0; i < list.size(); ++i) out << (i ? ", " : "") << set_text(list[i]);
    out << "}\n";
  }
  for (const auto& [p, a] : m.at("valuation").items()) out << "  [" << p << "] = " << set_text(a) << '\n';
  if (m.contains("root")) out << "root: " << m.at("root").get<std::string>() << '\n';
}

// Text reports are rendered from the JSON report.
void report_text(const Json& r, bool verbose, std::ostream& out) {
  out << r.at("verdict").get<std::string>() << " in " << r.at("logic").get<std::string>() << ": "
      << r.at("formula").get<std::string>() << '\n';
  if (r.contains("reason")) out << "reason: " << r.at("reason").get<std::string>() << '\n';
  if (r.contains("stats")) {
    const Json& s = r.at("stats");
    out << "nodes " << s.at("nodes") << ", labels " << s.at("labels") << ", "
        << s.at("elapsed_ms").get<double>() << " ms\n";
  }
  if (r.contains("height")) out << "derivation height " << r.at("height") << '\n';
  if (r.contains("model")) model_text(r.at("model"), out);
  if (r.contains("problem")) out << "unconfirmed: " << r.at("problem").get<std::string>() << '\n';
  if (verbose) {
    if (r.contains("proof")) out << r.at("proof").dump(2) << '\n';
    if (r.contains("branch")) out << r.at("branch").dump(2) << '\n';
    if (r.contains("trace"))
      for (const auto& e : r.at("trace")) out << e.dump() << '\n';
  }
}

int emit(const Json& r, const RunConfig& cfg, std::ostream& out) {
  if (cfg.json())
    out << r.dump(2) << '\n';
  else
    report_text(r, cfg.verbose, out);
  return r.at("exit").get<int>();
}

int cmd_prove(const RunConfig& cfg, std::ostream& out) {
  const Logic logic = resolve_logic(cfg.logic);
  const Formula f = read_formula(cfg);
  SearchOptions opts;
  opts.record_trace = cfg.verbose;
  const SearchOutcome o = prove(f, logic, cfg.budget(), opts);
  Json r{{"logic", logic.name()},
         {"formula", render_formula(f)},
         {"reason", o.reason},
         {"stats", stats_json(o.stats)}};
  int code = kExitUnknown;
  if (o.verdict == Verdict::Provable) {
    code = kExitProvable;
    r["proof"] = derivation_to_json(*o.derivation);
    r["height"] = o.derivation->height();
  } else if (o.verdict == Verdict::Refutable) {
    const Confirmation c = confirm(o, f, logic);
    if (c.ok) {
      code = kExitRefutable;
      if (logic.normalized().a)
        r["branch"] = branch_to_json(*o.leaf);
      else
        r["model"] = c.model;
    } else {
      r["problem"] = c.problem;
    }
  } else if (o.leaf) {
    r["branch"] = branch_to_json(*o.leaf);
  }
  r["verdict"] = code == kExitProvable ? "provable" : code == kExitRefutable ? "refutable" : "unknown";
  r["exit"] = code;
  if (cfg.verbose) {
    Json trace = Json::array();
    for (const auto& e : search_trace(o)) trace.push_back(trace_event_to_json(e));
    r["trace"] = std::move(trace);
  }
  return emit(r, cfg, out);
}

int cmd_check_model(const RunConfig& cfg, std::ostream& out) {
  const Formula f = read_formula(cfg);
  LoadedModel lm;
  try {
    lm = model_from_json(parse_json_file(cfg.model_file));
  } catch (const ModelError& e) {
    throw UsageError(std::string("invalid model: ") + e.what());
  } catch (const Json::exception& e) {
    throw UsageError(std::string("invalid model: ") + e.what());
  }
  World w = 0;
  if (!cfg.world.empty()) {
    auto found = lm.model.find_world(cfg.world);
    if (!found) throw UsageError("unknown world '" + cfg.world + "'");
    w = *found;
  } else if (lm.root) {
    w = *lm.root;
  } else if (lm.model.size() == 0) {
    throw UsageError("model has no worlds");
  }
  Json r{{"formula", render_formula(f)}, {"world", lm.model.world_name(w)}};
  const bool holds = forces(lm.model, w, f);
  r["holds"] = holds;
  bool frame_ok = true;
  if (!cfg.logic.empty()) {
    const Logic logic = resolve_logic(cfg.logic);
    r["logic"] = logic.name();
    Json violations = Json::array();
    for (const auto& v : check_frame(lm.model, logic))
      violations.push_back(Json{{"condition", v.condition},
                                {"world", lm.model.world_name(v.world)},
                                {"detail", v.detail}});
    frame_ok = violations.empty();
    r["frame_violations"] = violations;
  }
  const int code = holds && frame_ok ? 0 : 1;
  if (cfg.json()) {
    r["exit"] = code;
    out << r.dump(2) << '\n';
  } else {
    out << r.at("formula").get<std::string>() << (holds ? " holds" : " fails") << " at "
        << r.at("world").get<std::string>() << '\n';
    if (r.contains("frame_violations"))
      for (const auto& v : r.at("frame_violations"))
        out << "frame: " << v.at("condition").get<std::string>() << " fails at "
            << v.at("world").get<std::string>() << " (" << v.at("detail").get<std::string>() << ")\n";
  }
  return code;
}

// Exit 1 when a countermodel exists within the bound, 2 when none does.
int cmd_enumerate(const RunConfig& cfg, std::ostream& out) {
  const Logic logic = resolve_logic(cfg.logic);
  const Formula f = read_formula(cfg);
  if (cfg.max_worlds == 0 || cfg.max_worlds > 4) throw UsageError("--max-worlds must be 1..4");
  const auto cm = enumerate_countermodel(f, logic, cfg.max_worlds);
  Json r{{"logic", logic.name()}, {"formula", render_formula(f)}, {"max_worlds", cfg.max_worlds}};
  if (cm) {
    r["verdict"] = "refutable";
    r["model"] = model_to_json(cm->model, cm->world);
    r["exit"] = kExitRefutable;
  } else {
    r["verdict"] = "unknown";
    r["reason"] = "no countermodel with at most " + std::to_string(cfg.max_worlds) + " worlds";
    r["exit"] = kExitUnknown;
  }
  return emit(r, cfg, out);
}

int cmd_check_proof(const RunConfig& cfg, bool logic_given, std::ostream& out) {
  Derivation d;
  try {
    d = derivation_from_json(parse_json_file(cfg.file));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid proof object: ") + e.what());
  }
  const Logic logic = logic_given ? resolve_logic(cfg.logic) : d.logic;
  if (d.nodes.empty()) throw UsageError("proof object has no nodes");
  const CheckResult res = check_derivation(d, logic);
  Json r{{"logic", logic.name()}, {"root", render(d.root())}, {"nodes", d.nodes.size()},
         {"valid", res.valid()}};
  if (res.error) r["error"] = Json{{"node", res.error->node}, {"message", res.error->message}};
  const int code = res.valid() ? 0 : 1;
  if (cfg.json()) {
    r["exit"] = code;
    out << r.dump(2) << '\n';
  } else if (res.valid()) {
    out << "valid " << logic.name() << " derivation of " << render(d.root()) << " (" << d.nodes.size()
        << " nodes)\n";
  } else {
    out << "invalid at node " << res.error->node << ": " << res.error->message << '\n';
  }
  return code;
}

struct CorpusEntry {
  std::size_t line = 0;
  std::string name;
  std::string logic;
  std::string formula;
  std::string expected;
  std::string error;  // set for malformed lines
};

struct CorpusResult {
  bool pass = false;
  std::string got;
  std::string detail;
  double ms = 0;
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<CorpusEntry> read_corpus(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<CorpusEntry> entries;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    CorpusEntry e;
    e.line = n;
    const auto cols = split_tabs(line);
    if (cols.size() < 3 || cols.size() > 4) {
      e.error = "expected 3 or 4 tab-separated columns";
    } else {
      e.logic = cols[0];
      e.formula = cols[1];
      e.expected = cols[2];
      if (cols.size() == 4) e.name = cols[3];
      if (!logic_from_name(e.logic))
        e.error = "unknown logic '" + e.logic + "'";
      else if (e.expected != "provable" && e.expected != "refutable" && e.expected != "unknown-ok")
        e.error = "expected must be provable, refutable or unknown-ok";
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

CorpusResult run_entry(const CorpusEntry& e, const Budget& budget) {
  CorpusResult r;
  if (!e.error.empty()) {
    r.got = "malformed";
    r.detail = e.error;
    return r;
  }
  Formula f;
  try {
    f = parse_formula(e.formula);
  } catch (const ParseError& ex) {
    r.got = "malformed";
    r.detail = ex.what();
    return r;
  }
  const Logic logic = *logic_from_name(e.logic);
  const SearchOutcome o = prove(f, logic, budget);
  r.ms = static_cast<double>(o.stats.elapsed.count()) / 1000.0;
  r.got = std::string(verdict_name(o.verdict));
  if (o.verdict == Verdict::Provable) {
    const CheckResult c = check_derivation(*o.derivation, logic);
    if (!c.valid()) {
      r.detail = "derivation rejected: " + c.error->message;
      return r;
    }
  } else if (o.verdict == Verdict::Refutable) {
    const Confirmation c = confirm(o, f, logic);
    if (!c.ok) {
      r.detail = "countermodel not confirmed: " + c.problem;
      return r;
    }
    r.detail = "countermodel verified";
  } else {
    r.detail = o.reason;
  }
  if (e.expected == "unknown-ok")
    r.pass = o.verdict != Verdict::Refutable || r.detail == "countermodel verified";
  else
    r.pass = r.got == e.expected;
  return r;
}

int cmd_corpus(const RunConfig& cfg, std::ostream& out) {
  if (cfg.file.empty()) throw UsageError("corpus needs --file");
  const auto entries = read_corpus(cfg.file);
  std::vector<CorpusResult> results(entries.size());
  const Budget budget = cfg.budget();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) results[i] = run_entry(entries[i], budget);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, entries.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  Json rows = Json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const auto& r = results[i];
    if (!r.pass) ++failed;
    rows.push_back(Json{{"line", e.line},     {"name", e.name},     {"logic", e.logic},
                        {"formula", e.formula}, {"expected", e.expected}, {"got", r.got},
                        {"pass", r.pass},     {"ms", r.ms},         {"detail", r.detail}});
  }
  const int code = failed == 0 ? 0 : 1;
  if (cfg.json()) {
    out << Json{{"entries", rows}, {"failed", failed}, {"total", entries.size()}, {"exit", code}}.dump(2)
        << '\n';
    return code;
  }
  for (const auto& row : rows) {
    out << (row.at("pass").get<bool>() ? "PASS " : "FAIL ") << std::setw(5) << std::left
        << row.at("logic").get<std::string>() << ' ' << std::setw(10) << row.at("got").get<std::string>()
        << std::right << std::setw(10) << std::fixed << std::setprecision(1)
        << row.at("ms").get<double>() << " ms  ";
    const std::string name = row.at("name").get<std::string>();
    out << (name.empty() ? row.at("formula").get<std::string>() : name);
    if (!row.at("pass").get<bool>()) out << "  [line " << row.at("line") << ": " << row.at("detail").get<std::string>() << "]";
    out << '\n';
  }
  out << entries.size() - failed << '/' << entries.size() << " passed\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Labelled sequent prover for preferential conditional logics", "pclprove"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("-v,--verbose", cfg.verbose, "Print proof objects and branches");
  };
  auto add_formula = [&](CLI::App* sub) {
    sub->add_option("formula,--formula", cfg.formula, "Formula text");
    sub->add_option("--file", cfg.file, "File holding the formula");
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--max-nodes", cfg.max_nodes, "Derivation node budget");
    sub->add_option("--max-labels", cfg.max_labels, "Label budget per branch");
    sub->add_option("--timeout", cfg.timeout_ms, "Wall-clock budget in milliseconds");
  };

  auto* prove_cmd = app.add_subcommand("prove", "Decide a formula in a logic");
  prove_cmd->add_option("--logic", cfg.logic, "Logic name (PCL, PN, ..., PCA)");
  add_formula(prove_cmd);
  add_budget(prove_cmd);
  add_format(prove_cmd);

  auto* model_cmd = app.add_subcommand("check-model", "Evaluate a formula in a model JSON file");
  model_cmd->add_option("--model", cfg.model_file, "Model JSON file")->required();
  model_cmd->add_option("--world", cfg.world, "World name (default: the model's root)");
  model_cmd->add_option("--logic", cfg.logic, "Also check this logic's frame conditions");
  add_formula(model_cmd);
  add_format(model_cmd);

  auto* enum_cmd = app.add_subcommand("enumerate", "Search small models for a countermodel");
  enum_cmd->add_option("--logic", cfg.logic, "Logic name");
  enum_cmd->add_option("--max-worlds", cfg.max_worlds, "Largest model size (1..4)");
  add_formula(enum_cmd);
  add_format(enum_cmd);

  auto* proof_cmd = app.add_subcommand("check-proof", "Replay a proof JSON file");
  auto* proof_logic = proof_cmd->add_option("--logic", cfg.logic, "Override the logic in the file");
  proof_cmd->add_option("file", cfg.file, "Proof JSON file")->required();
  add_format(proof_cmd);

  auto* corpus_cmd = app.add_subcommand("corpus", "Run a TSV corpus of expected verdicts");
  corpus_cmd->add_option("file", cfg.file, "Corpus file")->required();
  corpus_cmd->add_option("-j,--jobs", cfg.jobs, "Parallel workers");
  add_budget(corpus_cmd);
  add_format(corpus_cmd);

  std::vector<const char*> argv{"pclprove"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pclprove: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*prove_cmd) return cmd_prove(cfg, out);
    if (*model_cmd) {
      if (model_cmd->count("--logic") == 0) cfg.logic.clear();
      return cmd_check_model(cfg, out);
    }
    if (*enum_cmd) return cmd_enumerate(cfg, out);
    if (*proof_cmd) return cmd_check_proof(cfg, proof_logic->count() > 0, out);
    if (*corpus_cmd) return cmd_corpus(cfg, out);
  } catch (const UsageError& e) {
    err << "pclprove: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pclprove: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pcl::cli
