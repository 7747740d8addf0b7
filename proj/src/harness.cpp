// SPDX-License-Identifier: MIT

#include "foldsynth/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace foldsynth {

namespace {

using ordered_json = nlohmann::ordered_json;

// Errors can be infinite; JSON has no infinity, so those become null.
ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

struct CollectSink final : StatsSink {
  std::vector<std::string> lines;
  void record(const GenerationStats& s) override { lines.push_back(stats_to_json(s)); }
};

}  // namespace

std::string stats_to_json(const GenerationStats& s) {
  ordered_json j;
  j["gen"] = s.gen;
  j["evals"] = s.evaluations;
  j["best_error"] = json_number(s.bestError);
  j["best_nodes"] = s.bestNodes;
  j["mean_error"] = json_number(s.meanFiniteError);
  j["finite"] = s.finiteCount;
  j["mean_nodes"] = s.meanNodes;
  j["distinct_errors"] = s.distinctErrorVectors;
  j["ac"] = s.acApplied;
  if (s.dc) {
    j["dc_pre"] = s.dc->preCull;
    j["dc_post_cull"] = s.dc->postCull;
    j["dc_post_cull_distinct"] = s.dc->postCullDistinct;
    j["dc_post_refill"] = s.dc->postRefill;
  }
  return j.dump();
}

std::vector<double> error_vector(const PatternInstance& pat, const std::vector<ExprPtr>& genes,
                                 const std::vector<IOCase>& cases, const EvalBudget& budget) {
  std::vector<double> errs;
  errs.reserve(cases.size());
  for (const IOCase& c : cases) {
    try {
      EvalState st;
      st.budget = budget;
      ValuePtr got = execute_pattern(pat, genes, c.inputs, st);
      errs.push_back(case_error(got, c.output));
    } catch (const EvalError&) {
      errs.push_back(kInfiniteError);
    }
  }
  return errs;
}

std::vector<RunRecord> run_schedule(const Problem& problem, const Registry& registry,
                                    const ScheduleConfig& cfg, std::ostream* log) {
  std::vector<PatternId> patterns;
  if (cfg.onlyPattern) {
    patterns.push_back(*cfg.onlyPattern);
  } else {
    patterns = applicable_patterns(problem.argTypes, problem.returnType);
  }

  std::vector<RunRecord> records;
  for (PatternId pid : patterns) {
    PatternInstance pat =
        instantiate_pattern(pid, problem.argTypes, problem.returnType, problem.unbound);
    bool solved = false;
    bool infeasible = false;
    for (int seed = 0; seed < cfg.seeds; ++seed) {
      Rng rng(run_stream_seed(cfg.masterSeed, problem.name, pattern_name(pid),
                              static_cast<std::uint64_t>(seed)));
      RunContext ctx(problem, pat, registry, cfg.run);
      AcdcRefiner refiner(ctx);
      CollectSink sink;
      auto t0 = std::chrono::steady_clock::now();
      EvolveResult r;
      try {
        r = evolve_pattern(ctx, rng, &refiner, &sink);
      } catch (const InfeasibleSlot& e) {
        if (log) *log << problem.name << " " << pattern_name(pid) << ": skipped (" << e.what()
                      << ")\n";
        infeasible = true;
        break;
      }
      auto t1 = std::chrono::steady_clock::now();

      RunRecord rec;
      rec.problem = problem.name;
      rec.pattern = pid;
      rec.seed = seed;
      rec.trainPerfect = r.trainPerfect;
      std::vector<double> testErrs =
          error_vector(pat, r.champion.genes, problem.test, cfg.run.budget);
      rec.testPerfect = true;
      for (double e : testErrs)
        if (e != 0.0) {
          rec.testPerfect = false;
          break;
        }
      rec.evaluations = r.evaluations;
      rec.generations = r.generations;
      rec.championNodes = r.champion.nodes;
      for (const SlotSpec& s : pat.slots) rec.slotNames.push_back(s.name);
      for (const ExprPtr& g : r.champion.genes) rec.championSlots.push_back(render_expr(g));
      rec.statsLines = std::move(sink.lines);
      rec.wallSeconds = std::chrono::duration<double>(t1 - t0).count();
      solved = solved || rec.testPerfect;
      if (log) {
        *log << problem.name << " " << pattern_name(pid) << " seed " << seed << ": "
             << (rec.testPerfect ? "test-perfect"
                                 : (rec.trainPerfect ? "train-perfect" : "imperfect"))
             << " evals=" << rec.evaluations << " gens=" << (rec.generations + 1)
             << " nodes=" << rec.championNodes << " (" << rec.wallSeconds << "s)\n";
      }
      records.push_back(std::move(rec));
    }
    if (infeasible) continue;
    if (solved) break;  // later patterns are never instantiated
  }
  return records;
}

double success_rate(const std::vector<RunRecord>& records) {
  if (records.empty()) return 0.0;
  int hits = 0;
  for (const RunRecord& r : records)
    if (r.testPerfect) ++hits;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::string render_champion(const Problem& problem, const PatternInstance& pat,
                            const std::vector<ExprPtr>& genes) {
  TypePtr fn = t_fn(problem.argTypes, problem.returnType);
  std::ostringstream out;
  out << "# foldsynth champion\n";
  out << "problem: " << problem.name << "\n";
  out << "pattern: " << pattern_name(pat.id) << "\n";
  out << "signature: " << render_type(fn) << "\n";
  for (std::size_t i = 0; i < pat.slots.size(); ++i)
    out << "slot " << pat.slots[i].name << " = " << render_expr(genes[i]) << "\n";
  return out.str();
}

ChampionDoc parse_champion(const std::string& text, const Problem& problem,
                           const Registry& registry) {
  std::istringstream in(text);
  std::string line;
  std::optional<PatternId> pid;
  std::vector<std::pair<std::string, std::string>> slotLines;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("pattern: ", 0) == 0) {
      pid = pattern_from_name(line.substr(9));
      if (!pid) throw ProblemParseError("unknown pattern in champion file: " + line.substr(9));
    } else if (line.rfind("slot ", 0) == 0) {
      std::size_t eq = line.find(" = ");
      if (eq == std::string::npos || eq <= 5)
        throw ProblemParseError("malformed slot line: " + line);
      slotLines.emplace_back(line.substr(5, eq - 5), line.substr(eq + 3));
    }
  }
  if (!pid) throw ProblemParseError("champion file lacks a pattern line");

  PatternInstance pat =
      instantiate_pattern(*pid, problem.argTypes, problem.returnType, problem.unbound);
  ChampionDoc doc;
  doc.pattern = *pid;
  doc.genes.resize(pat.slots.size());
  std::vector<bool> seen(pat.slots.size(), false);
  for (const auto& [name, body] : slotLines) {
    bool found = false;
    for (std::size_t i = 0; i < pat.slots.size(); ++i) {
      if (pat.slots[i].name != name) continue;
      doc.genes[i] =
          parse_expr(body, pat.slots[i].type, permissive_scope(pat, pat.slots[i]), registry);
      seen[i] = true;
      found = true;
      break;
    }
    if (!found) throw ProblemParseError("champion file names unknown slot '" + name + "'");
  }
  for (std::size_t i = 0; i < pat.slots.size(); ++i)
    if (!seen[i])
      throw ProblemParseError("champion file is missing slot '" + pat.slots[i].name + "'");
  return doc;
}

ChampionDoc load_champion(const std::string& path, const Problem& problem,
                          const Registry& registry) {
  std::ifstream in(path);
  if (!in) throw ProblemParseError("cannot open champion file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_champion(buf.str(), problem, registry);
}

namespace {

std::string run_file_stem(const RunRecord& r) {
  return std::string(pattern_name(r.pattern)) + "-seed" + std::to_string(r.seed);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ProblemParseError("cannot write " + path.string());
  out << content;
}

}  // namespace

void persist_and_report(const std::vector<RunRecord>& records, const Problem& problem,
                        const ScheduleConfig& cfg, const std::string& outDir) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(outDir) / problem.name;
  fs::create_directories(dir);

  for (const RunRecord& r : records) {
    std::ostringstream champ;
    champ << "# foldsynth champion\n";
    champ << "problem: " << r.problem << "\n";
    champ << "pattern: " << pattern_name(r.pattern) << "\n";
    champ << "signature: " << render_type(t_fn(problem.argTypes, problem.returnType)) << "\n";
    for (std::size_t i = 0; i < r.slotNames.size(); ++i)
      champ << "slot " << r.slotNames[i] << " = " << r.championSlots[i] << "\n";
    write_file(dir / (run_file_stem(r) + ".champion.txt"), champ.str());

    std::string stats;
    for (const std::string& line : r.statsLines) {
      stats += line;
      stats += '\n';
    }
    write_file(dir / (run_file_stem(r) + ".stats.jsonl"), stats);
  }

  ordered_json doc;
  doc["problem"] = problem.name;
  doc["seeds"] = cfg.seeds;
  doc["master_seed"] = cfg.masterSeed;
  doc["config"] = {{"pop", cfg.run.popSize},
                   {"max_evals", cfg.run.maxEvaluations},
                   {"crossover_rate", cfg.run.crossoverRate},
                   {"selection", cfg.run.selection == Selection::Dsls ? "dsls" : "tournament"},
                   {"gac", cfg.run.gAC},
                   {"gdc", cfg.run.gDC}};
  doc["patterns"] = ordered_json::array();

  // Group records per pattern, preserving schedule order.
  std::vector<PatternId> seen;
  for (const RunRecord& r : records)
    if (std::find(seen.begin(), seen.end(), r.pattern) == seen.end()) seen.push_back(r.pattern);
  for (PatternId pid : seen) {
    std::vector<RunRecord> group;
    for (const RunRecord& r : records)
      if (r.pattern == pid) group.push_back(r);
    ordered_json runs = ordered_json::array();
    double evalSum = 0.0, nodeSum = 0.0;
    for (const RunRecord& r : group) {
      runs.push_back({{"seed", r.seed},
                      {"train_perfect", r.trainPerfect},
                      {"test_perfect", r.testPerfect},
                      {"evaluations", r.evaluations},
                      {"generations", r.generations + 1},
                      {"champion_nodes", r.championNodes},
                      {"champion_file", run_file_stem(r) + ".champion.txt"}});
      evalSum += static_cast<double>(r.evaluations);
      nodeSum += r.championNodes;
    }
    ordered_json row;
    row["pattern"] = pattern_name(pid);
    row["runs"] = std::move(runs);
    row["success_rate"] = success_rate(group);
    row["mean_evaluations"] = evalSum / static_cast<double>(group.size());
    row["mean_champion_nodes"] = nodeSum / static_cast<double>(group.size());
    doc["patterns"].push_back(std::move(row));
  }
  write_file(dir / "results.json", doc.dump(2) + "\n");
}

}  // namespace foldsynth
