// SPDX-License-Identifier: MIT
//
// foldsynth command-line driver.
//
//   solve <spec.json>     run the pattern schedule and persist champions
//   simplify <champ> <spec>  re-run refinement on a saved champion
//   report <results-dir>  summarize results.json files as a table
//   oracle <spec> <champ> print a champion's error vector on all cases
//
// Worker-thread count comes from the FOLDSYNTH_WORKERS environment variable
// (default: one worker per hardware thread). All tool output that lands on
// disk is byte-deterministic for a fixed master seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "foldsynth/harness.hpp"
#include "foldsynth/refine.hpp"

namespace {

using namespace foldsynth;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PatternId parse_pattern_flag(const std::string& name) {
  if (auto id = pattern_from_name(name)) return *id;
  std::string known;
  for (PatternId id : kAllPatterns) {
    if (!known.empty()) known += ", ";
    known += pattern_name(id);
  }
  throw CLI::ValidationError("--pattern", "unknown pattern '" + name + "' (known: " + known + ")");
}

std::string fmt_err(double e) {
  if (std::isinf(e)) return "inf";
  std::ostringstream ss;
  ss << e;
  return ss.str();
}

int cmd_solve(const std::string& specPath, ScheduleConfig cfg, const std::string& outDir,
              const std::string& patternName) {
  if (!patternName.empty()) cfg.onlyPattern = parse_pattern_flag(patternName);
  Registry registry = Registry::base();
  Problem problem = load_problem(specPath);
  std::vector<RunRecord> records = run_schedule(problem, registry, cfg, &std::cout);
  persist_and_report(records, problem, cfg, outDir);
  std::cout << problem.name << ": success rate " << success_rate(records) << " over "
            << records.size() << " runs; results in " << outDir << "/" << problem.name << "\n";
  return 0;
}

int cmd_simplify(const std::string& champPath, const std::string& specPath) {
  Registry registry = Registry::base();
  Problem problem = load_problem(specPath);
  ChampionDoc doc = load_champion(champPath, problem, registry);
  PatternInstance pat =
      instantiate_pattern(doc.pattern, problem.argTypes, problem.returnType, problem.unbound);
  RunConfig run;
  RunContext ctx(problem, pat, registry, run);
  Individual ind;
  ind.genes = doc.genes;
  ctx.evaluate(ind);
  double before = ind.total;
  int beforeNodes = ind.nodes;
  Individual slim = abridge(ctx, ind);
  std::cout << render_champion(problem, pat, slim.genes);
  std::cerr << "train error " << fmt_err(before) << " -> " << fmt_err(slim.total) << ", nodes "
            << beforeNodes << " -> " << slim.nodes << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "results.json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no results.json under " << dir << "\n";
    return 1;
  }
  std::cout << std::left << std::setw(24) << "problem" << std::setw(13) << "pattern"
            << std::right << std::setw(6) << "seeds" << std::setw(10) << "success"
            << std::setw(12) << "mean-evals" << std::setw(12) << "mean-nodes" << "\n";
  for (const auto& f : files) {
    nlohmann::json doc = nlohmann::json::parse(read_file(f.string()));
    for (const auto& pat : doc.at("patterns")) {
      std::ostringstream rate;
      rate << std::fixed << std::setprecision(0) << 100.0 * pat.at("success_rate").get<double>()
           << "%";
      std::cout << std::left << std::setw(24) << doc.at("problem").get<std::string>()
                << std::setw(13) << pat.at("pattern").get<std::string>() << std::right
                << std::setw(6) << pat.at("runs").size() << std::setw(10) << rate.str()
                << std::setw(12) << std::llround(pat.at("mean_evaluations").get<double>())
                << std::setw(12) << pat.at("mean_champion_nodes").get<double>() << "\n";
    }
  }
  return 0;
}

int cmd_oracle(const std::string& specPath, const std::string& champPath) {
  Registry registry = Registry::base();
  Problem problem = load_problem(specPath);
  ChampionDoc doc = load_champion(champPath, problem, registry);
  PatternInstance pat =
      instantiate_pattern(doc.pattern, problem.argTypes, problem.returnType, problem.unbound);
  EvalBudget budget;
  bool perfect = true;
  for (const auto* split : {&problem.train, &problem.test}) {
    std::vector<double> errs = error_vector(pat, doc.genes, *split, budget);
    double total = 0.0;
    std::cout << (split == &problem.train ? "train:" : "test:");
    for (double e : errs) {
      std::cout << " " << fmt_err(e);
      total += e;
      if (e != 0.0) perfect = false;
    }
    std::cout << "\n" << (split == &problem.train ? "train" : "test") << " total "
              << fmt_err(total) << " over " << errs.size() << " cases\n";
  }
  std::cout << (perfect ? "perfect" : "imperfect") << "\n";
  return perfect ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foldsynth: evolves recursion-scheme programs from examples"};
  app.require_subcommand(1);

  ScheduleConfig cfg;
  std::string specPath, champPath, outDir = "out", patternName, resultsDir, selection = "dsls";

  CLI::App* solve = app.add_subcommand("solve", "run the pattern schedule on a problem");
  solve->add_option("spec", specPath, "problem spec (JSON)")->required();
  solve->add_option("--pattern", patternName, "run only this pattern");
  solve->add_option("--seeds", cfg.seeds, "seeds per pattern");
  solve->add_option("--pop", cfg.run.popSize, "population size");
  solve->add_option("--max-evals", cfg.run.maxEvaluations, "evaluation budget");
  solve->add_option("--gac", cfg.run.gAC, "abridge every N generations (0 = never)");
  solve->add_option("--gdc", cfg.run.gDC, "cull duplicates every N generations (0 = never)");
  solve->add_option("--selection", selection, "parent selection: tournament or dsls");
  solve->add_option("--out", outDir, "output directory");
  solve->add_option("--master-seed", cfg.masterSeed, "master seed for the run streams");

  CLI::App* simplify = app.add_subcommand("simplify", "re-run refinement on a champion");
  simplify->add_option("champion", champPath, "champion file")->required();
  simplify->add_option("spec", specPath, "problem spec (JSON)")->required();

  CLI::App* report = app.add_subcommand("report", "summarize results directories");
  report->add_option("dir", resultsDir, "directory containing results.json files")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "print a champion's error vector");
  oracle->add_option("spec", specPath, "problem spec (JSON)")->required();
  oracle->add_option("champion", champPath, "champion file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (selection == "tournament") cfg.run.selection = Selection::Tournament;
      else if (selection == "dsls") cfg.run.selection = Selection::Dsls;
      else throw std::runtime_error("--selection must be 'tournament' or 'dsls'");
      return cmd_solve(specPath, cfg, outDir, patternName);
    }
    if (simplify->parsed()) return cmd_simplify(champPath, specPath);
    if (report->parsed()) return cmd_report(resultsDir);
    if (oracle->parsed()) return cmd_oracle(specPath, champPath);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
