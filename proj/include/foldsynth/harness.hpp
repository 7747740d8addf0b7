// SPDX-License-Identifier: MIT
//
// The experiment harness: the pattern scheduler, multi-seed runner,
// champion persistence, and the machine-readable report files. Persisted
// artifacts are byte-deterministic: they contain no timestamps, and every
// random choice of a run derives from (master seed, problem, pattern, seed
// index) alone.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "foldsynth/evolve.hpp"
#include "foldsynth/problem.hpp"
#include "foldsynth/refine.hpp"
#include "foldsynth/schemes.hpp"

namespace foldsynth {

struct RunRecord {
  std::string problem;
  PatternId pattern = PatternId::NoScheme;
  int seed = 0;  // seed index within the schedule
  bool trainPerfect = false;
  bool testPerfect = false;
  long long evaluations = 0;
  int generations = 0;
  int championNodes = 0;
  std::vector<std::string> slotNames;
  std::vector<std::string> championSlots;  // rendered genes, aligned with slotNames
  std::vector<std::string> statsLines;     // one JSON object per generation
  double wallSeconds = 0.0;                // logged to the console only, never persisted
};

struct ScheduleConfig {
  RunConfig run;
  int seeds = 30;
  std::uint64_t masterSeed = 1;
  std::optional<PatternId> onlyPattern;  // bypasses the schedule when set
};

// One generation record as a JSON line (the stats stream format).
std::string stats_to_json(const GenerationStats& s);

// Tries patterns in applicable_patterns order (or just `onlyPattern`),
// running `seeds` seeded runs of each, and stops after the first pattern
// with at least one test-perfect run; later patterns are never instantiated.
// A pattern whose slots are infeasible is skipped with a log note. Reaching
// Accu/Hylo without the problem providing their unbound type throws
// MissingUnboundType. Progress lines go to `log` when non-null.
std::vector<RunRecord> run_schedule(const Problem& problem, const Registry& registry,
                                    const ScheduleConfig& cfg, std::ostream* log);

// Fraction of test-perfect records.
double success_rate(const std::vector<RunRecord>& records);

// Writes out/<problem>/results.json plus one champion file and one stats
// stream per run. Identical results produce identical bytes.
void persist_and_report(const std::vector<RunRecord>& records, const Problem& problem,
                        const ScheduleConfig& cfg, const std::string& outDir);

// Champion files: a small header plus one `slot <name> = <expr>` line per
// gene, re-parseable against the problem's signature.
std::string render_champion(const Problem& problem, const PatternInstance& pat,
                            const std::vector<ExprPtr>& genes);

struct ChampionDoc {
  PatternId pattern = PatternId::NoScheme;
  std::vector<ExprPtr> genes;
};

ChampionDoc parse_champion(const std::string& text, const Problem& problem,
                           const Registry& registry);
ChampionDoc load_champion(const std::string& path, const Problem& problem,
                          const Registry& registry);

// Error vector of a gene set over a case list (runtime errors score +inf).
std::vector<double> error_vector(const PatternInstance& pat, const std::vector<ExprPtr>& genes,
                                 const std::vector<IOCase>& cases, const EvalBudget& budget);

}  // namespace foldsynth
