// SPDX-License-Identifier: MIT
//
// The multi-gene generational GP loop: ramped half-and-half initialization,
// tournament and down-sampled lexicase selection, typed mutation and
// crossover, full generational replacement, per-generation refinement hooks,
// and early stopping on a training-perfect individual.
//
// Determinism contract: every stochastic choice consumes the single run RNG
// on the coordinator thread. Fitness evaluation (and per-individual
// abridgment) is pure and may fan out to workers; results are byte-identical
// for any worker count.

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldsynth/eval.hpp"
#include "foldsynth/gen.hpp"
#include "foldsynth/metrics.hpp"
#include "foldsynth/problem.hpp"
#include "foldsynth/rng.hpp"
#include "foldsynth/schemes.hpp"

namespace foldsynth {

enum class Selection { Tournament, Dsls };

struct RunConfig {
  int popSize = 1000;
  long long maxEvaluations = 300000;
  double crossoverRate = 0.5;
  int maxSlotDepth = 5;
  int tournamentSize = 10;
  Selection selection = Selection::Dsls;
  double dslsSampleFraction = 0.1;
  int dslsMinCases = 10;
  int gAC = 1;  // abridge the population every gAC generations; 0 disables
  int gDC = 1;  // cull duplicates every gDC generations; 0 disables
  EvalBudget budget;
  int workers = 0;  // 0: FOLDSYNTH_WORKERS env var, then hardware concurrency
};

struct Individual {
  std::vector<ExprPtr> genes;  // aligned with PatternInstance::slots
  std::vector<double> errors;  // per training case; +inf on runtime error
  double total = kInfiniteError;
  int nodes = 0;
  bool evaluated = false;
};

// Raised when a slot's type cannot be generated within the depth budget;
// the scheduler reports it and moves on to the next pattern.
struct InfeasibleSlot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Machinery shared by evolution and refinement for one (problem, pattern)
// run: per-slot generation contexts, the RHH initialization kit, and the
// worker pool for fitness evaluation.
class RunContext {
 public:
  RunContext(const Problem& problem, const PatternInstance& pat, const Registry& registry,
             const RunConfig& cfg);
  ~RunContext();
  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  const Problem& problem() const { return problem_; }
  const PatternInstance& pattern() const { return pat_; }
  const Registry& registry() const { return registry_; }
  const RunConfig& config() const { return cfg_; }
  int workers() const { return workers_; }

  // Throws InfeasibleSlot unless every slot type is generable at the
  // maximum slot depth.
  void check_feasible();

  // RHH draws: depth uniform in [1, maxSlotDepth] and a fair method coin,
  // drawn independently per gene.
  ExprPtr random_gene(Rng& rng, int slot);
  Individual random_individual(Rng& rng);

  // Grow-method tree for mutation regrow; nullptr when infeasible.
  ExprPtr grow_tree(Rng& rng, int slot, const TypePtr& type, int maxDepth);

  // Fills errors/total/nodes. evaluate_all fans the not-yet-evaluated
  // individuals out to the worker pool.
  void evaluate(Individual& ind) const;
  void evaluate_all(std::vector<Individual>& pop) const;

  // Total training error of a gene vector, abandoning with +inf as soon as
  // the running sum strictly exceeds `limit` (errors are non-negative, so
  // the exact total could only be larger). Exact when the total is <= limit.
  double total_error(const std::vector<ExprPtr>& genes, double limit) const;

  // Runs `job(i)` for i in [0, n) on the worker pool; jobs must be pure and
  // independent. Used for fitness and for per-individual abridgment.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) const;

 private:
  const Problem& problem_;
  PatternInstance pat_;
  const Registry& registry_;
  RunConfig cfg_;
  int workers_ = 1;
  std::vector<std::unique_ptr<GenContext>> slotCtx_;
};

// Per-generation bookkeeping for the diversify-cull step.
struct DcStats {
  int preCull = 0;
  int postCull = 0;          // survivors before refill
  int postCullDistinct = 0;  // independently recounted distinct error vectors
  int postRefill = 0;
};

struct RefineReport {
  bool acApplied = false;
  std::optional<DcStats> dc;
};

// Per-generation refinement schedule, supplied by the refine module.
struct Refiner {
  virtual ~Refiner() = default;
  // Rewrites the evaluated population in place (abridge / cull per its
  // schedule); `gen` is the generation index, starting at 0 for the initial
  // population.
  virtual RefineReport step(std::vector<Individual>& pop, int gen, Rng& rng) = 0;
  // Final champion polish.
  virtual Individual polish(const Individual& ind) = 0;
};

struct GenerationStats {
  int gen = 0;
  long long evaluations = 0;  // counted offspring/init evaluations so far
  double bestError = kInfiniteError;
  int bestNodes = 0;
  double meanFiniteError = 0.0;  // mean over finite-error individuals
  int finiteCount = 0;
  double meanNodes = 0.0;
  int distinctErrorVectors = 0;
  bool acApplied = false;
  std::optional<DcStats> dc;
};

struct StatsSink {
  virtual ~StatsSink() = default;
  virtual void record(const GenerationStats& s) = 0;
};

struct EvolveResult {
  Individual champion;
  long long evaluations = 0;
  int generations = 0;  // index of the last generation reached
  bool trainPerfect = false;
};

// popSize fresh RHH individuals (not yet evaluated).
std::vector<Individual> init_population(RunContext& run, Rng& rng);

// Minimum-total individual among k draws with replacement; ties broken by
// fewer nodes, then uniformly among the distinct tied candidates.
const Individual& select_tournament(const std::vector<Individual>& pop, int k, Rng& rng);

// Down-sampled lexicase: sample max(minCases, ceil(fraction*nCases)) case
// ids without replacement (capped at nCases), filter the population
// sequentially keeping the per-case minima, then pick uniformly among the
// survivors.
const Individual& select_dsls(const std::vector<Individual>& pop, int nCases, double fraction,
                              int minCases, Rng& rng);

// One slot chosen uniformly, one node chosen uniformly among its mutable
// positions, regrown with the grow method at depth max(1, maxSlotDepth -
// depth(node)). Lambdas are replaced wholesale. Up to 5 attempts, then a
// plain copy of the parent.
Individual mutate(RunContext& run, const Individual& parent, Rng& rng);

// Fair coin: whole-slot swap from p2 into p1, or same-type subtree swap
// within one uniformly chosen slot (up to 5 node picks; depth overflows and
// type-incompatible picks are rejected). Falls back to a copy of p1.
Individual crossover(RunContext& run, const Individual& p1, const Individual& p2, Rng& rng);

// The full generational loop. `refiner` and `sink` may be null.
EvolveResult evolve_pattern(RunContext& run, Rng& rng, Refiner* refiner, StatsSink* sink);

}  // namespace foldsynth
