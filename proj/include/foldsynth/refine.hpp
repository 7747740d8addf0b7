// SPDX-License-Identifier: MIT
//
// Program refinement and population diversification: constant clipping, the
// simplification-law rewriter, greedy local search, and the per-generation
// abridge/cull schedule. Every refinement either preserves a program's
// training behavior or is checked against it and reverted, so refined
// individuals never score worse than their originals.

#pragma once

#include "foldsynth/evolve.hpp"

namespace foldsynth {

// Replaces every maximal argument-free, function-free subtree with the
// literal it evaluates to (under the standard budget). Subtrees whose
// evaluation fails are left untouched; lambda bodies are never entered.
ExprPtr clip_constants(const ExprPtr& e, const EvalBudget& budget);

// Rewrites with the hand-written law table, bottom-up to a fixed point
// (capped at 1000 rewrites). Division/modulo cancellation laws only fire
// when the cancelled operand is a nonzero literal, and the equality-of-if
// laws only when the two branches are syntactically distinct.
ExprPtr apply_laws(const ExprPtr& e, const Registry& registry);

// Greedy hill-climb: walks each gene in pre-order, trying to replace every
// node by each of its same-type children; adopts a candidate whose whole-
// program training error improves, or ties with strictly fewer nodes, and
// re-tries the same position after an adoption. Total error never
// increases; node count never increases on ties.
Individual local_search(const RunContext& run, const Individual& ind);

// clip_constants, then apply_laws (reverted if training error increased),
// then local_search, gene by gene. Pure in `ind` and rng-free, so whole
// populations can be abridged in parallel.
Individual abridge(const RunContext& run, const Individual& ind);

// Groups individuals with identical error vectors (first-appearance order),
// keeps the fewest-node member of each group (ties broken uniformly), and
// refills the removed slots with fresh RHH individuals, evaluated.
DcStats diversify_cull(RunContext& run, std::vector<Individual>& pop, Rng& rng);

// Abridges the whole population every cfg.gAC generations and culls every
// cfg.gDC generations (abridge first); 0 disables a procedure.
RefineReport acdc_step(RunContext& run, std::vector<Individual>& pop, int gen, Rng& rng);

// The Refiner evolve_pattern plugs in: acdc_step per generation plus a
// final abridge of the champion.
class AcdcRefiner final : public Refiner {
 public:
  explicit AcdcRefiner(RunContext& run) : run_(run) {}
  RefineReport step(std::vector<Individual>& pop, int gen, Rng& rng) override {
    return acdc_step(run_, pop, gen, rng);
  }
  Individual polish(const Individual& ind) override { return abridge(run_, ind); }

 private:
  RunContext& run_;
};

}  // namespace foldsynth
