// SPDX-License-Identifier: MIT

#include "foldsynth/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

namespace foldsynth {

namespace {

int resolve_workers(int cfgWorkers) {
  if (cfgWorkers > 0) return cfgWorkers;
  if (const char* env = std::getenv("FOLDSYNTH_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Pre-order subtree list aligned with the mutable-position numbering:
// lambdas occupy one slot and their bodies are not enumerated.
void collect_positions(const ExprPtr& e, std::vector<ExprPtr>& out) {
  out.push_back(e);
  if (e->tag == Expr::Tag::Apply)
    for (const auto& c : e->children) collect_positions(c, out);
}

}  // namespace

RunContext::RunContext(const Problem& problem, const PatternInstance& pat,
                       const Registry& registry, const RunConfig& cfg)
    : problem_(problem), pat_(pat), registry_(registry), cfg_(cfg) {
  workers_ = resolve_workers(cfg.workers);
  TypeUniverse universe = pattern_universe(pat_, problem_.allowedTypes);
  slotCtx_.reserve(pat_.slots.size());
  for (const SlotSpec& slot : pat_.slots)
    slotCtx_.push_back(std::make_unique<GenContext>(registry_, slot.scope, universe));
}

RunContext::~RunContext() = default;

void RunContext::check_feasible() {
  for (std::size_t i = 0; i < pat_.slots.size(); ++i) {
    const SlotSpec& slot = pat_.slots[i];
    if (!slotCtx_[i]->possible(slot.type, cfg_.maxSlotDepth))
      throw InfeasibleSlot("slot '" + slot.name + "' of type " + render_type(slot.type) +
                           " cannot be generated within depth " +
                           std::to_string(cfg_.maxSlotDepth));
  }
}

ExprPtr RunContext::random_gene(Rng& rng, int slot) {
  const TypePtr& t = pat_.slots[static_cast<std::size_t>(slot)].type;
  GenContext& ctx = *slotCtx_[static_cast<std::size_t>(slot)];
  for (int attempt = 0; attempt < 20; ++attempt) {
    int depth = static_cast<int>(rng.uniform_int(1, cfg_.maxSlotDepth));
    bool full = rng.coin();
    if (ExprPtr e = ctx.random_tree(rng, t, depth, full)) return e;
  }
  if (ExprPtr e = ctx.random_tree(rng, t, cfg_.maxSlotDepth, false)) return e;
  throw InfeasibleSlot("slot '" + pat_.slots[static_cast<std::size_t>(slot)].name +
                       "' produced no tree despite a feasible table");
}

Individual RunContext::random_individual(Rng& rng) {
  Individual ind;
  ind.genes.reserve(pat_.slots.size());
  for (std::size_t s = 0; s < pat_.slots.size(); ++s)
    ind.genes.push_back(random_gene(rng, static_cast<int>(s)));
  return ind;
}

ExprPtr RunContext::grow_tree(Rng& rng, int slot, const TypePtr& type, int maxDepth) {
  return slotCtx_[static_cast<std::size_t>(slot)]->random_tree(rng, type, maxDepth, false);
}

void RunContext::evaluate(Individual& ind) const {
  ind.nodes = 0;
  for (const auto& g : ind.genes) ind.nodes += node_count(g);
  ind.errors.clear();
  ind.errors.reserve(problem_.train.size());
  double total = 0.0;
  for (const IOCase& c : problem_.train) {
    double err;
    try {
      EvalState st;
      st.budget = cfg_.budget;
      ValuePtr got = execute_pattern(pat_, ind.genes, c.inputs, st);
      err = case_error(got, c.output);
    } catch (const EvalError&) {
      err = kInfiniteError;
    }
    ind.errors.push_back(err);
    total += err;
  }
  ind.total = total;
  ind.evaluated = true;
}

void RunContext::evaluate_all(std::vector<Individual>& pop) const {
  std::vector<Individual*> todo;
  for (Individual& ind : pop)
    if (!ind.evaluated) todo.push_back(&ind);
  parallel_for(todo.size(), [&](std::size_t i) { evaluate(*todo[i]); });
}

double RunContext::total_error(const std::vector<ExprPtr>& genes, double limit) const {
  double total = 0.0;
  for (const IOCase& c : problem_.train) {
    double err;
    try {
      EvalState st;
      st.budget = cfg_.budget;
      ValuePtr got = execute_pattern(pat_, genes, c.inputs, st);
      err = case_error(got, c.output);
    } catch (const EvalError&) {
      err = kInfiniteError;
    }
    total += err;
    // An infinite running sum is already the exact final total; a finite sum
    // above the limit can only grow further. Either way, stop here.
    if (std::isinf(total) || total > limit) return kInfiniteError;
  }
  return total;
}

void RunContext::parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) const {
  if (n == 0) return;
  int w = workers_;
  if (w > static_cast<int>(n)) w = static_cast<int>(n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      job(i);  // jobs are pure per-index work and must not throw
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

std::vector<Individual> init_population(RunContext& run, Rng& rng) {
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(run.config().popSize));
  for (int i = 0; i < run.config().popSize; ++i) pop.push_back(run.random_individual(rng));
  return pop;
}

const Individual& select_tournament(const std::vector<Individual>& pop, int k, Rng& rng) {
  std::vector<std::size_t> drawn;
  drawn.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) drawn.push_back(rng.index(pop.size()));
  auto key = [&](std::size_t i) { return std::make_pair(pop[i].total, pop[i].nodes); };
  auto best = key(drawn[0]);
  for (std::size_t i : drawn) best = std::min(best, key(i));
  std::vector<std::size_t> tied;
  for (std::size_t i : drawn)
    if (key(i) == best && std::find(tied.begin(), tied.end(), i) == tied.end())
      tied.push_back(i);
  return pop[tied[rng.index(tied.size())]];
}

const Individual& select_dsls(const std::vector<Individual>& pop, int nCases, double fraction,
                              int minCases, Rng& rng) {
  int m = std::max(minCases, static_cast<int>(std::ceil(fraction * nCases)));
  if (m > nCases) m = nCases;
  std::vector<std::size_t> cases =
      rng.sample_without_replacement(static_cast<std::size_t>(nCases),
                                     static_cast<std::size_t>(m));
  std::vector<std::size_t> survivors(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) survivors[i] = i;
  for (std::size_t c : cases) {
    double best = pop[survivors[0]].errors[c];
    for (std::size_t i : survivors) best = std::min(best, pop[i].errors[c]);
    std::vector<std::size_t> kept;
    for (std::size_t i : survivors)
      if (!(pop[i].errors[c] > best)) kept.push_back(i);
    survivors = std::move(kept);
    if (survivors.size() == 1) break;
  }
  return pop[survivors[rng.index(survivors.size())]];
}

Individual mutate(RunContext& run, const Individual& parent, Rng& rng) {
  const RunConfig& cfg = run.config();
  int slot = static_cast<int>(rng.index(parent.genes.size()));
  const ExprPtr& gene = parent.genes[static_cast<std::size_t>(slot)];
  for (int attempt = 0; attempt < 5; ++attempt) {
    int pos = static_cast<int>(rng.index(static_cast<std::size_t>(mutable_position_count(gene))));
    ExprPtr node = subtree_at_position(gene, pos);
    int depth = depth_of_position(gene, pos);
    int budget = std::max(1, cfg.maxSlotDepth - depth + 1);
    ExprPtr regrown = run.grow_tree(rng, slot, node->type, budget);
    if (!regrown) continue;
    Individual child;
    child.genes = parent.genes;
    child.genes[static_cast<std::size_t>(slot)] = replace_position(gene, pos, regrown);
    return child;
  }
  return parent;  // keeps the parent's caches; the genes are unchanged
}

Individual crossover(RunContext& run, const Individual& p1, const Individual& p2, Rng& rng) {
  const RunConfig& cfg = run.config();
  std::size_t slot = rng.index(p1.genes.size());
  if (rng.coin()) {  // whole-slot swap
    if (p1.genes[slot].get() == p2.genes[slot].get()) return p1;
    Individual child;
    child.genes = p1.genes;
    child.genes[slot] = p2.genes[slot];
    return child;
  }
  const ExprPtr& g1 = p1.genes[slot];
  std::vector<ExprPtr> donorNodes;
  collect_positions(p2.genes[slot], donorNodes);
  for (int attempt = 0; attempt < 5; ++attempt) {
    int pos = static_cast<int>(rng.index(static_cast<std::size_t>(mutable_position_count(g1))));
    ExprPtr target = subtree_at_position(g1, pos);
    std::vector<std::size_t> compatible;
    for (std::size_t i = 0; i < donorNodes.size(); ++i)
      if (type_equal(donorNodes[i]->type, target->type)) compatible.push_back(i);
    if (compatible.empty()) continue;
    const ExprPtr& donor = donorNodes[compatible[rng.index(compatible.size())]];
    if (depth_of_position(g1, pos) - 1 + expr_depth(donor) > cfg.maxSlotDepth) continue;
    if (donor.get() == target.get()) return p1;
    Individual child;
    child.genes = p1.genes;
    child.genes[slot] = replace_position(g1, pos, donor);
    return child;
  }
  return p1;
}

namespace {

const Individual& select_parent(const std::vector<Individual>& pop, const RunConfig& cfg,
                                int nCases, Rng& rng) {
  if (cfg.selection == Selection::Tournament)
    return select_tournament(pop, cfg.tournamentSize, rng);
  return select_dsls(pop, nCases, cfg.dslsSampleFraction, cfg.dslsMinCases, rng);
}

GenerationStats make_stats(const std::vector<Individual>& pop, int gen, long long evals,
                           const RefineReport& rep) {
  GenerationStats s;
  s.gen = gen;
  s.evaluations = evals;
  s.acApplied = rep.acApplied;
  s.dc = rep.dc;
  const Individual* best = &pop[0];
  double nodeSum = 0.0;
  double finiteSum = 0.0;
  std::set<std::vector<double>> distinct;
  for (const Individual& ind : pop) {
    nodeSum += ind.nodes;
    if (std::isfinite(ind.total)) {
      finiteSum += ind.total;
      ++s.finiteCount;
    }
    if (std::make_pair(ind.total, ind.nodes) < std::make_pair(best->total, best->nodes))
      best = &ind;
    distinct.insert(ind.errors);
  }
  s.bestError = best->total;
  s.bestNodes = best->nodes;
  s.meanFiniteError = s.finiteCount > 0 ? finiteSum / s.finiteCount : kInfiniteError;
  s.meanNodes = nodeSum / static_cast<double>(pop.size());
  s.distinctErrorVectors = static_cast<int>(distinct.size());
  return s;
}

}  // namespace

EvolveResult evolve_pattern(RunContext& run, Rng& rng, Refiner* refiner, StatsSink* sink) {
  const RunConfig& cfg = run.config();
  const int nCases = static_cast<int>(run.problem().train.size());
  run.check_feasible();

  std::vector<Individual> pop = init_population(run, rng);
  run.evaluate_all(pop);
  long long evals = cfg.popSize;

  int gen = 0;
  bool trainPerfect = false;
  for (;;) {
    RefineReport rep;
    if (refiner) rep = refiner->step(pop, gen, rng);
    if (sink) sink->record(make_stats(pop, gen, evals, rep));
    for (const Individual& ind : pop)
      if (ind.total == 0.0) {
        trainPerfect = true;
        break;
      }
    if (trainPerfect || evals >= cfg.maxEvaluations) break;

    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(cfg.popSize));
    for (int i = 0; i < cfg.popSize; ++i) {
      if (rng.coin(cfg.crossoverRate)) {
        const Individual& a = select_parent(pop, cfg, nCases, rng);
        const Individual& b = select_parent(pop, cfg, nCases, rng);
        next.push_back(crossover(run, a, b, rng));
      } else {
        next.push_back(mutate(run, select_parent(pop, cfg, nCases, rng), rng));
      }
    }
    run.evaluate_all(next);
    evals += cfg.popSize;
    pop = std::move(next);
    ++gen;
  }

  const Individual* best = &pop[0];
  for (const Individual& ind : pop)
    if (std::make_pair(ind.total, ind.nodes) < std::make_pair(best->total, best->nodes))
      best = &ind;
  EvolveResult result;
  result.champion = *best;
  if (refiner) result.champion = refiner->polish(result.champion);
  result.evaluations = evals;
  result.generations = gen;
  result.trainPerfect = result.champion.total == 0.0;
  return result;
}

}  // namespace foldsynth
