// SPDX-License-Identifier: MIT

#include "foldsynth/refine.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace foldsynth {

namespace {

// True when the subtree references no program argument and no free binding
// (names bound by lambdas inside the subtree itself are fine).
bool constant_subtree(const ExprPtr& e, std::vector<std::string>& bound) {
  switch (e->tag) {
    case Expr::Tag::Literal:
      return true;
    case Expr::Tag::ArgRef:
      return false;
    case Expr::Tag::BindingRef:
      return std::find(bound.begin(), bound.end(), e->name) != bound.end();
    case Expr::Tag::Lambda: {
      bound.push_back(e->name);
      bool ok = constant_subtree(e->body, bound);
      bound.pop_back();
      return ok;
    }
    case Expr::Tag::Apply:
      for (const auto& c : e->children) {
        if (!constant_subtree(c, bound)) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

ExprPtr clip_constants(const ExprPtr& e, const EvalBudget& budget) {
  // A lambda node is never a clip target on its own (its type contains a
  // function), and its body is never rewritten.
  if (e->tag != Expr::Tag::Literal && !contains_fn(e->type)) {
    std::vector<std::string> bound;
    if (constant_subtree(e, bound)) {
      try {
        EvalState st;
        st.budget = budget;
        Env env;
        ValuePtr v = evaluate(e, env, st);
        return e_lit(std::move(v), e->type);
      } catch (const EvalError&) {
        return e;  // evaluation failed: leave the whole subtree untouched
      }
    }
  }
  if (e->tag != Expr::Tag::Apply) return e;
  std::vector<ExprPtr> kids;
  kids.reserve(e->children.size());
  bool changed = false;
  for (const auto& c : e->children) {
    ExprPtr n = clip_constants(c, budget);
    changed = changed || n.get() != c.get();
    kids.push_back(std::move(n));
  }
  if (!changed) return e;
  return e_apply(e->prim, e->typeInst, std::move(kids));
}

namespace {

bool is_prim(const ExprPtr& e, std::string_view name) {
  return e->tag == Expr::Tag::Apply && e->prim->name == name;
}

bool is_any(const ExprPtr& e, std::initializer_list<std::string_view> names) {
  if (e->tag != Expr::Tag::Apply) return false;
  for (std::string_view n : names)
    if (e->prim->name == n) return true;
  return false;
}

bool is_bool_lit(const ExprPtr& e, bool want) {
  return e->tag == Expr::Tag::Literal && e->lit->tag == Value::Tag::Bool && e->lit->b == want;
}

bool is_zero_lit(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Literal) return false;
  if (e->lit->tag == Value::Tag::Int) return e->lit->i == 0;
  if (e->lit->tag == Value::Tag::Float) return e->lit->f == 0.0;
  return false;
}

bool is_one_lit(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Literal) return false;
  if (e->lit->tag == Value::Tag::Int) return e->lit->i == 1;
  if (e->lit->tag == Value::Tag::Float) return e->lit->f == 1.0;
  return false;
}

bool is_nonzero_lit(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Literal) return false;
  if (e->lit->tag == Value::Tag::Int) return e->lit->i != 0;
  if (e->lit->tag == Value::Tag::Float) return e->lit->f != 0.0;
  return false;
}

ExprPtr zero_like(const TypePtr& t) {
  if (t->tag == Type::Tag::Base && t->base == BaseKind::Float) return e_lit(v_float(0.0), t);
  return e_lit(v_int(0), t);
}

ExprPtr one_like(const TypePtr& t) {
  if (t->tag == Type::Tag::Base && t->base == BaseKind::Float) return e_lit(v_float(1.0), t);
  return e_lit(v_int(1), t);
}

ExprPtr bool_lit(bool b) { return e_lit(v_bool(b), t_bool()); }

struct Rewriter {
  const Primitive* notP;
  const Primitive* addIntP;
  const Primitive* singletonP;
  int budget = 1000;

  ExprPtr mk_not(const ExprPtr& c) const { return e_apply(notP, {t_bool(), t_bool()}, {c}); }

  // One law application at the node, or nullptr.
  ExprPtr fire(const ExprPtr& e) const {
    const std::string& p = e->prim->name;
    const auto& ch = e->children;

    if (p == "if") {
      if (is_bool_lit(ch[0], true)) return ch[1];
      if (is_bool_lit(ch[0], false)) return ch[2];
      if (expr_equal(ch[1], ch[2])) return ch[1];
      if (is_prim(ch[0], "not"))
        return e_apply(e->prim, e->typeInst, {ch[0]->children[0], ch[2], ch[1]});
      return nullptr;
    }
    if (p == "eq") {
      if (expr_equal(ch[0], ch[1])) return bool_lit(true);
      // a == if cond x y, with distinct branches, either operand order.
      for (int s = 0; s < 2; ++s) {
        const ExprPtr& a = ch[static_cast<std::size_t>(s)];
        const ExprPtr& ife = ch[static_cast<std::size_t>(1 - s)];
        if (!is_prim(ife, "if")) continue;
        const ExprPtr& c = ife->children[0];
        const ExprPtr& x = ife->children[1];
        const ExprPtr& y = ife->children[2];
        if (expr_equal(x, y)) continue;
        if (expr_equal(a, x)) return c;
        if (expr_equal(a, y)) return mk_not(c);
      }
      return nullptr;
    }
    if (is_any(e, {"ltOrd", "ltInt", "ltFloat", "gtOrd", "gtInt", "gtFloat"})) {
      if (expr_equal(ch[0], ch[1])) return bool_lit(false);
      return nullptr;
    }
    if (is_any(e, {"subInt", "subFloat"})) {
      if (expr_equal(ch[0], ch[1])) return zero_like(e->type);
      if (is_zero_lit(ch[1])) return ch[0];
      return nullptr;
    }
    if (is_any(e, {"addInt", "addFloat"})) {
      if (is_zero_lit(ch[0])) return ch[1];
      if (is_zero_lit(ch[1])) return ch[0];
      return nullptr;
    }
    if (is_any(e, {"multInt", "multFloat"})) {
      if (is_one_lit(ch[0])) return ch[1];
      if (is_one_lit(ch[1])) return ch[0];
      if (is_zero_lit(ch[0]) || is_zero_lit(ch[1])) return zero_like(e->type);
      return nullptr;
    }
    if (is_any(e, {"divInt", "divFloat"})) {
      if (is_one_lit(ch[1])) return ch[0];
      if (is_nonzero_lit(ch[1])) {
        if (expr_equal(ch[0], ch[1])) return one_like(e->type);
        if (is_any(ch[0], {"multInt", "multFloat"})) {
          if (expr_equal(ch[0]->children[0], ch[1])) return ch[0]->children[1];
          if (expr_equal(ch[0]->children[1], ch[1])) return ch[0]->children[0];
        }
      }
      return nullptr;
    }
    if (p == "modInt") {
      if (is_one_lit(ch[1])) return zero_like(e->type);
      if (is_nonzero_lit(ch[1])) {
        if (expr_equal(ch[0], ch[1])) return zero_like(e->type);
        if (is_prim(ch[0], "multInt") && (expr_equal(ch[0]->children[0], ch[1]) ||
                                          expr_equal(ch[0]->children[1], ch[1])))
          return zero_like(e->type);
      }
      return nullptr;
    }
    if (is_any(e, {"min", "minInt", "minFloat", "max", "maxInt", "maxFloat"})) {
      if (expr_equal(ch[0], ch[1])) return ch[0];
      return nullptr;
    }
    if (p == "and") {
      if (is_bool_lit(ch[0], false) || is_bool_lit(ch[1], false)) return bool_lit(false);
      if (is_bool_lit(ch[0], true)) return ch[1];
      if (is_bool_lit(ch[1], true)) return ch[0];
      if (expr_equal(ch[0], ch[1])) return ch[0];
      return nullptr;
    }
    if (p == "or") {
      if (is_bool_lit(ch[0], true) || is_bool_lit(ch[1], true)) return bool_lit(true);
      if (is_bool_lit(ch[0], false)) return ch[1];
      if (is_bool_lit(ch[1], false)) return ch[0];
      if (expr_equal(ch[0], ch[1])) return ch[0];
      return nullptr;
    }
    if (p == "length") {
      if (is_prim(ch[0], "singleton")) return e_lit(v_int(1), t_int());
      if (is_prim(ch[0], "cons"))
        return e_apply(addIntP, {t_int(), t_int(), t_int()},
                       {e_lit(v_int(1), t_int()),
                        e_apply(e->prim, e->typeInst, {ch[0]->children[1]})});
      if (is_prim(ch[0], "reverse")) return e_apply(e->prim, e->typeInst, {ch[0]->children[0]});
      return nullptr;
    }
    if (p == "head") {
      if (is_prim(ch[0], "singleton")) return ch[0]->children[0];
      return nullptr;
    }
    if (p == "reverse") {
      if (is_prim(ch[0], "singleton")) return ch[0];
      if (is_prim(ch[0], "reverse")) return ch[0]->children[0];
      return nullptr;
    }
    if (is_any(e, {"sumInt", "sumFloat", "productInt", "productFloat"})) {
      if (is_prim(ch[0], "singleton")) return ch[0]->children[0];
      return nullptr;
    }
    if (p == "take") {
      if (is_prim(ch[0], "length") && expr_equal(ch[0]->children[0], ch[1])) return ch[1];
      return nullptr;
    }
    if (p == "range") {
      if (expr_equal(ch[0], ch[1]))
        return e_apply(singletonP, {t_int(), t_list(t_int())}, {ch[0]});
      return nullptr;
    }
    if (p == "fst") {
      if (is_prim(ch[0], "pair")) return ch[0]->children[0];
      return nullptr;
    }
    if (p == "snd") {
      if (is_prim(ch[0], "pair")) return ch[0]->children[1];
      return nullptr;
    }
    return nullptr;
  }

  ExprPtr norm(const ExprPtr& e) {
    ExprPtr cur = e;
    if (cur->tag == Expr::Tag::Apply) {
      std::vector<ExprPtr> kids;
      kids.reserve(cur->children.size());
      bool changed = false;
      for (const auto& c : cur->children) {
        ExprPtr n = norm(c);
        changed = changed || n.get() != c.get();
        kids.push_back(std::move(n));
      }
      if (changed) cur = e_apply(cur->prim, cur->typeInst, std::move(kids));
      if (budget > 0) {
        if (ExprPtr r = fire(cur)) {
          --budget;
          return norm(r);  // the rewrite may have exposed fresh redexes
        }
      }
    }
    return cur;
  }
};

}  // namespace

ExprPtr apply_laws(const ExprPtr& e, const Registry& registry) {
  Rewriter rw{registry.find("not"), registry.find("addInt"), registry.find("singleton"), 1000};
  return rw.norm(e);
}

Individual local_search(const RunContext& run, const Individual& ind) {
  Individual cur = ind;
  if (!cur.evaluated) run.evaluate(cur);
  bool changed = false;
  for (std::size_t gi = 0; gi < cur.genes.size(); ++gi) {
    int pos = 0;
    while (pos < mutable_position_count(cur.genes[gi])) {
      const ExprPtr gene = cur.genes[gi];
      ExprPtr node = subtree_at_position(gene, pos);
      if (node->tag != Expr::Tag::Apply) {
        ++pos;
        continue;
      }
      ExprPtr bestGene = gene;
      double bestErr = cur.total;
      int bestNodes = cur.nodes;
      bool adopted = false;
      for (const ExprPtr& child : node->children) {
        if (!type_equal(child->type, node->type)) continue;
        ExprPtr candidate = replace_position(gene, pos, child);
        std::vector<ExprPtr> genes = cur.genes;
        genes[gi] = candidate;
        double err = run.total_error(genes, bestErr);
        int nodes = cur.nodes - node_count(gene) + node_count(candidate);
        if (err < bestErr || (err == bestErr && nodes < bestNodes)) {
          bestGene = candidate;
          bestErr = err;
          bestNodes = nodes;
          adopted = true;
        }
      }
      if (adopted) {
        cur.genes[gi] = bestGene;
        cur.total = bestErr;
        cur.nodes = bestNodes;
        changed = true;  // stay at the same position: its subtree just changed
      } else {
        ++pos;
      }
    }
  }
  if (changed) run.evaluate(cur);  // refresh the per-case error vector
  return cur;
}

Individual abridge(const RunContext& run, const Individual& ind) {
  Individual cur = ind;
  if (!cur.evaluated) run.evaluate(cur);

  bool clipChanged = false;
  for (ExprPtr& g : cur.genes) {
    ExprPtr c = clip_constants(g, run.config().budget);
    if (c.get() != g.get()) {
      g = std::move(c);
      clipChanged = true;
    }
  }
  // Clipping preserves behavior but can only cheapen execution, so errors
  // never worsen; re-measure to keep the caches exact.
  if (clipChanged) run.evaluate(cur);

  std::vector<ExprPtr> lawGenes = cur.genes;
  bool lawChanged = false;
  for (ExprPtr& g : lawGenes) {
    ExprPtr l = apply_laws(g, run.registry());
    if (l.get() != g.get()) {
      g = std::move(l);
      lawChanged = true;
    }
  }
  if (lawChanged) {
    // The law table is universally valid on error-free runs; measuring and
    // reverting shields training behavior from the error-path corner cases.
    double t = run.total_error(lawGenes, cur.total);
    if (t <= cur.total) {
      cur.genes = std::move(lawGenes);
      run.evaluate(cur);
    }
  }

  return local_search(run, cur);
}

DcStats diversify_cull(RunContext& run, std::vector<Individual>& pop, Rng& rng) {
  DcStats st;
  st.preCull = static_cast<int>(pop.size());

  std::map<std::vector<double>, std::size_t> groupOf;
  std::vector<std::vector<std::size_t>> groups;  // first-appearance order
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto [it, fresh] = groupOf.try_emplace(pop[i].errors, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::vector<Individual> keepers;
  keepers.reserve(groups.size());
  for (const auto& g : groups) {
    int fewest = pop[g[0]].nodes;
    for (std::size_t i : g) fewest = std::min(fewest, pop[i].nodes);
    std::vector<std::size_t> tied;
    for (std::size_t i : g)
      if (pop[i].nodes == fewest) tied.push_back(i);
    keepers.push_back(pop[tied[rng.index(tied.size())]]);
  }
  st.postCull = static_cast<int>(keepers.size());

  std::set<std::vector<double>> recount;
  for (const Individual& k : keepers) recount.insert(k.errors);
  st.postCullDistinct = static_cast<int>(recount.size());

  std::vector<Individual> fresh;
  fresh.reserve(pop.size() - keepers.size());
  while (keepers.size() + fresh.size() < pop.size()) fresh.push_back(run.random_individual(rng));
  run.evaluate_all(fresh);
  for (Individual& f : fresh) keepers.push_back(std::move(f));

  pop = std::move(keepers);
  st.postRefill = static_cast<int>(pop.size());
  return st;
}

RefineReport acdc_step(RunContext& run, std::vector<Individual>& pop, int gen, Rng& rng) {
  RefineReport rep;
  const RunConfig& cfg = run.config();
  if (cfg.gAC > 0 && gen % cfg.gAC == 0) {
    run.parallel_for(pop.size(), [&](std::size_t i) { pop[i] = abridge(run, pop[i]); });
    rep.acApplied = true;
  }
  if (cfg.gDC > 0 && gen % cfg.gDC == 0) rep.dc = diversify_cull(run, pop, rng);
  return rep;
}

}  // namespace foldsynth
