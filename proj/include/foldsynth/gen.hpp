// SPDX-License-Identifier: MIT
//
// Typed random-tree generation. A GenContext serves one slot: it knows the
// slot's visible names, computes depth-indexed feasibility for every
// requested type (so generation never dead-ends), and enforces the lambda
// rules: single parameter, the parameter must be used, bodies draw only on
// the parameter, and lambdas nested inside a body are exactly the identity.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "foldsynth/expr.hpp"
#include "foldsynth/expr_parse.hpp"
#include "foldsynth/prims.hpp"
#include "foldsynth/rng.hpp"
#include "foldsynth/types.hpp"

namespace foldsynth {

struct GenParams {
  int lambdaDepth = 3;  // grow depth budget for lambda bodies
  long long intLo = -100, intHi = 100;
  double floatLo = -100.0, floatHi = 100.0;
};

// Ground first-order types eligible when a primitive's type variable is left
// unconstrained by its context (e.g. the element type of `length []`).
struct TypeUniverse {
  std::vector<TypePtr> types;

  void add(const TypePtr& t);  // adds t and all of its subterms
  bool contains(const TypePtr& t) const;
};

// One primitive fully instantiated at a concrete target type.
struct PrimInst {
  const Primitive* prim = nullptr;
  std::vector<TypePtr> types;  // ground parameter types + result
};

class GenContext {
 public:
  GenContext(const Registry& registry, Scope scope, TypeUniverse universe,
             GenParams params = {});

  // Feasibility of a grow tree of type t within `depth` levels.
  bool possible(const TypePtr& t, int depth);

  // Random tree of exactly type t with depth <= maxDepth (root depth 1).
  // Returns nullptr when no tree of that type fits the budget.
  ExprPtr random_tree(Rng& rng, const TypePtr& t, int maxDepth, bool full);

  // All ground instantiations of registry primitives whose result is t.
  const std::vector<PrimInst>& instantiations(const TypePtr& t);

  const Scope& scope() const { return scope_; }
  const GenParams& params() const { return params_; }

 private:
  enum class Mode { Grow, FullStrict, Using };

  struct Opt {
    enum class Kind { Arg, Bind, Lit, Empty, PrimClos, Lam, Ident, App };
    Kind kind;
    int index = 0;  // Arg: argument index; App: instantiation index
    const Primitive* prim = nullptr;  // PrimClos
    const std::string* name = nullptr;  // Bind
    const TypePtr* bindType = nullptr;
  };

  GenContext(const GenContext& parent, std::string paramName, TypePtr paramType);

  GenContext* lambda_context(const TypePtr& paramType);
  bool lambda_feasible(const TypePtr& fnType);
  bool universe_admits(const TypePtr& t) const;
  bool leaf_exists(const TypePtr& t);
  bool possible_full(const TypePtr& t, int depth);
  bool possible_using(const TypePtr& t, int depth);
  void options(const TypePtr& t, int depth, Mode mode, std::vector<Opt>& out);
  ExprPtr realize(Rng& rng, const Opt& o, const TypePtr& t, int depth, Mode mode);
  ExprPtr random_tree_using(Rng& rng, const TypePtr& t, int maxDepth);
  ExprPtr random_lambda(Rng& rng, const TypePtr& fnType);
  ValuePtr random_literal(Rng& rng, const TypePtr& t);

  const Registry* registry_;
  Scope scope_;
  TypeUniverse universe_;
  GenParams params_;

  bool lambdaBody_ = false;
  std::string paramName_;
  TypePtr paramType_;

  std::map<std::string, std::vector<PrimInst>> instCache_;
  std::map<std::string, bool> growCache_, fullCache_, usingCache_;
  std::map<std::string, std::unique_ptr<GenContext>> lambdaCtx_;
};

}  // namespace foldsynth
