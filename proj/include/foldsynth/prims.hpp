// SPDX-License-Identifier: MIT
//
// The primitive function set: polymorphic signatures plus evaluation
// semantics. Signatures follow Haskell conventions (div/mod floor-based,
// quot/rem truncating, Data.Map insertWith argument order, and so on).
// Primitives that can fail signal a runtime error; the interpreter treats
// every runtime error as infinitely bad fitness.

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "foldsynth/expr.hpp"
#include "foldsynth/types.hpp"
#include "foldsynth/value.hpp"

namespace foldsynth {

struct EvalState;

struct Primitive {
  std::string name;
  std::vector<TypePtr> params;  // scheme parameter types (vars allowed)
  TypePtr result;
  // Type vars that must be instantiated at comparable (function-free) types,
  // e.g. the `a` of eq :: a -> a -> Bool.
  std::vector<int> comparableVars;
  // Lazy special forms evaluated by the interpreter itself: if / and / or.
  bool special = false;
  std::function<ValuePtr(EvalState&, const std::vector<ValuePtr>&)> fn;

  TypePtr signature() const {
    std::vector<TypePtr> ps = params;
    TypePtr r = result;
    return t_fn(std::move(ps), std::move(r));
  }
  std::size_t arity() const { return params.size(); }
};

// The base registry in its fixed order. Pointers are stable for the process
// lifetime; expression nodes reference primitives by pointer.
const std::vector<const Primitive*>& base_registry();
const Primitive* find_prim(const std::string& name);

// A registry view = base set plus problem-supplied user primitives.
struct Registry {
  std::vector<const Primitive*> prims;

  static Registry base();
  const Primitive* find(const std::string& name) const;
  void add(const Primitive* p) { prims.push_back(p); }
};

}  // namespace foldsynth
