// SPDX-License-Identifier: MIT
//
// Program trees. A program gene is an immutable expression tree; mutation
// and crossover rebuild only the spine above a replaced node, so subtrees
// are shared freely. Every node caches its ground output type: local search
// and subtree crossover both dispatch on it.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "foldsynth/types.hpp"
#include "foldsynth/value.hpp"

namespace foldsynth {

struct Primitive;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Tag { Apply, Literal, ArgRef, BindingRef, Lambda };
  Tag tag = Tag::Literal;
  TypePtr type;  // ground output type of this node

  // Apply
  const Primitive* prim = nullptr;
  std::vector<TypePtr> typeInst;  // instantiated parameter types + result
  std::vector<ExprPtr> children;

  // Literal
  ValuePtr lit;

  // ArgRef
  int argIndex = -1;

  // BindingRef name / Lambda parameter name
  std::string name;

  // Lambda
  TypePtr paramType;
  ExprPtr body;
};

ExprPtr e_apply(const Primitive* prim, std::vector<TypePtr> typeInst,
                std::vector<ExprPtr> children);
ExprPtr e_lit(ValuePtr v, TypePtr type);
ExprPtr e_arg(int index, TypePtr type);
ExprPtr e_bind(std::string name, TypePtr type);
ExprPtr e_lambda(std::string param, TypePtr paramType, ExprPtr body);

// Node count includes lambda bodies.
int node_count(const ExprPtr& e);
// Tree depth for the slot-depth limit; a lambda is a leaf of the main tree
// (its body lives under the separate lambda depth limit).
int expr_depth(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Positions eligible for mutation / crossover / local search: pre-order
// indices over the main tree, where a lambda occupies a single position and
// its body is not enumerated (lambdas stay atomic).
int mutable_position_count(const ExprPtr& e);
ExprPtr subtree_at_position(const ExprPtr& e, int position);
int depth_of_position(const ExprPtr& e, int position);  // root = 1
ExprPtr replace_position(const ExprPtr& e, int position, const ExprPtr& replacement);

// Canonical re-parseable rendering: prefix application, `\y -> body`
// lambdas, `if c t e`, args as x0, x1, ..., bindings by name.
std::string render_expr(const ExprPtr& e);

}  // namespace foldsynth
