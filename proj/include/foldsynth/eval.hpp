// SPDX-License-Identifier: MIT
//
// Budgeted interpreter. Every Apply evaluation costs one step; unbounded
// loops (scheme unfolds, sequence-building primitives) charge a shared
// iteration counter. Exhausting either budget raises BudgetExceeded, which
// fitness treats exactly like any other runtime error.

#pragma once

#include <stdexcept>

#include "foldsynth/expr.hpp"
#include "foldsynth/value.hpp"

namespace foldsynth {

enum class EvalErrorKind {
  DivByZero,
  BudgetExceeded,
  Overflow,
  NumericDomain,
  PartialFunction,
  InvalidArgument,
};

const char* eval_error_name(EvalErrorKind k);

struct EvalError {
  EvalErrorKind kind;
};

struct EvalBudget {
  long long maxSteps = 10000;
  long long maxIterations = 10000;
};

struct EvalState {
  long long steps = 0;
  long long iterations = 0;
  EvalBudget budget;

  void step() {
    if (++steps > budget.maxSteps) throw EvalError{EvalErrorKind::BudgetExceeded};
  }
  void iterate() {
    if (++iterations > budget.maxIterations) throw EvalError{EvalErrorKind::BudgetExceeded};
  }
};

// Evaluates an expression; throws EvalError on any runtime failure.
ValuePtr evaluate(const ExprPtr& e, const Env& env, EvalState& st);

// Applies a closure value (either flavor) to one argument.
ValuePtr call_closure(EvalState& st, const ValuePtr& fn, const ValuePtr& arg);

}  // namespace foldsynth
