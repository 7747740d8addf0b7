// SPDX-License-Identifier: MIT

#include "foldsynth/eval.hpp"

#include "foldsynth/prims.hpp"

namespace foldsynth {

const char* eval_error_name(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::DivByZero: return "div-by-zero";
    case EvalErrorKind::BudgetExceeded: return "budget-exceeded";
    case EvalErrorKind::Overflow: return "overflow";
    case EvalErrorKind::NumericDomain: return "numeric-domain";
    case EvalErrorKind::PartialFunction: return "partial-function";
    case EvalErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

namespace {

const Primitive* prim_if() {
  static const Primitive* p = find_prim("if");
  return p;
}
const Primitive* prim_and() {
  static const Primitive* p = find_prim("and");
  return p;
}
const Primitive* prim_or() {
  static const Primitive* p = find_prim("or");
  return p;
}

}  // namespace

ValuePtr evaluate(const ExprPtr& e, const Env& env, EvalState& st) {
  switch (e->tag) {
    case Expr::Tag::Literal:
      return e->lit;
    case Expr::Tag::ArgRef: {
      if (e->argIndex < 0 || static_cast<std::size_t>(e->argIndex) >= env.args.size())
        throw EvalError{EvalErrorKind::InvalidArgument};
      return env.args[static_cast<std::size_t>(e->argIndex)];
    }
    case Expr::Tag::BindingRef: {
      const ValuePtr* v = env.lookup(e->name);
      if (!v) throw EvalError{EvalErrorKind::InvalidArgument};
      return *v;
    }
    case Expr::Tag::Lambda:
      return v_closure_expr(e, env);
    case Expr::Tag::Apply: {
      st.step();
      const Primitive* p = e->prim;
      // Lazy special forms: `if` evaluates one branch, `and`/`or`
      // short-circuit.
      if (p->special) {
        ValuePtr c = evaluate(e->children[0], env, st);
        if (p == prim_if()) return evaluate(e->children[truthy(c) ? 1 : 2], env, st);
        if (p == prim_and())
          return truthy(c) ? evaluate(e->children[1], env, st) : v_bool(false);
        if (p == prim_or())
          return truthy(c) ? v_bool(true) : evaluate(e->children[1], env, st);
      }
      std::vector<ValuePtr> args;
      args.reserve(e->children.size());
      for (const ExprPtr& child : e->children) args.push_back(evaluate(child, env, st));
      return p->fn(st, args);
    }
  }
  throw EvalError{EvalErrorKind::InvalidArgument};
}

ValuePtr call_closure(EvalState& st, const ValuePtr& fn, const ValuePtr& arg) {
  if (fn->tag != Value::Tag::Closure) throw EvalError{EvalErrorKind::InvalidArgument};
  if (fn->lambda) {
    st.step();
    Env env = *fn->captured;
    env.bind(fn->lambda->name, arg);
    return evaluate(fn->lambda->body, env, st);
  }
  std::vector<ValuePtr> applied = fn->applied;
  applied.push_back(arg);
  if (applied.size() < fn->prim->arity())
    return v_closure_prim(fn->prim, std::move(applied));
  st.step();
  return fn->prim->fn(st, applied);
}

}  // namespace foldsynth
