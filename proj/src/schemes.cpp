// SPDX-License-Identifier: MIT

#include "foldsynth/schemes.hpp"

#include <algorithm>

namespace foldsynth {

const char* pattern_name(PatternId id) {
  switch (id) {
    case PatternId::NoScheme: return "NoScheme";
    case PatternId::CataList: return "CataList";
    case PatternId::CataSet: return "CataSet";
    case PatternId::CataMap: return "CataMap";
    case PatternId::CurriedCata: return "CurriedCata";
    case PatternId::Histo: return "Histo";
    case PatternId::Ana: return "Ana";
    case PatternId::Accu: return "Accu";
    case PatternId::Hylo: return "Hylo";
  }
  return "?";
}

std::optional<PatternId> pattern_from_name(std::string_view name) {
  for (PatternId id : kAllPatterns)
    if (name == pattern_name(id)) return id;
  return std::nullopt;
}

int pattern_slot_count(PatternId id) {
  switch (id) {
    case PatternId::NoScheme: return 1;
    case PatternId::CataList:
    case PatternId::CataSet:
    case PatternId::CataMap:
    case PatternId::CurriedCata:
    case PatternId::Histo: return 2;
    case PatternId::Ana:
    case PatternId::Accu: return 4;
    case PatternId::Hylo: return 5;
  }
  return 0;
}

bool pattern_needs_unbound(PatternId id) {
  return id == PatternId::Accu || id == PatternId::Hylo;
}

std::vector<PatternId> applicable_patterns(const std::vector<TypePtr>& argTypes,
                                           const TypePtr& returnType) {
  auto arg0_is = [&](Type::Tag tag) {
    return !argTypes.empty() && argTypes[0]->tag == tag;
  };
  std::vector<PatternId> out;
  for (PatternId id : kAllPatterns) {
    bool ok = false;
    switch (id) {
      case PatternId::NoScheme: ok = true; break;
      case PatternId::CataList: ok = arg0_is(Type::Tag::List); break;
      case PatternId::CataSet: ok = arg0_is(Type::Tag::Set); break;
      case PatternId::CataMap: ok = arg0_is(Type::Tag::Map); break;
      case PatternId::CurriedCata:
        ok = argTypes.size() == 2 && argTypes[0]->tag == Type::Tag::List;
        break;
      case PatternId::Histo: ok = arg0_is(Type::Tag::List); break;
      case PatternId::Ana:
        ok = !argTypes.empty() && returnType->tag == Type::Tag::List;
        break;
      case PatternId::Accu: ok = arg0_is(Type::Tag::List); break;
      case PatternId::Hylo: ok = !argTypes.empty(); break;
    }
    if (ok) out.push_back(id);
  }
  return out;
}

namespace {

Scope args_scope(const std::vector<TypePtr>& argTypes) {
  Scope s;
  s.argTypes = argTypes;
  return s;
}

void bind(Scope& s, const char* name, TypePtr t) {
  s.bindings.emplace_back(name, std::move(t));
}

SlotSpec slot(const char* name, TypePtr type, Scope scope) {
  return SlotSpec{name, std::move(type), std::move(scope)};
}

TypePtr require_unbound(const std::map<std::string, TypePtr>& unbound, PatternId id) {
  auto it = unbound.find("a");
  if (it == unbound.end())
    throw MissingUnboundType(std::string(pattern_name(id)) +
                             " requires the unbound type 'a'");
  return it->second;
}

}  // namespace

PatternInstance instantiate_pattern(PatternId id, const std::vector<TypePtr>& argTypes,
                                    const TypePtr& returnType,
                                    const std::map<std::string, TypePtr>& unbound) {
  auto applicable = applicable_patterns(argTypes, returnType);
  if (std::find(applicable.begin(), applicable.end(), id) == applicable.end())
    throw PatternError(std::string(pattern_name(id)) + " is not applicable to this signature");

  PatternInstance pat;
  pat.id = id;
  pat.argTypes = argTypes;
  pat.returnType = returnType;
  const TypePtr& o = returnType;
  const Scope argsOnly = args_scope(argTypes);
  const Scope nothing;

  switch (id) {
    case PatternId::NoScheme: {
      pat.slots.push_back(slot("body", o, argsOnly));
      break;
    }
    case PatternId::CataList: {
      TypePtr e = argTypes[0]->args[0];
      Scope cons = argsOnly;
      Scope consBinds;
      bind(consBinds, "i", t_int());
      bind(consBinds, "x", e);
      bind(consBinds, "acc", o);
      cons.bindings = consBinds.bindings;
      pat.slots.push_back(slot("nil", o, nothing));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
    case PatternId::CataSet: {
      TypePtr e = argTypes[0]->args[0];
      Scope cons = argsOnly;
      bind(cons, "x", e);
      bind(cons, "acc", o);
      pat.slots.push_back(slot("nil", o, nothing));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
    case PatternId::CataMap: {
      TypePtr kt = argTypes[0]->args[0], vt = argTypes[0]->args[1];
      Scope cons = argsOnly;
      bind(cons, "k", kt);
      bind(cons, "v", vt);
      bind(cons, "acc", o);
      pat.slots.push_back(slot("nil", o, nothing));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
    case PatternId::CurriedCata: {
      TypePtr e = argTypes[0]->args[0];
      const TypePtr& t1 = argTypes[1];
      Scope nil;  // no argument references in either slot
      bind(nil, "ys", t1);
      Scope cons;
      bind(cons, "i", t_int());
      bind(cons, "x", e);
      bind(cons, "f", t_fn({t1}, o));
      bind(cons, "ys", t1);
      pat.slots.push_back(slot("nil", o, nil));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
    case PatternId::Histo: {
      TypePtr e = argTypes[0]->args[0];
      Scope cons = argsOnly;
      Scope consBinds;
      bind(consBinds, "i", t_int());
      bind(consBinds, "x", e);
      bind(consBinds, "acc", o);
      bind(consBinds, "tableAsList", t_list(e));
      cons.bindings = consBinds.bindings;
      pat.slots.push_back(slot("nil", o, nothing));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
    case PatternId::Ana: {
      TypePtr e = o->args[0];
      const TypePtr& seedT = argTypes[0];
      Scope withSeed = argsOnly;
      bind(withSeed, "seed", seedT);
      Scope seedOnly;  // `next` may not consult the arguments
      bind(seedOnly, "seed", seedT);
      pat.slots.push_back(slot("seed", seedT, argsOnly));
      pat.slots.push_back(slot("pred", t_bool(), withSeed));
      pat.slots.push_back(slot("elem", e, withSeed));
      pat.slots.push_back(slot("next", seedT, seedOnly));
      break;
    }
    case PatternId::Accu: {
      TypePtr a = require_unbound(unbound, id);
      TypePtr e = argTypes[0]->args[0];
      Scope step = argsOnly;
      Scope stepBinds;
      bind(stepBinds, "x", e);
      bind(stepBinds, "xs", t_list(e));
      bind(stepBinds, "s", a);
      step.bindings = stepBinds.bindings;
      Scope nil = argsOnly;
      bind(nil, "s", a);
      Scope cons = argsOnly;
      Scope consBinds;
      bind(consBinds, "x", e);
      bind(consBinds, "acc", o);
      bind(consBinds, "s", a);
      cons.bindings = consBinds.bindings;
      pat.slots.push_back(slot("st_init", a, argsOnly));
      pat.slots.push_back(slot("st_step", a, step));
      pat.slots.push_back(slot("alg_nil", o, nil));
      pat.slots.push_back(slot("alg_cons", o, cons));
      break;
    }
    case PatternId::Hylo: {
      TypePtr a = require_unbound(unbound, id);
      const TypePtr& seedT = argTypes[0];
      Scope withSeed = argsOnly;
      bind(withSeed, "seed", seedT);
      Scope cons = argsOnly;
      Scope consBinds;
      bind(consBinds, "x", a);
      bind(consBinds, "acc", o);
      cons.bindings = consBinds.bindings;
      pat.slots.push_back(slot("pred", t_bool(), withSeed));
      pat.slots.push_back(slot("elem", a, withSeed));
      pat.slots.push_back(slot("next", seedT, withSeed));
      pat.slots.push_back(slot("nil", o, nothing));
      pat.slots.push_back(slot("cons", o, cons));
      break;
    }
  }
  return pat;
}

TypeUniverse pattern_universe(const PatternInstance& pat,
                              const std::vector<TypePtr>& allowedTypes) {
  TypeUniverse u;
  for (const TypePtr& t : pat.argTypes) u.add(t);
  u.add(pat.returnType);
  for (const SlotSpec& s : pat.slots) {
    u.add(s.type);
    for (const auto& b : s.scope.bindings) u.add(b.second);
  }
  for (const TypePtr& t : allowedTypes) u.add(t);
  u.add(t_int());
  u.add(t_bool());
  return u;
}

Scope permissive_scope(const PatternInstance& pat, const SlotSpec& slot) {
  Scope s;
  s.argTypes = pat.argTypes;
  s.bindings = slot.scope.bindings;
  return s;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

Env base_env(const std::vector<ValuePtr>& args) {
  Env env;
  env.args = args;
  return env;
}

ValuePtr eval_slot(const ExprPtr& gene, Env env, EvalState& st) {
  return evaluate(gene, env, st);
}

ValuePtr run_cata_list(const PatternInstance&, const std::vector<ExprPtr>& genes,
                       const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& xs = args[0]->elems;
  ValuePtr acc = eval_slot(genes[0], base_env(args), st);
  // One env reused across the fold; closures capture by copy, so rebinding
  // per element is safe.
  Env env = base_env(args);
  env.bind("i", nullptr);
  env.bind("x", nullptr);
  env.bind("acc", nullptr);
  for (std::size_t n = xs.size(); n-- > 0;) {
    st.iterate();
    env.bindings[0].second = v_int(static_cast<long long>(n));
    env.bindings[1].second = xs[n];
    env.bindings[2].second = std::move(acc);
    acc = evaluate(genes[1], env, st);
  }
  return acc;
}

ValuePtr run_cata_set(const PatternInstance&, const std::vector<ExprPtr>& genes,
                      const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& xs = args[0]->elems;  // sorted, distinct
  ValuePtr acc = eval_slot(genes[0], base_env(args), st);
  Env env = base_env(args);
  env.bind("x", nullptr);
  env.bind("acc", nullptr);
  for (std::size_t n = xs.size(); n-- > 0;) {
    st.iterate();
    env.bindings[0].second = xs[n];
    env.bindings[1].second = std::move(acc);
    acc = evaluate(genes[1], env, st);
  }
  return acc;
}

ValuePtr run_cata_map(const PatternInstance&, const std::vector<ExprPtr>& genes,
                      const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& kvs = args[0]->entries;  // sorted by key
  ValuePtr acc = eval_slot(genes[0], base_env(args), st);
  Env env = base_env(args);
  env.bind("k", nullptr);
  env.bind("v", nullptr);
  env.bind("acc", nullptr);
  for (std::size_t n = kvs.size(); n-- > 0;) {
    st.iterate();
    env.bindings[0].second = kvs[n].first;
    env.bindings[1].second = kvs[n].second;
    env.bindings[2].second = std::move(acc);
    acc = evaluate(genes[1], env, st);
  }
  return acc;
}

ValuePtr run_curried_cata(const PatternInstance& pat, const std::vector<ExprPtr>& genes,
                          const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& xs = args[0]->elems;
  const TypePtr& t1 = pat.argTypes[1];
  // The fold accumulates a function of ys; slot programs are the lambda
  // bodies, so wrap them once and capture per-element environments.
  ExprPtr nilLambda = e_lambda("ys", t1, genes[0]);
  ExprPtr consLambda = e_lambda("ys", t1, genes[1]);
  ValuePtr g = v_closure_expr(nilLambda, base_env(args));
  for (std::size_t n = xs.size(); n-- > 0;) {
    st.iterate();
    Env captured = base_env(args);
    captured.bind("i", v_int(static_cast<long long>(n)));
    captured.bind("x", xs[n]);
    captured.bind("f", std::move(g));
    g = v_closure_expr(consLambda, std::move(captured));
  }
  return call_closure(st, g, args[1]);
}

ValuePtr run_histo(const PatternInstance&, const std::vector<ExprPtr>& genes,
                   const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& xs = args[0]->elems;
  ValuePtr acc = eval_slot(genes[0], base_env(args), st);
  // tableAsList: the already-consumed elements, most recent first. The fold
  // runs from the right, so at index n that is xs[n+1..].
  std::vector<ValuePtr> table;
  Env env = base_env(args);
  env.bind("i", nullptr);
  env.bind("x", nullptr);
  env.bind("acc", nullptr);
  env.bind("tableAsList", nullptr);
  for (std::size_t n = xs.size(); n-- > 0;) {
    st.iterate();
    env.bindings[0].second = v_int(static_cast<long long>(n));
    env.bindings[1].second = xs[n];
    env.bindings[2].second = std::move(acc);
    env.bindings[3].second = v_list(table);
    acc = evaluate(genes[1], env, st);
    table.insert(table.begin(), xs[n]);
  }
  return acc;
}

ValuePtr run_ana(const PatternInstance&, const std::vector<ExprPtr>& genes,
                 const std::vector<ValuePtr>& args, EvalState& st) {
  ValuePtr seed = eval_slot(genes[0], base_env(args), st);
  std::vector<ValuePtr> out;
  Env env = base_env(args);
  env.bind("seed", nullptr);
  for (;;) {
    st.iterate();
    env.bindings[0].second = seed;
    if (truthy(evaluate(genes[1], env, st))) break;
    out.push_back(evaluate(genes[2], env, st));
    seed = evaluate(genes[3], env, st);
  }
  return v_list(std::move(out));
}

ValuePtr run_accu(const PatternInstance&, const std::vector<ExprPtr>& genes,
                  const std::vector<ValuePtr>& args, EvalState& st) {
  const auto& xs = args[0]->elems;
  std::size_t n = xs.size();
  // Downward pass: states[k] is the state on entry to element k.
  std::vector<ValuePtr> states(n + 1);
  states[0] = eval_slot(genes[0], base_env(args), st);
  Env down = base_env(args);
  down.bind("x", nullptr);
  down.bind("xs", nullptr);
  down.bind("s", nullptr);
  for (std::size_t k = 0; k < n; ++k) {
    st.iterate();
    down.bindings[0].second = xs[k];
    down.bindings[1].second =
        v_list(std::vector<ValuePtr>(xs.begin() + static_cast<long>(k) + 1, xs.end()));
    down.bindings[2].second = states[k];
    states[k + 1] = evaluate(genes[1], down, st);
  }
  // Upward pass: each element folds with the state it was entered with.
  Env nilEnv = base_env(args);
  nilEnv.bind("s", states[n]);
  ValuePtr acc = evaluate(genes[2], nilEnv, st);
  Env up = base_env(args);
  up.bind("x", nullptr);
  up.bind("acc", nullptr);
  up.bind("s", nullptr);
  for (std::size_t k = n; k-- > 0;) {
    st.iterate();
    up.bindings[0].second = xs[k];
    up.bindings[1].second = std::move(acc);
    up.bindings[2].second = states[k];
    acc = evaluate(genes[3], up, st);
  }
  return acc;
}

ValuePtr run_hylo(const PatternInstance&, const std::vector<ExprPtr>& genes,
                  const std::vector<ValuePtr>& args, EvalState& st) {
  // Unfold from the first argument's value, then fold the virtual list.
  ValuePtr seed = args[0];
  std::vector<ValuePtr> elems;
  Env unfoldEnv = base_env(args);
  unfoldEnv.bind("seed", nullptr);
  for (;;) {
    st.iterate();
    unfoldEnv.bindings[0].second = seed;
    if (truthy(evaluate(genes[0], unfoldEnv, st))) break;
    elems.push_back(evaluate(genes[1], unfoldEnv, st));
    seed = evaluate(genes[2], unfoldEnv, st);
  }
  ValuePtr acc = eval_slot(genes[3], base_env(args), st);
  Env foldEnv = base_env(args);
  foldEnv.bind("x", nullptr);
  foldEnv.bind("acc", nullptr);
  for (std::size_t k = elems.size(); k-- > 0;) {
    st.iterate();
    foldEnv.bindings[0].second = elems[k];
    foldEnv.bindings[1].second = std::move(acc);
    acc = evaluate(genes[4], foldEnv, st);
  }
  return acc;
}

}  // namespace

ValuePtr execute_pattern(const PatternInstance& pat, const std::vector<ExprPtr>& genes,
                         const std::vector<ValuePtr>& args, EvalState& st) {
  if (genes.size() != pat.slots.size())
    throw PatternError("gene count does not match pattern slot count");
  switch (pat.id) {
    case PatternId::NoScheme:
      return eval_slot(genes[0], base_env(args), st);
    case PatternId::CataList:
      return run_cata_list(pat, genes, args, st);
    case PatternId::CataSet:
      return run_cata_set(pat, genes, args, st);
    case PatternId::CataMap:
      return run_cata_map(pat, genes, args, st);
    case PatternId::CurriedCata:
      return run_curried_cata(pat, genes, args, st);
    case PatternId::Histo:
      return run_histo(pat, genes, args, st);
    case PatternId::Ana:
      return run_ana(pat, genes, args, st);
    case PatternId::Accu:
      return run_accu(pat, genes, args, st);
    case PatternId::Hylo:
      return run_hylo(pat, genes, args, st);
  }
  throw PatternError("unknown pattern");
}

}  // namespace foldsynth
