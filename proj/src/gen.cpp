// SPDX-License-Identifier: MIT

#include "foldsynth/gen.hpp"

#include <algorithm>
#include <cassert>

namespace foldsynth {

// ---------------------------------------------------------------------------
// TypeUniverse

void TypeUniverse::add(const TypePtr& t) { collect_subterms(t, types); }

bool TypeUniverse::contains(const TypePtr& t) const {
  return std::any_of(types.begin(), types.end(),
                     [&](const TypePtr& u) { return type_equal(t, u); });
}

// A function-typed argument is admissible when all the data types it moves
// are; a data-typed argument must itself be in the universe.
bool GenContext::universe_admits(const TypePtr& t) const {
  if (t->tag == Type::Tag::Fn) {
    for (const auto& part : t->args)
      if (!universe_admits(part)) return false;
    return true;
  }
  return universe_.contains(t);
}

// ---------------------------------------------------------------------------
// GenContext

GenContext::GenContext(const Registry& registry, Scope scope, TypeUniverse universe,
                       GenParams params)
    : registry_(&registry),
      scope_(std::move(scope)),
      universe_(std::move(universe)),
      params_(params) {}

GenContext::GenContext(const GenContext& parent, std::string paramName, TypePtr paramType)
    : registry_(parent.registry_),
      universe_(parent.universe_),
      params_(parent.params_),
      lambdaBody_(true),
      paramName_(std::move(paramName)),
      paramType_(std::move(paramType)) {
  // Lambda bodies see only the lambda's own parameter.
  scope_.bindings.emplace_back(paramName_, paramType_);
}

GenContext* GenContext::lambda_context(const TypePtr& paramType) {
  std::string key = render_type(paramType);
  auto it = lambdaCtx_.find(key);
  if (it == lambdaCtx_.end()) {
    it = lambdaCtx_
             .emplace(key, std::unique_ptr<GenContext>(new GenContext(*this, "y", paramType)))
             .first;
  }
  return it->second.get();
}

bool GenContext::lambda_feasible(const TypePtr& fnType) {
  if (lambdaBody_) return false;  // nested lambdas are only the identity
  if (fn_arity(fnType) != 1) return false;
  return lambda_context(fnType->args[0])
      ->possible_using(fnType->args[1], params_.lambdaDepth);
}

const std::vector<PrimInst>& GenContext::instantiations(const TypePtr& t) {
  std::string key = render_type(t);
  auto it = instCache_.find(key);
  if (it != instCache_.end()) return it->second;

  std::vector<PrimInst> out;
  std::vector<TypePtr> domain;  // candidates for unconstrained variables
  for (const TypePtr& u : universe_.types)
    if (!contains_fn(u)) domain.push_back(u);

  for (const Primitive* p : registry_->prims) {
    VarSupply supply;
    std::map<int, TypePtr> mapping;
    TypePtr sig = instantiate(p->signature(), supply, mapping);
    Subst subst;
    if (!unify_into(subst, sig->args.back(), t)) continue;

    // Variables the target leaves free, in order of appearance.
    std::vector<int> freeVars;
    auto collect_free = [&](const TypePtr& x, auto&& self) -> void {
      if (x->tag == Type::Tag::Var) {
        if (std::find(freeVars.begin(), freeVars.end(), x->var) == freeVars.end())
          freeVars.push_back(x->var);
        return;
      }
      for (const auto& c : x->args) self(c, self);
    };
    for (std::size_t i = 0; i + 1 < sig->args.size(); ++i)
      collect_free(apply_subst(subst, sig->args[i]), collect_free);

    std::vector<std::size_t> choice(freeVars.size(), 0);
    for (;;) {
      Subst s2 = subst;
      bool ok = true;
      for (std::size_t i = 0; i < freeVars.size(); ++i)
        if (!unify_into(s2, t_var(freeVars[i]), domain[choice[i]])) ok = false;
      if (ok) {
        // Every signature variable must land on a ground, function-free
        // type; comparable-constrained ones additionally on a comparable
        // (always true once function-free).
        for (const auto& [orig, fresh] : mapping) {
          TypePtr final_ = apply_subst(s2, fresh);
          if (contains_var(final_) || contains_fn(final_)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        PrimInst inst;
        inst.prim = p;
        inst.types.reserve(sig->args.size());
        for (std::size_t i = 0; i < sig->args.size(); ++i) {
          TypePtr g = apply_subst(s2, sig->args[i]);
          // Arguments must stay inside the pattern's type universe, or the
          // generator would have to conjure values of foreign types (the
          // function set is inferred from the problem's types).
          if (contains_var(g) || (i + 1 < sig->args.size() && !universe_admits(g))) {
            ok = false;
            break;
          }
          inst.types.push_back(std::move(g));
        }
        if (ok) out.push_back(std::move(inst));
      }
      // Next assignment.
      if (freeVars.empty()) break;
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == domain.size()) choice[i++] = 0;
      if (i == choice.size()) break;
    }
  }
  return instCache_.emplace(std::move(key), std::move(out)).first->second;
}

bool GenContext::leaf_exists(const TypePtr& t) {
  for (const TypePtr& at : scope_.argTypes)
    if (type_equal(at, t)) return true;
  for (const auto& b : scope_.bindings)
    if (type_equal(b.second, t)) return true;
  switch (t->tag) {
    case Type::Tag::Base:
      return true;  // random literal
    case Type::Tag::List:
    case Type::Tag::Map:
    case Type::Tag::Set:
    case Type::Tag::Maybe:
      return true;  // empty container / Nothing
    case Type::Tag::Fn: {
      for (const Primitive* p : registry_->prims) {
        Subst s;
        if (!unify_into(s, p->signature(), t)) continue;
        bool ok = true;
        for (int cv : p->comparableVars) {
          TypePtr bound = apply_subst(s, t_var(cv));
          if (contains_var(bound) || !is_comparable(bound)) {
            ok = false;
            break;
          }
        }
        if (ok) return true;
      }
      if (lambdaBody_) {
        // Nested identity lambda.
        return fn_arity(t) == 1 && type_equal(t->args[0], t->args[1]);
      }
      return lambda_feasible(t);
    }
    default:
      return false;  // pairs are built with the pair primitive
  }
}

bool GenContext::possible(const TypePtr& t, int depth) {
  if (depth < 1) return false;
  std::string key = render_type(t) + '|' + std::to_string(depth);
  auto it = growCache_.find(key);
  if (it != growCache_.end()) return it->second;
  growCache_.emplace(key, false);  // guard against accidental cycles

  bool ok = leaf_exists(t);
  if (!ok && depth >= 2 && t->tag != Type::Tag::Fn) {
    for (const PrimInst& inst : instantiations(t)) {
      bool all = true;
      for (std::size_t i = 0; i + 1 < inst.types.size(); ++i)
        if (!possible(inst.types[i], depth - 1)) {
          all = false;
          break;
        }
      if (all) {
        ok = true;
        break;
      }
    }
  }
  growCache_[key] = ok;
  return ok;
}

bool GenContext::possible_full(const TypePtr& t, int depth) {
  if (depth < 1) return false;
  if (depth == 1) return leaf_exists(t);
  std::string key = render_type(t) + '|' + std::to_string(depth);
  auto it = fullCache_.find(key);
  if (it != fullCache_.end()) return it->second;
  fullCache_.emplace(key, false);

  bool ok = false;
  if (t->tag != Type::Tag::Fn) {
    for (const PrimInst& inst : instantiations(t)) {
      bool all = true;
      for (std::size_t i = 0; i + 1 < inst.types.size(); ++i)
        if (!possible_full(inst.types[i], depth - 1)) {
          all = false;
          break;
        }
      if (all) {
        ok = true;
        break;
      }
    }
  }
  fullCache_[key] = ok;
  return ok;
}

bool GenContext::possible_using(const TypePtr& t, int depth) {
  if (!lambdaBody_ || depth < 1) return false;
  if (type_equal(t, paramType_)) return true;
  if (depth < 2) return false;
  std::string key = render_type(t) + '|' + std::to_string(depth);
  auto it = usingCache_.find(key);
  if (it != usingCache_.end()) return it->second;
  usingCache_.emplace(key, false);

  bool ok = false;
  if (t->tag != Type::Tag::Fn) {
    for (const PrimInst& inst : instantiations(t)) {
      for (std::size_t j = 0; !ok && j + 1 < inst.types.size(); ++j) {
        if (!possible_using(inst.types[j], depth - 1)) continue;
        bool rest = true;
        for (std::size_t i = 0; i + 1 < inst.types.size(); ++i)
          if (i != j && !possible(inst.types[i], depth - 1)) {
            rest = false;
            break;
          }
        ok = rest;
      }
      if (ok) break;
    }
  }
  usingCache_[key] = ok;
  return ok;
}

void GenContext::options(const TypePtr& t, int depth, Mode mode, std::vector<Opt>& out) {
  out.clear();
  if (depth < 1) return;

  if (mode == Mode::Using) {
    if (type_equal(t, paramType_)) {
      Opt o;
      o.kind = Opt::Kind::Bind;
      o.name = &paramName_;
      o.bindType = &paramType_;
      out.push_back(o);
    }
    if (depth >= 2 && t->tag != Type::Tag::Fn) {
      const auto& insts = instantiations(t);
      for (std::size_t k = 0; k < insts.size(); ++k) {
        const PrimInst& inst = insts[k];
        bool usable = false;
        for (std::size_t j = 0; !usable && j + 1 < inst.types.size(); ++j) {
          if (!possible_using(inst.types[j], depth - 1)) continue;
          bool rest = true;
          for (std::size_t i = 0; i + 1 < inst.types.size(); ++i)
            if (i != j && !possible(inst.types[i], depth - 1)) {
              rest = false;
              break;
            }
          usable = rest;
        }
        if (usable) {
          Opt o;
          o.kind = Opt::Kind::App;
          o.index = static_cast<int>(k);
          out.push_back(o);
        }
      }
    }
    return;
  }

  bool leavesAllowed = mode == Mode::Grow || depth == 1;
  if (leavesAllowed) {
    for (std::size_t i = 0; i < scope_.argTypes.size(); ++i)
      if (type_equal(scope_.argTypes[i], t)) {
        Opt o;
        o.kind = Opt::Kind::Arg;
        o.index = static_cast<int>(i);
        out.push_back(o);
      }
    for (const auto& b : scope_.bindings)
      if (type_equal(b.second, t)) {
        Opt o;
        o.kind = Opt::Kind::Bind;
        o.name = &b.first;
        o.bindType = &b.second;
        out.push_back(o);
      }
    switch (t->tag) {
      case Type::Tag::Base: {
        Opt o;
        o.kind = Opt::Kind::Lit;
        out.push_back(o);
        break;
      }
      case Type::Tag::List:
      case Type::Tag::Map:
      case Type::Tag::Set:
      case Type::Tag::Maybe: {
        Opt o;
        o.kind = Opt::Kind::Empty;
        out.push_back(o);
        break;
      }
      case Type::Tag::Fn: {
        for (const Primitive* p : registry_->prims) {
          Subst s;
          if (unify_into(s, p->signature(), t)) {
            bool ok = true;
            for (int cv : p->comparableVars) {
              // Signature variables are numbered as written; resolve them
              // through the unifier and require comparability.
              TypePtr bound = apply_subst(s, t_var(cv));
              if (contains_var(bound) || !is_comparable(bound)) {
                ok = false;
                break;
              }
            }
            if (ok) {
              Opt o;
              o.kind = Opt::Kind::PrimClos;
              o.prim = p;
              out.push_back(o);
            }
          }
        }
        if (lambdaBody_) {
          if (fn_arity(t) == 1 && type_equal(t->args[0], t->args[1])) {
            Opt o;
            o.kind = Opt::Kind::Ident;
            out.push_back(o);
          }
        } else if (lambda_feasible(t)) {
          Opt o;
          o.kind = Opt::Kind::Lam;
          out.push_back(o);
        }
        break;
      }
      default:
        break;
    }
  }

  if (depth >= 2 && t->tag != Type::Tag::Fn) {
    const auto& insts = instantiations(t);
    for (std::size_t k = 0; k < insts.size(); ++k) {
      const PrimInst& inst = insts[k];
      bool all = true;
      for (std::size_t i = 0; all && i + 1 < inst.types.size(); ++i) {
        all = mode == Mode::FullStrict ? possible_full(inst.types[i], depth - 1)
                                       : possible(inst.types[i], depth - 1);
      }
      if (all) {
        Opt o;
        o.kind = Opt::Kind::App;
        o.index = static_cast<int>(k);
        out.push_back(o);
      }
    }
  }
}

ValuePtr GenContext::random_literal(Rng& rng, const TypePtr& t) {
  switch (t->base) {
    case BaseKind::Int:
      return v_int(rng.uniform_int(params_.intLo, params_.intHi));
    case BaseKind::Float:
      return v_float(rng.uniform_real(params_.floatLo, params_.floatHi));
    case BaseKind::Bool:
      return v_bool(rng.coin(0.5));
    case BaseKind::Char: {
      // Printable ASCII plus newline.
      std::size_t i = rng.index(96);
      return v_char(i == 95 ? '\n' : static_cast<char>(32 + i));
    }
  }
  return v_int(0);
}

ExprPtr GenContext::random_lambda(Rng& rng, const TypePtr& fnType) {
  const TypePtr& p = fnType->args[0];
  const TypePtr& r = fnType->args[1];
  GenContext* ctx = lambda_context(p);
  ExprPtr body = ctx->random_tree_using(rng, r, params_.lambdaDepth);
  if (!body) return nullptr;
  return e_lambda("y", p, std::move(body));
}

ExprPtr GenContext::realize(Rng& rng, const Opt& o, const TypePtr& t, int depth, Mode mode) {
  switch (o.kind) {
    case Opt::Kind::Arg:
      return e_arg(o.index, scope_.argTypes[static_cast<std::size_t>(o.index)]);
    case Opt::Kind::Bind:
      return e_bind(*o.name, *o.bindType);
    case Opt::Kind::Lit:
      return e_lit(random_literal(rng, t), t);
    case Opt::Kind::Empty:
      switch (t->tag) {
        case Type::Tag::List:
          return e_lit(v_list({}), t);
        case Type::Tag::Map:
          return e_lit(v_map({}), t);
        case Type::Tag::Set:
          return e_lit(v_set({}), t);
        default:
          return e_lit(v_nothing(), t);
      }
    case Opt::Kind::PrimClos:
      return e_lit(v_closure_prim(o.prim, {}), t);
    case Opt::Kind::Lam:
      return random_lambda(rng, t);
    case Opt::Kind::Ident:
      return e_lambda("z", t->args[0], e_bind("z", t->args[0]));
    case Opt::Kind::App: {
      const PrimInst& inst = instantiations(t)[static_cast<std::size_t>(o.index)];
      std::size_t n = inst.types.size() - 1;
      std::vector<ExprPtr> children(n);
      if (mode == Mode::Using) {
        std::vector<std::size_t> capable;
        for (std::size_t j = 0; j < n; ++j) {
          if (!possible_using(inst.types[j], depth - 1)) continue;
          bool rest = true;
          for (std::size_t i = 0; i < n; ++i)
            if (i != j && !possible(inst.types[i], depth - 1)) {
              rest = false;
              break;
            }
          if (rest) capable.push_back(j);
        }
        std::size_t carrier = capable[rng.index(capable.size())];
        for (std::size_t i = 0; i < n; ++i) {
          children[i] = i == carrier ? random_tree_using(rng, inst.types[i], depth - 1)
                                     : random_tree(rng, inst.types[i], depth - 1, false);
          if (!children[i]) return nullptr;
        }
      } else {
        bool full = mode == Mode::FullStrict;
        for (std::size_t i = 0; i < n; ++i) {
          children[i] = random_tree(rng, inst.types[i], depth - 1, full);
          if (!children[i]) return nullptr;
        }
      }
      return e_apply(inst.prim, inst.types, std::move(children));
    }
  }
  return nullptr;
}

ExprPtr GenContext::random_tree(Rng& rng, const TypePtr& t, int maxDepth, bool full) {
  std::vector<Opt> opts;
  if (full && maxDepth >= 2) {
    options(t, maxDepth, Mode::FullStrict, opts);
    if (!opts.empty())
      return realize(rng, opts[rng.index(opts.size())], t, maxDepth, Mode::FullStrict);
  }
  options(t, maxDepth, Mode::Grow, opts);
  if (opts.empty()) return nullptr;
  return realize(rng, opts[rng.index(opts.size())], t, maxDepth, Mode::Grow);
}

ExprPtr GenContext::random_tree_using(Rng& rng, const TypePtr& t, int maxDepth) {
  std::vector<Opt> opts;
  options(t, maxDepth, Mode::Using, opts);
  if (opts.empty()) return nullptr;
  return realize(rng, opts[rng.index(opts.size())], t, maxDepth, Mode::Using);
}

}  // namespace foldsynth
