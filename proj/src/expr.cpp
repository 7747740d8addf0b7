// SPDX-License-Identifier: MIT

#include "foldsynth/expr.hpp"

#include "foldsynth/prims.hpp"

namespace foldsynth {

ExprPtr e_apply(const Primitive* prim, std::vector<TypePtr> typeInst,
                std::vector<ExprPtr> children) {
  auto e = std::make_shared<Expr>();
  e->tag = Expr::Tag::Apply;
  e->prim = prim;
  e->typeInst = std::move(typeInst);
  e->children = std::move(children);
  e->type = e->typeInst.back();
  return e;
}

ExprPtr e_lit(ValuePtr v, TypePtr type) {
  auto e = std::make_shared<Expr>();
  e->tag = Expr::Tag::Literal;
  e->lit = std::move(v);
  e->type = std::move(type);
  return e;
}

ExprPtr e_arg(int index, TypePtr type) {
  auto e = std::make_shared<Expr>();
  e->tag = Expr::Tag::ArgRef;
  e->argIndex = index;
  e->type = std::move(type);
  return e;
}

ExprPtr e_bind(std::string name, TypePtr type) {
  auto e = std::make_shared<Expr>();
  e->tag = Expr::Tag::BindingRef;
  e->name = std::move(name);
  e->type = std::move(type);
  return e;
}

ExprPtr e_lambda(std::string param, TypePtr paramType, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->tag = Expr::Tag::Lambda;
  e->name = std::move(param);
  e->paramType = paramType;
  e->type = t_fn({std::move(paramType)}, body->type);
  e->body = std::move(body);
  return e;
}

int node_count(const ExprPtr& e) {
  switch (e->tag) {
    case Expr::Tag::Apply: {
      int n = 1;
      for (const auto& c : e->children) n += node_count(c);
      return n;
    }
    case Expr::Tag::Lambda:
      return 1 + node_count(e->body);
    default:
      return 1;
  }
}

int expr_depth(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Apply) return 1;  // lambdas are main-tree leaves
  int d = 0;
  for (const auto& c : e->children) d = std::max(d, expr_depth(c));
  return 1 + d;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  if (!type_equal(a->type, b->type)) return false;
  switch (a->tag) {
    case Expr::Tag::Apply: {
      if (a->prim != b->prim) return false;
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!expr_equal(a->children[i], b->children[i])) return false;
      return true;
    }
    case Expr::Tag::Literal:
      return value_equal(a->lit, b->lit);
    case Expr::Tag::ArgRef:
      return a->argIndex == b->argIndex;
    case Expr::Tag::BindingRef:
      return a->name == b->name;
    case Expr::Tag::Lambda:
      return a->name == b->name && type_equal(a->paramType, b->paramType) &&
             expr_equal(a->body, b->body);
  }
  return false;
}

int mutable_position_count(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Apply) return 1;
  int n = 1;
  for (const auto& c : e->children) n += mutable_position_count(c);
  return n;
}

namespace {

const ExprPtr* find_position(const ExprPtr& e, int& position) {
  if (position == 0) return &e;
  --position;
  if (e->tag == Expr::Tag::Apply) {
    for (const auto& c : e->children) {
      const ExprPtr* hit = find_position(c, position);
      if (hit) return hit;
    }
  }
  return nullptr;
}

int find_depth(const ExprPtr& e, int& position, int depth) {
  if (position == 0) return depth;
  --position;
  if (e->tag == Expr::Tag::Apply) {
    for (const auto& c : e->children) {
      int d = find_depth(c, position, depth + 1);
      if (d > 0) return d;
    }
  }
  return 0;
}

ExprPtr rebuild(const ExprPtr& e, int& position, const ExprPtr& replacement) {
  if (position == 0) {
    position = -1;  // placed; stop traversal
    return replacement;
  }
  --position;
  if (e->tag != Expr::Tag::Apply) return e;
  bool changed = false;
  std::vector<ExprPtr> children = e->children;
  for (auto& c : children) {
    if (position < 0) break;
    ExprPtr nc = rebuild(c, position, replacement);
    if (nc.get() != c.get()) {
      c = std::move(nc);
      changed = true;
    }
  }
  if (!changed) return e;
  auto out = std::make_shared<Expr>(*e);
  out->children = std::move(children);
  return out;
}

}  // namespace

ExprPtr subtree_at_position(const ExprPtr& e, int position) {
  const ExprPtr* hit = find_position(e, position);
  return hit ? *hit : nullptr;
}

int depth_of_position(const ExprPtr& e, int position) { return find_depth(e, position, 1); }

ExprPtr replace_position(const ExprPtr& e, int position, const ExprPtr& replacement) {
  return rebuild(e, position, replacement);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_rec(const ExprPtr& e, std::string& out, bool argContext) {
  switch (e->tag) {
    case Expr::Tag::Apply: {
      if (argContext) out += '(';
      out += e->prim->name;
      for (const auto& c : e->children) {
        out += ' ';
        render_rec(c, out, true);
      }
      if (argContext) out += ')';
      return;
    }
    case Expr::Tag::Literal:
      // A bare primitive used as a function value renders as its name.
      if (e->lit->tag == Value::Tag::Closure && e->lit->prim && e->lit->applied.empty())
        out += e->lit->prim->name;
      else
        out += render_value(e->lit);
      return;
    case Expr::Tag::ArgRef:
      out += 'x';
      out += std::to_string(e->argIndex);
      return;
    case Expr::Tag::BindingRef:
      out += e->name;
      return;
    case Expr::Tag::Lambda: {
      if (argContext) out += '(';
      out += '\\';
      out += e->name;
      out += " -> ";
      render_rec(e->body, out, false);
      if (argContext) out += ')';
      return;
    }
  }
}

}  // namespace

std::string render_expr(const ExprPtr& e) {
  std::string out;
  render_rec(e, out, false);
  return out;
}

}  // namespace foldsynth
