// SPDX-License-Identifier: MIT

#include "foldsynth/expr_parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>

namespace foldsynth {

namespace {

// ---------------------------------------------------------------------------
// Tokens

struct Token {
  enum class Kind { LParen, RParen, LBracket, RBracket, Comma, Backslash, Arrow,
                    Number, String, Char, Braced, Ident, End };
  Kind kind = Kind::End;
  std::string text;  // raw text (including quotes / braces for literals)
  bool isFloat = false;
};

[[noreturn]] void fail(const std::string& what) { throw ExprParseError(what); }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string text = {}, bool isFloat = false) {
    out.push_back(Token{k, std::move(text), isFloat});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') { push(Token::Kind::LParen); ++i; continue; }
    if (c == ')') { push(Token::Kind::RParen); ++i; continue; }
    if (c == '[') { push(Token::Kind::LBracket); ++i; continue; }
    if (c == ']') { push(Token::Kind::RBracket); ++i; continue; }
    if (c == ',') { push(Token::Kind::Comma); ++i; continue; }
    if (c == '\\') { push(Token::Kind::Backslash); ++i; continue; }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      push(Token::Kind::Arrow);
      i += 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      // Quoted literal; keep raw text, value parsing resolves escapes.
      std::size_t start = i++;
      while (i < s.size() && s[i] != c) {
        if (s[i] == '\\') ++i;
        ++i;
      }
      if (i >= s.size()) fail("unterminated quoted literal");
      ++i;
      push(c == '"' ? Token::Kind::String : Token::Kind::Char,
           std::string(s.substr(start, i - start)));
      continue;
    }
    if (c == '{') {
      // Balanced brace scan for Map/Set literals, skipping quoted contents.
      std::size_t start = i;
      int depth = 0;
      while (i < s.size()) {
        char d = s[i];
        if (d == '"' || d == '\'') {
          char q = d;
          ++i;
          while (i < s.size() && s[i] != q) {
            if (s[i] == '\\') ++i;
            ++i;
          }
          if (i >= s.size()) fail("unterminated quoted literal");
          ++i;
          continue;
        }
        if (d == '{') ++depth;
        if (d == '}' && --depth == 0) {
          ++i;
          break;
        }
        ++i;
      }
      if (depth != 0) fail("unbalanced braces");
      push(Token::Kind::Braced, std::string(s.substr(start, i - start)));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t start = i;
      if (c == '-') ++i;
      bool isFloat = false;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        isFloat = true;
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        isFloat = true;
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      push(Token::Kind::Number, std::string(s.substr(start, i - start)), isFloat);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      push(Token::Kind::Ident, std::string(s.substr(start, i - start)));
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back(Token{});
  return out;
}

// ---------------------------------------------------------------------------
// Untyped tree

struct UNode;
using UNodePtr = std::unique_ptr<UNode>;

struct UNode {
  enum class Kind { Num, Str, Chr, BoolLit, Nil, ListLit, PairLit, Braced, NothingLit,
                    JustLit, ArgRef, Binding, PrimValue, App, Lam };
  Kind kind;
  std::string text;  // raw literal text / identifier / lambda parameter
  bool isFloat = false;
  int argIndex = -1;
  const Primitive* prim = nullptr;
  std::vector<UNodePtr> children;

  // Filled in during inference.
  TypePtr ty;
  std::vector<TypePtr> instTypes;  // App: instantiated params + result
  std::vector<std::pair<int, int>> comparableInst;  // (orig var, fresh var)
};

UNodePtr u_node(UNode::Kind k) {
  auto n = std::make_unique<UNode>();
  n->kind = k;
  return n;
}

struct Parser {
  const std::vector<Token>& ts;
  std::size_t pos = 0;

  const Token& peek() const { return ts[pos]; }
  Token next() { return ts[pos++]; }
  bool at_atom_start() const {
    switch (peek().kind) {
      case Token::Kind::LParen:
      case Token::Kind::LBracket:
      case Token::Kind::Number:
      case Token::Kind::String:
      case Token::Kind::Char:
      case Token::Kind::Braced:
      case Token::Kind::Ident:
        return true;
      default:
        return false;
    }
  }

  UNodePtr parse_expr() {
    if (peek().kind == Token::Kind::Backslash) return parse_lambda();
    return parse_app();
  }

  UNodePtr parse_lambda() {
    next();  // backslash
    if (peek().kind != Token::Kind::Ident) fail("expected lambda parameter");
    std::string param = next().text;
    if (next().kind != Token::Kind::Arrow) fail("expected -> after lambda parameter");
    auto n = u_node(UNode::Kind::Lam);
    n->text = std::move(param);
    n->children.push_back(parse_expr());
    return n;
  }

  UNodePtr parse_app() {
    UNodePtr head = parse_atom();
    if (!at_atom_start()) return head;
    std::vector<UNodePtr> args;
    while (at_atom_start()) args.push_back(parse_atom());
    if (head->kind == UNode::Kind::Binding && head->text == "Just") {
      if (args.size() != 1) fail("Just takes exactly one argument");
      auto n = u_node(UNode::Kind::JustLit);
      n->children.push_back(std::move(args[0]));
      return n;
    }
    if (head->kind != UNode::Kind::Binding && head->kind != UNode::Kind::PrimValue)
      fail("application head must be a function name");
    auto n = u_node(UNode::Kind::App);
    n->text = head->text;
    n->children = std::move(args);
    return n;
  }

  UNodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Number: {
        auto n = u_node(UNode::Kind::Num);
        n->text = next().text;
        n->isFloat = t.isFloat;
        return n;
      }
      case Token::Kind::String: {
        auto n = u_node(UNode::Kind::Str);
        n->text = next().text;
        return n;
      }
      case Token::Kind::Char: {
        auto n = u_node(UNode::Kind::Chr);
        n->text = next().text;
        return n;
      }
      case Token::Kind::Braced: {
        auto n = u_node(UNode::Kind::Braced);
        n->text = next().text;
        return n;
      }
      case Token::Kind::Ident: {
        std::string name = next().text;
        if (name == "True" || name == "False") {
          auto n = u_node(UNode::Kind::BoolLit);
          n->text = std::move(name);
          return n;
        }
        if (name == "Nothing") return u_node(UNode::Kind::NothingLit);
        // Everything else is resolved during inference (binding, argument
        // reference, or primitive); "Just" is recognized in parse_app.
        auto n = u_node(UNode::Kind::Binding);
        n->text = std::move(name);
        return n;
      }
      case Token::Kind::LBracket: {
        next();
        auto n = u_node(UNode::Kind::ListLit);
        if (peek().kind == Token::Kind::RBracket) {
          next();
          n->kind = UNode::Kind::Nil;
          return n;
        }
        n->children.push_back(parse_expr());
        while (peek().kind == Token::Kind::Comma) {
          next();
          n->children.push_back(parse_expr());
        }
        if (next().kind != Token::Kind::RBracket) fail("expected ]");
        return n;
      }
      case Token::Kind::LParen: {
        next();
        UNodePtr first = parse_expr();
        if (peek().kind == Token::Kind::Comma) {
          next();
          auto n = u_node(UNode::Kind::PairLit);
          n->children.push_back(std::move(first));
          n->children.push_back(parse_expr());
          if (next().kind != Token::Kind::RParen) fail("expected )");
          return n;
        }
        if (next().kind != Token::Kind::RParen) fail("expected )");
        return first;
      }
      case Token::Kind::Backslash:
        return parse_lambda();
      default:
        fail("unexpected token");
    }
  }
};

// ---------------------------------------------------------------------------
// Inference

struct Inferencer {
  const Scope& scope;
  const Registry& registry;
  VarSupply supply{};
  Subst subst{};
  std::vector<std::pair<std::string, TypePtr>> lambdaParams{};

  const TypePtr* lambda_param(const std::string& name) const {
    for (auto it = lambdaParams.rbegin(); it != lambdaParams.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  void must_unify(const TypePtr& a, const TypePtr& b, const char* where) {
    if (!unify_into(subst, a, b))
      fail(std::string("type mismatch in ") + where + ": " +
           render_type(apply_subst(subst, a)) + " vs " + render_type(apply_subst(subst, b)));
  }

  void infer(UNode& n) {
    switch (n.kind) {
      case UNode::Kind::Num:
        n.ty = n.isFloat ? t_float() : t_int();
        return;
      case UNode::Kind::Str:
        n.ty = t_string();
        return;
      case UNode::Kind::Chr:
        n.ty = t_char();
        return;
      case UNode::Kind::BoolLit:
        n.ty = t_bool();
        return;
      case UNode::Kind::Nil:
        n.ty = t_list(t_var(supply.fresh()));
        return;
      case UNode::Kind::ListLit: {
        TypePtr elem = t_var(supply.fresh());
        for (auto& c : n.children) {
          infer(*c);
          must_unify(elem, c->ty, "list literal");
        }
        n.ty = t_list(elem);
        return;
      }
      case UNode::Kind::PairLit: {
        infer(*n.children[0]);
        infer(*n.children[1]);
        n.ty = t_pair(n.children[0]->ty, n.children[1]->ty);
        return;
      }
      case UNode::Kind::Braced:
        // Map/Set literal; shape resolved once the context type is known.
        n.ty = t_var(supply.fresh());
        return;
      case UNode::Kind::NothingLit:
        n.ty = t_maybe(t_var(supply.fresh()));
        return;
      case UNode::Kind::JustLit:
        infer(*n.children[0]);
        n.ty = t_maybe(n.children[0]->ty);
        return;
      case UNode::Kind::Binding: {
        // Resolution order: lambda parameters, then scheme bindings, then
        // x<k> argument references, then primitives used as values.
        if (const TypePtr* t = lambda_param(n.text)) {
          n.ty = *t;
          return;
        }
        if (const TypePtr* t = scope.binding_type(n.text)) {
          n.ty = *t;
          return;
        }
        if (n.text.size() >= 2 && n.text[0] == 'x' &&
            std::all_of(n.text.begin() + 1, n.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          int idx = std::stoi(n.text.substr(1));
          if (idx < 0 || static_cast<std::size_t>(idx) >= scope.argTypes.size())
            fail("argument reference out of range: " + n.text);
          n.kind = UNode::Kind::ArgRef;
          n.argIndex = idx;
          n.ty = scope.argTypes[static_cast<std::size_t>(idx)];
          return;
        }
        if (const Primitive* p = registry.find(n.text)) {
          n.kind = UNode::Kind::PrimValue;
          n.prim = p;
          std::map<int, TypePtr> mapping;
          n.ty = instantiate(p->signature(), supply, mapping);
          record_comparable(n, p, mapping);
          return;
        }
        fail("unknown name '" + n.text + "'");
      }
      case UNode::Kind::App: {
        const Primitive* p = registry.find(n.text);
        if (!p) fail("unknown function '" + n.text + "'");
        if (n.children.size() != p->arity())
          fail("'" + n.text + "' expects " + std::to_string(p->arity()) + " arguments, got " +
               std::to_string(n.children.size()));
        n.prim = p;
        std::map<int, TypePtr> mapping;
        TypePtr sig = instantiate(p->signature(), supply, mapping);
        record_comparable(n, p, mapping);
        n.instTypes = sig->args;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          infer(*n.children[i]);
          must_unify(n.instTypes[i], n.children[i]->ty, p->name.c_str());
        }
        n.ty = n.instTypes.back();
        return;
      }
      case UNode::Kind::Lam: {
        TypePtr param = t_var(supply.fresh());
        lambdaParams.emplace_back(n.text, param);
        infer(*n.children[0]);
        lambdaParams.pop_back();
        n.ty = t_fn({param}, n.children[0]->ty);
        return;
      }
      default:
        fail("internal parser error");
    }
  }

  void record_comparable(UNode& n, const Primitive* p, const std::map<int, TypePtr>& mapping) {
    for (int v : p->comparableVars) {
      auto it = mapping.find(v);
      if (it != mapping.end() && it->second->tag == Type::Tag::Var)
        n.comparableInst.emplace_back(v, it->second->var);
    }
  }
};

// Residual type variables default to Int.
TypePtr ground_default(const Subst& s, const TypePtr& t) {
  TypePtr r = apply_subst(s, t);
  if (!contains_var(r)) return r;
  if (r->tag == Type::Tag::Var) return t_int();
  auto out = std::make_shared<Type>();
  out->tag = r->tag;
  out->base = r->base;
  out->var = r->var;
  out->args.reserve(r->args.size());
  for (const auto& a : r->args) out->args.push_back(ground_default(s, a));
  return out;
}

// ---------------------------------------------------------------------------
// Typed build

struct Builder {
  const Subst& subst;

  ExprPtr build(const UNode& n) {
    TypePtr ty = ground_default(subst, n.ty);
    switch (n.kind) {
      case UNode::Kind::Num:
        if (n.isFloat) return e_lit(v_float(std::stod(n.text)), ty);
        return e_lit(v_int(std::stoll(n.text)), ty);
      case UNode::Kind::Str:
        return e_lit(parse_value(n.text, t_string()), ty);
      case UNode::Kind::Chr:
        return e_lit(parse_value(n.text, t_char()), ty);
      case UNode::Kind::BoolLit:
        return e_lit(v_bool(n.text == "True"), ty);
      case UNode::Kind::Nil:
        return e_lit(v_list({}), ty);
      case UNode::Kind::ListLit: {
        std::vector<ValuePtr> xs;
        for (const auto& c : n.children) xs.push_back(literal_value(*c));
        return e_lit(v_list(std::move(xs)), ty);
      }
      case UNode::Kind::PairLit:
        return e_lit(v_pair(literal_value(*n.children[0]), literal_value(*n.children[1])), ty);
      case UNode::Kind::Braced:
        return e_lit(parse_value(n.text, ty), ty);
      case UNode::Kind::NothingLit:
        return e_lit(v_nothing(), ty);
      case UNode::Kind::JustLit:
        return e_lit(v_just(literal_value(*n.children[0])), ty);
      case UNode::Kind::ArgRef:
        return e_arg(n.argIndex, ty);
      case UNode::Kind::Binding:
        return e_bind(n.text, ty);
      case UNode::Kind::PrimValue:
        check_comparable(n);
        return e_lit(v_closure_prim(n.prim, {}), ty);
      case UNode::Kind::App: {
        check_comparable(n);
        std::vector<TypePtr> inst;
        inst.reserve(n.instTypes.size());
        for (const auto& t : n.instTypes) inst.push_back(ground_default(subst, t));
        std::vector<ExprPtr> children;
        children.reserve(n.children.size());
        for (const auto& c : n.children) children.push_back(build(*c));
        return e_apply(n.prim, std::move(inst), std::move(children));
      }
      case UNode::Kind::Lam:
        // ty is the (flattened) function type; its first arg is the param.
        return e_lambda(n.text, ty->args.front(), build(*n.children[0]));
    }
    fail("internal parser error");
  }

  ValuePtr literal_value(const UNode& n) {
    ExprPtr e = build(n);
    if (e->tag != Expr::Tag::Literal) fail("composite literals must contain only literals");
    return e->lit;
  }

  void check_comparable(const UNode& n) {
    for (const auto& [orig, fresh] : n.comparableInst) {
      TypePtr t = ground_default(subst, t_var(fresh));
      if (!is_comparable(t))
        fail("'" + n.prim->name + "' needs a comparable type, got " + render_type(t));
    }
  }
};

}  // namespace

ExprPtr parse_expr(std::string_view text, const TypePtr& expected, const Scope& scope,
                   const Registry& registry) {
  std::vector<Token> tokens = tokenize(text);
  Parser parser{tokens};
  UNodePtr root = parser.parse_expr();
  if (parser.peek().kind != Token::Kind::End) fail("trailing input");

  Inferencer inf{scope, registry};
  inf.infer(*root);
  inf.must_unify(root->ty, expected, "slot result");

  Builder builder{inf.subst};
  return builder.build(*root);
}

}  // namespace foldsynth
