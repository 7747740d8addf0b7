// SPDX-License-Identifier: MIT

#include "foldsynth/types.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace foldsynth {

namespace {

TypePtr make_base(BaseKind k) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Base;
  t->base = k;
  return t;
}

TypePtr make_node(Type::Tag tag, std::vector<TypePtr> args) {
  auto t = std::make_shared<Type>();
  t->tag = tag;
  t->args = std::move(args);
  return t;
}

}  // namespace

TypePtr t_int() {
  static const TypePtr t = make_base(BaseKind::Int);
  return t;
}
TypePtr t_float() {
  static const TypePtr t = make_base(BaseKind::Float);
  return t;
}
TypePtr t_bool() {
  static const TypePtr t = make_base(BaseKind::Bool);
  return t;
}
TypePtr t_char() {
  static const TypePtr t = make_base(BaseKind::Char);
  return t;
}
TypePtr t_string() {
  static const TypePtr t = t_list(t_char());
  return t;
}
TypePtr t_list(TypePtr elem) { return make_node(Type::Tag::List, {std::move(elem)}); }
TypePtr t_pair(TypePtr first, TypePtr second) {
  return make_node(Type::Tag::Pair, {std::move(first), std::move(second)});
}
TypePtr t_map(TypePtr key, TypePtr value) {
  return make_node(Type::Tag::Map, {std::move(key), std::move(value)});
}
TypePtr t_set(TypePtr elem) { return make_node(Type::Tag::Set, {std::move(elem)}); }
TypePtr t_maybe(TypePtr elem) { return make_node(Type::Tag::Maybe, {std::move(elem)}); }

TypePtr t_fn(std::vector<TypePtr> params, TypePtr result) {
  if (result->tag == Type::Tag::Fn) {
    // Flatten: (a -> (b -> c)) is stored as a -> b -> c.
    for (std::size_t i = 0; i + 1 < result->args.size(); ++i) params.push_back(result->args[i]);
    result = result->args.back();
  }
  params.push_back(std::move(result));
  return make_node(Type::Tag::Fn, std::move(params));
}

TypePtr t_var(int id) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Var;
  t->var = id;
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) { return type_compare(a, b) == 0; }

int type_compare(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
  switch (a->tag) {
    case Type::Tag::Base:
      if (a->base != b->base) return a->base < b->base ? -1 : 1;
      return 0;
    case Type::Tag::Var:
      if (a->var != b->var) return a->var < b->var ? -1 : 1;
      return 0;
    default: {
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        int c = type_compare(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

bool contains_var(const TypePtr& t) {
  if (t->tag == Type::Tag::Var) return true;
  for (const auto& a : t->args)
    if (contains_var(a)) return true;
  return false;
}

bool contains_fn(const TypePtr& t) {
  if (t->tag == Type::Tag::Fn) return true;
  for (const auto& a : t->args)
    if (contains_fn(a)) return true;
  return false;
}

bool occurs_in(int var, const TypePtr& t) {
  if (t->tag == Type::Tag::Var) return t->var == var;
  for (const auto& a : t->args)
    if (occurs_in(var, a)) return true;
  return false;
}

TypePtr apply_subst(const Subst& s, const TypePtr& t) {
  if (s.empty()) return t;
  switch (t->tag) {
    case Type::Tag::Var: {
      auto it = s.mapping.find(t->var);
      if (it == s.mapping.end()) return t;
      // Substitutions may chain (a -> b, b -> Int); resolve fully.
      return apply_subst(s, it->second);
    }
    case Type::Tag::Base:
      return t;
    default: {
      bool changed = false;
      std::vector<TypePtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) {
        args.push_back(apply_subst(s, a));
        if (args.back().get() != a.get()) changed = true;
      }
      if (!changed) return t;
      if (t->tag == Type::Tag::Fn) {
        // Rebuild through t_fn so a variable substituted by a function type
        // in result position re-flattens.
        TypePtr result = std::move(args.back());
        args.pop_back();
        return t_fn(std::move(args), std::move(result));
      }
      auto out = std::make_shared<Type>();
      out->tag = t->tag;
      out->base = t->base;
      out->var = t->var;
      out->args = std::move(args);
      return out;
    }
  }
}

namespace {

bool bind_var(Subst& s, int var, const TypePtr& t) {
  TypePtr resolved = apply_subst(s, t);
  if (resolved->tag == Type::Tag::Var && resolved->var == var) return true;
  if (occurs_in(var, resolved)) return false;
  s.mapping[var] = resolved;
  return true;
}

}  // namespace

bool unify_into(Subst& s, const TypePtr& rawA, const TypePtr& rawB) {
  TypePtr a = apply_subst(s, rawA);
  TypePtr b = apply_subst(s, rawB);
  if (a->tag == Type::Tag::Var) return bind_var(s, a->var, b);
  if (b->tag == Type::Tag::Var) return bind_var(s, b->var, a);
  if (a->tag != b->tag) return false;
  if (a->tag == Type::Tag::Base) return a->base == b->base;
  if (a->args.size() != b->args.size()) return false;  // arity-strict for Fn
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!unify_into(s, a->args[i], b->args[i])) return false;
  return true;
}

std::optional<Subst> unify(const TypePtr& a, const TypePtr& b) {
  Subst s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return s;
}

namespace {

TypePtr instantiate_rec(const TypePtr& t, VarSupply& supply, std::map<int, TypePtr>& seen) {
  switch (t->tag) {
    case Type::Tag::Var: {
      auto it = seen.find(t->var);
      if (it != seen.end()) return it->second;
      TypePtr fresh = t_var(supply.fresh());
      seen.emplace(t->var, fresh);
      return fresh;
    }
    case Type::Tag::Base:
      return t;
    default: {
      auto out = std::make_shared<Type>();
      out->tag = t->tag;
      out->base = t->base;
      out->var = t->var;
      out->args.reserve(t->args.size());
      for (const auto& a : t->args) out->args.push_back(instantiate_rec(a, supply, seen));
      return out;
    }
  }
}

}  // namespace

TypePtr instantiate(const TypePtr& scheme, VarSupply& supply) {
  std::map<int, TypePtr> seen;
  return instantiate_rec(scheme, supply, seen);
}

TypePtr instantiate(const TypePtr& scheme, VarSupply& supply, std::map<int, TypePtr>& mapping) {
  return instantiate_rec(scheme, supply, mapping);
}

void collect_subterms(const TypePtr& t, std::vector<TypePtr>& out) {
  auto already = [&](const TypePtr& x) {
    return std::any_of(out.begin(), out.end(), [&](const TypePtr& y) { return type_equal(x, y); });
  };
  if (!already(t)) out.push_back(t);
  for (const auto& a : t->args) collect_subterms(a, out);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_rec(const TypePtr& t, std::map<int, std::string>& names, std::ostringstream& out,
                bool atomContext);

std::string var_name(int id, std::map<int, std::string>& names) {
  auto it = names.find(id);
  if (it != names.end()) return it->second;
  std::size_t n = names.size();
  std::string name;
  // a, b, ..., z, t1, t2, ... in order of first appearance.
  if (n < 26)
    name = std::string(1, static_cast<char>('a' + n));
  else
    name = "t" + std::to_string(n - 25);
  names.emplace(id, name);
  return name;
}

void render_rec(const TypePtr& t, std::map<int, std::string>& names, std::ostringstream& out,
                bool atomContext) {
  switch (t->tag) {
    case Type::Tag::Base:
      switch (t->base) {
        case BaseKind::Int: out << "Int"; return;
        case BaseKind::Float: out << "Float"; return;
        case BaseKind::Bool: out << "Bool"; return;
        case BaseKind::Char: out << "Char"; return;
      }
      return;
    case Type::Tag::Var:
      out << var_name(t->var, names);
      return;
    case Type::Tag::List:
      out << '[';
      render_rec(t->args[0], names, out, false);
      out << ']';
      return;
    case Type::Tag::Pair:
      out << '(';
      render_rec(t->args[0], names, out, false);
      out << ", ";
      render_rec(t->args[1], names, out, false);
      out << ')';
      return;
    case Type::Tag::Map:
      if (atomContext) out << '(';
      out << "Map ";
      render_rec(t->args[0], names, out, true);
      out << ' ';
      render_rec(t->args[1], names, out, true);
      if (atomContext) out << ')';
      return;
    case Type::Tag::Set:
      if (atomContext) out << '(';
      out << "Set ";
      render_rec(t->args[0], names, out, true);
      if (atomContext) out << ')';
      return;
    case Type::Tag::Maybe:
      if (atomContext) out << '(';
      out << "Maybe ";
      render_rec(t->args[0], names, out, true);
      if (atomContext) out << ')';
      return;
    case Type::Tag::Fn: {
      if (atomContext) out << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out << " -> ";
        // Only function-typed parameters need parentheses; Map/Set/Maybe
        // parameters bind tighter than the arrow already.
        render_rec(t->args[i], names, out, i + 1 < t->args.size() && is_fn(t->args[i]));
      }
      if (atomContext) out << ')';
      return;
    }
  }
}

}  // namespace

std::string render_type(const TypePtr& t) {
  std::ostringstream out;
  std::map<int, std::string> names;
  render_rec(t, names, out, false);
  return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct TypeParser {
  std::string_view text;
  std::size_t pos = 0;
  std::map<std::string, int> vars;
  int nextVar = 1;

  [[noreturn]] void fail(const std::string& what) {
    throw TypeParseError("type parse error at offset " + std::to_string(pos) + ": " + what +
                         " in \"" + std::string(text) + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
      pos += 2;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return std::string(text.substr(start, pos - start));
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  TypePtr parse_fn() {
    TypePtr head = parse_app();
    if (eat_arrow()) {
      TypePtr rest = parse_fn();
      return t_fn({head}, rest);
    }
    return head;
  }

  TypePtr parse_app() {
    skip_ws();
    char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t save = pos;
      std::string name = ident();
      if (name == "Map") return t_map(parse_atom(), parse_atom());
      if (name == "Set") return t_set(parse_atom());
      if (name == "Maybe") return t_maybe(parse_atom());
      pos = save;
    }
    return parse_atom();
  }

  TypePtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '[') {
      ++pos;
      TypePtr elem = parse_fn();
      if (!eat(']')) fail("expected ]");
      return t_list(elem);
    }
    if (c == '(') {
      ++pos;
      TypePtr first = parse_fn();
      if (eat(',')) {
        TypePtr second = parse_fn();
        if (!eat(')')) fail("expected )");
        return t_pair(first, second);
      }
      if (!eat(')')) fail("expected )");
      return first;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string name = ident();
      if (name == "Int") return t_int();
      if (name == "Float") return t_float();
      if (name == "Bool") return t_bool();
      if (name == "Char") return t_char();
      if (name == "Map") return t_map(parse_atom(), parse_atom());
      if (name == "Set") return t_set(parse_atom());
      if (name == "Maybe") return t_maybe(parse_atom());
      fail("unknown type constructor '" + name + "'");
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string name = ident();
      auto it = vars.find(name);
      if (it == vars.end()) it = vars.emplace(name, nextVar++).first;
      return t_var(it->second);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

TypePtr parse_type(std::string_view text) {
  TypeParser p;
  p.text = text;
  TypePtr t = p.parse_fn();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

}  // namespace foldsynth
