// SPDX-License-Identifier: MIT
//
// First-order type terms with unification, substitution and a canonical
// textual form. Function types are kept flat (parameter list + result) and
// unification is arity-strict: a -> b -> c never matches a two-type view of
// a -> d. Type variables are integers internally and render as lowercase
// letters in order of first appearance.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foldsynth {

enum class BaseKind { Int, Float, Bool, Char };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Tag { Base, List, Pair, Map, Set, Maybe, Fn, Var };
  Tag tag = Tag::Base;
  BaseKind base = BaseKind::Int;
  // List/Set/Maybe: 1 entry; Pair/Map: 2; Fn: parameters then result (>= 2).
  std::vector<TypePtr> args;
  int var = 0;
};

TypePtr t_int();
TypePtr t_float();
TypePtr t_bool();
TypePtr t_char();
TypePtr t_string();  // [Char]
TypePtr t_list(TypePtr elem);
TypePtr t_pair(TypePtr first, TypePtr second);
TypePtr t_map(TypePtr key, TypePtr value);
TypePtr t_set(TypePtr elem);
TypePtr t_maybe(TypePtr elem);
// Builds a function type; a function-typed result is flattened into the
// parameter list so arity is always maximal.
TypePtr t_fn(std::vector<TypePtr> params, TypePtr result);
TypePtr t_var(int id);

inline bool is_fn(const TypePtr& t) { return t->tag == Type::Tag::Fn; }
inline TypePtr fn_result(const TypePtr& t) { return t->args.back(); }
inline std::size_t fn_arity(const TypePtr& t) { return t->args.size() - 1; }

bool type_equal(const TypePtr& a, const TypePtr& b);
bool contains_var(const TypePtr& t);
bool contains_fn(const TypePtr& t);
// A type is comparable (usable with eq/ord primitives and as Set element or
// Map key) iff no function type occurs anywhere inside it.
inline bool is_comparable(const TypePtr& t) { return !contains_fn(t); }
bool occurs_in(int var, const TypePtr& t);

// Total structural order so types can key ordered containers.
int type_compare(const TypePtr& a, const TypePtr& b);
struct TypeLess {
  bool operator()(const TypePtr& a, const TypePtr& b) const { return type_compare(a, b) < 0; }
};

struct Subst {
  std::map<int, TypePtr> mapping;
  bool empty() const { return mapping.empty(); }
};

TypePtr apply_subst(const Subst& s, const TypePtr& t);
// Most general unifier with occurs check; nullopt when the terms clash.
std::optional<Subst> unify(const TypePtr& a, const TypePtr& b);
// Extends `s` so that apply_subst(s, a) == apply_subst(s, b) if possible.
bool unify_into(Subst& s, const TypePtr& a, const TypePtr& b);

struct VarSupply {
  int next = 1;
  int fresh() { return next++; }
};

// Renames every type variable in `scheme` to a fresh one from the supply.
TypePtr instantiate(const TypePtr& scheme, VarSupply& supply);
// As above, exposing the old-var -> fresh-type mapping.
TypePtr instantiate(const TypePtr& scheme, VarSupply& supply, std::map<int, TypePtr>& mapping);

// All distinct subterm types of t, including t itself, in structural order.
void collect_subterms(const TypePtr& t, std::vector<TypePtr>& out);

std::string render_type(const TypePtr& t);

struct TypeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the canonical form. Lowercase identifiers become variables numbered
// by first appearance (a=1, b=2, ...).
TypePtr parse_type(std::string_view text);

}  // namespace foldsynth
