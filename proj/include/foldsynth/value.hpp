// SPDX-License-Identifier: MIT
//
// Runtime values. Everything is immutable and shared; Map entries are kept
// sorted by key and Set elements sorted and distinct under the canonical
// total order, so structural equality is value equality.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foldsynth/types.hpp"

namespace foldsynth {

struct Expr;
struct Primitive;
struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Evaluation environment: positional program arguments plus named bindings
// introduced by recursion-scheme slots and lambda parameters.
struct Env {
  std::vector<ValuePtr> args;
  std::vector<std::pair<std::string, ValuePtr>> bindings;

  const ValuePtr* lookup(const std::string& name) const {
    // Later bindings shadow earlier ones.
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
  void bind(std::string name, ValuePtr v) { bindings.emplace_back(std::move(name), std::move(v)); }
};

struct Value {
  enum class Tag { Int, Float, Bool, Char, List, Pair, Map, Set, Maybe, Closure };
  Tag tag = Tag::Int;

  long long i = 0;
  double f = 0.0;
  bool b = false;
  char c = '\0';

  std::vector<ValuePtr> elems;                         // List; Set (sorted, distinct)
  ValuePtr first, second;                              // Pair; Maybe uses first (null = Nothing)
  std::vector<std::pair<ValuePtr, ValuePtr>> entries;  // Map, sorted by key

  // Closure, one of two flavors:
  //  - expression closure: a lambda plus its captured environment;
  //  - primitive closure: a primitive with zero or more applied arguments.
  std::shared_ptr<const Expr> lambda;
  std::shared_ptr<const Env> captured;
  const Primitive* prim = nullptr;
  std::vector<ValuePtr> applied;
};

ValuePtr v_int(long long x);
ValuePtr v_float(double x);
ValuePtr v_bool(bool x);
ValuePtr v_char(char x);
ValuePtr v_list(std::vector<ValuePtr> xs);
ValuePtr v_string(std::string_view s);
ValuePtr v_pair(ValuePtr a, ValuePtr b);
// Sorts and dedupes / sorts by key keeping the later value on duplicates.
ValuePtr v_set(std::vector<ValuePtr> xs);
ValuePtr v_map(std::vector<std::pair<ValuePtr, ValuePtr>> kvs);
ValuePtr v_nothing();
ValuePtr v_just(ValuePtr x);
ValuePtr v_closure_expr(std::shared_ptr<const Expr> lambda, Env captured);
ValuePtr v_closure_prim(const Primitive* prim, std::vector<ValuePtr> applied);

inline bool truthy(const ValuePtr& v) { return v->b; }

enum class Cmp { LT, EQ, GT, Incomparable };

// Canonical total order over comparable values: numeric by value, Char by
// code point, False < True, lists and pairs lexicographic, Map/Set by their
// sorted contents, Nothing < Just. Closures are Incomparable.
Cmp canonical_compare(const ValuePtr& a, const ValuePtr& b);
bool value_equal(const ValuePtr& a, const ValuePtr& b);

// List whose elements are all Char (vacuously true for the empty list).
bool is_char_list(const ValuePtr& v);
std::string list_to_string(const ValuePtr& v);

std::string render_float(double x);
std::string render_value(const ValuePtr& v);

struct ValueParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Type-directed parse of the canonical rendering.
ValuePtr parse_value(std::string_view text, const TypePtr& type);

}  // namespace foldsynth
