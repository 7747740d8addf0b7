// SPDX-License-Identifier: MIT
//
// Parser for the canonical expression rendering, so persisted slot programs
// round-trip: parse_expr(render_expr(e)) is structurally equal to e.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foldsynth/expr.hpp"
#include "foldsynth/prims.hpp"
#include "foldsynth/types.hpp"

namespace foldsynth {

// Names visible to a slot program: positional arguments x0, x1, ... plus the
// named bindings its recursion-scheme position introduces. All types ground.
struct Scope {
  std::vector<TypePtr> argTypes;
  std::vector<std::pair<std::string, TypePtr>> bindings;

  const TypePtr* binding_type(const std::string& name) const {
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

struct ExprParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses `text` as an expression of type `expected` under `scope`. Type
// variables left unconstrained (e.g. the element type of `length []`)
// default to Int.
ExprPtr parse_expr(std::string_view text, const TypePtr& expected, const Scope& scope,
                   const Registry& registry);

}  // namespace foldsynth
