// SPDX-License-Identifier: MIT
//
// Recursion-scheme patterns. A pattern is a fixed program skeleton with
// typed evolvable slots; the only recursion available to a synthesized
// program is the one its pattern performs. Slot scopes below follow the
// pattern catalog exactly: generation draws only on the listed names, while
// execution binds the program arguments unconditionally (a slot that never
// references them is unaffected).

#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foldsynth/eval.hpp"
#include "foldsynth/expr.hpp"
#include "foldsynth/expr_parse.hpp"
#include "foldsynth/gen.hpp"
#include "foldsynth/types.hpp"

namespace foldsynth {

enum class PatternId {
  NoScheme,
  CataList,
  CataSet,
  CataMap,
  CurriedCata,
  Histo,
  Ana,
  Accu,
  Hylo,
};

inline constexpr std::array<PatternId, 9> kAllPatterns = {
    PatternId::NoScheme, PatternId::CataList, PatternId::CataSet,
    PatternId::CataMap,  PatternId::CurriedCata, PatternId::Histo,
    PatternId::Ana,      PatternId::Accu,     PatternId::Hylo,
};

const char* pattern_name(PatternId id);
std::optional<PatternId> pattern_from_name(std::string_view name);
int pattern_slot_count(PatternId id);
// Accu and Hylo carry an unbound type `a` that the problem must supply.
bool pattern_needs_unbound(PatternId id);

struct SlotSpec {
  std::string name;
  TypePtr type;
  Scope scope;  // names visible to generation
};

struct PatternInstance {
  PatternId id = PatternId::NoScheme;
  std::vector<TypePtr> argTypes;
  TypePtr returnType;
  std::vector<SlotSpec> slots;
};

struct PatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingUnboundType : PatternError {
  using PatternError::PatternError;
};

// Patterns whose structural requirements fit the signature, in canonical
// order (the order schedules try them in).
std::vector<PatternId> applicable_patterns(const std::vector<TypePtr>& argTypes,
                                           const TypePtr& returnType);

// Builds the typed slot specifications. `unbound` supplies pattern type
// parameters by name (key "a" for Accu's accumulator / Hylo's intermediate
// element type). Throws MissingUnboundType or PatternError.
PatternInstance instantiate_pattern(PatternId id, const std::vector<TypePtr>& argTypes,
                                    const TypePtr& returnType,
                                    const std::map<std::string, TypePtr>& unbound);

// Ground types available to generation for this pattern: the signature, the
// slot and binding types, the problem's declared auxiliary types, Int and
// Bool, and all their subterms.
TypeUniverse pattern_universe(const PatternInstance& pat,
                              const std::vector<TypePtr>& allowedTypes);

// Scope used to parse and type-check slot programs: the execution
// environment always binds every program argument, so arguments are
// accepted here even in slots whose generation scope omits them.
Scope permissive_scope(const PatternInstance& pat, const SlotSpec& slot);

// Runs the pattern's skeleton with the given slot programs on one input
// tuple, under the caller's evaluation budget.
ValuePtr execute_pattern(const PatternInstance& pat, const std::vector<ExprPtr>& genes,
                         const std::vector<ValuePtr>& args, EvalState& st);

}  // namespace foldsynth
