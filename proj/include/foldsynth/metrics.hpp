// SPDX-License-Identifier: MIT
//
// The per-case error metric. Runtime errors are handled by the caller and
// score positive infinity; everything here is finite unless values of
// incompatible shapes meet (which a well-typed program cannot produce).

#pragma once

#include <limits>

#include "foldsynth/value.hpp"

namespace foldsynth {

inline constexpr double kInfiniteError = std::numeric_limits<double>::infinity();

// Distance between an actual and an expected output of the same type:
//   - numbers: absolute difference (floats within 1e-4 count as exact);
//   - Bool / Char: 0 or 1;
//   - strings: Levenshtein distance;
//   - other lists: elementwise error over the common prefix, plus the length
//     difference scaled by the largest element magnitude (at least 1);
//   - pairs: sum of the component errors;
//   - Map / Set: cardinality of the symmetric difference;
//   - Maybe: inner error when both are Just, else 0/1 on the constructor.
double case_error(const ValuePtr& got, const ValuePtr& want);

long long levenshtein(const std::string& a, const std::string& b);

}  // namespace foldsynth
