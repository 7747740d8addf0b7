// SPDX-License-Identifier: MIT
//
// Problem definitions: a typed signature plus train/test input-output
// examples, loaded from JSON. Values are written in the same canonical
// syntax the engine renders, e.g. "[1, 2]", "\"abc\"", "(1, 'x')".

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldsynth/types.hpp"
#include "foldsynth/value.hpp"

namespace foldsynth {

struct IOCase {
  std::vector<ValuePtr> inputs;
  ValuePtr output;
};

struct Problem {
  std::string name;
  std::vector<TypePtr> argTypes;
  TypePtr returnType;
  std::vector<TypePtr> allowedTypes;       // auxiliary types generation may use
  std::map<std::string, TypePtr> unbound;  // pattern type parameters, e.g. "a"
  std::vector<IOCase> train, test;
};

struct ProblemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed JSON or missing/invalid fields.
struct ProblemParseError : ProblemError {
  using ProblemError::ProblemError;
};
// A case whose values do not fit the signature.
struct ProblemTypeMismatch : ProblemError {
  ProblemTypeMismatch(const std::string& what, const std::string& split_, int caseIndex_)
      : ProblemError(what), split(split_), caseIndex(caseIndex_) {}
  std::string split;  // "train" or "test"
  int caseIndex;
};
struct EmptyCaseSet : ProblemError {
  using ProblemError::ProblemError;
};

Problem parse_problem(const std::string& jsonText);
Problem load_problem(const std::string& path);

}  // namespace foldsynth
