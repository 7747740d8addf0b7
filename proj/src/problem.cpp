// SPDX-License-Identifier: MIT

#include "foldsynth/problem.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace foldsynth {

namespace {

using nlohmann::json;

std::vector<IOCase> parse_cases(const json& j, const std::string& split,
                                const std::vector<TypePtr>& argTypes,
                                const TypePtr& returnType) {
  if (!j.is_array()) throw ProblemParseError("'" + split + "' must be an array");
  std::vector<IOCase> out;
  out.reserve(j.size());
  int index = 0;
  for (const auto& c : j) {
    if (!c.is_object() || !c.contains("inputs") || !c.contains("output") ||
        !c["inputs"].is_array())
      throw ProblemParseError(split + " case " + std::to_string(index) +
                              " must be {\"inputs\": [...], \"output\": ...}");
    const auto& ins = c["inputs"];
    if (ins.size() != argTypes.size())
      throw ProblemTypeMismatch(split + " case " + std::to_string(index) + " has " +
                                    std::to_string(ins.size()) + " inputs, signature expects " +
                                    std::to_string(argTypes.size()),
                                split, index);
    IOCase io;
    try {
      for (std::size_t i = 0; i < argTypes.size(); ++i)
        io.inputs.push_back(parse_value(ins[i].get<std::string>(), argTypes[i]));
      io.output = parse_value(c["output"].get<std::string>(), returnType);
    } catch (const ValueParseError& e) {
      throw ProblemTypeMismatch(split + " case " + std::to_string(index) + ": " + e.what(),
                                split, index);
    } catch (const json::exception&) {
      throw ProblemTypeMismatch(split + " case " + std::to_string(index) +
                                    ": values must be strings in canonical syntax",
                                split, index);
    }
    out.push_back(std::move(io));
    ++index;
  }
  return out;
}

}  // namespace

Problem parse_problem(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::exception& e) {
    throw ProblemParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProblemParseError("top level must be an object");
  for (const char* field : {"name", "signature", "train", "test"})
    if (!j.contains(field))
      throw ProblemParseError(std::string("missing field '") + field + "'");

  Problem p;
  try {
    p.name = j["name"].get<std::string>();
  } catch (const json::exception&) {
    throw ProblemParseError("'name' must be a string");
  }

  TypePtr sig;
  try {
    sig = parse_type(j["signature"].get<std::string>());
  } catch (const json::exception&) {
    throw ProblemParseError("'signature' must be a string");
  } catch (const TypeParseError& e) {
    throw ProblemParseError(std::string("bad signature: ") + e.what());
  }
  if (!is_fn(sig)) throw ProblemParseError("signature must be a function type");
  if (contains_var(sig)) throw ProblemParseError("signature must be ground");
  p.argTypes.assign(sig->args.begin(), sig->args.end() - 1);
  p.returnType = sig->args.back();

  if (j.contains("allowed_types")) {
    if (!j["allowed_types"].is_array())
      throw ProblemParseError("'allowed_types' must be an array of type strings");
    for (const auto& t : j["allowed_types"]) {
      try {
        p.allowedTypes.push_back(parse_type(t.get<std::string>()));
      } catch (const json::exception&) {
        throw ProblemParseError("'allowed_types' must be an array of type strings");
      } catch (const TypeParseError& e) {
        throw ProblemParseError(std::string("bad allowed type: ") + e.what());
      }
    }
  }
  if (j.contains("unbound")) {
    if (!j["unbound"].is_object())
      throw ProblemParseError("'unbound' must be an object of type strings");
    for (const auto& [key, val] : j["unbound"].items()) {
      try {
        p.unbound[key] = parse_type(val.get<std::string>());
      } catch (const json::exception&) {
        throw ProblemParseError("'unbound' must be an object of type strings");
      } catch (const TypeParseError& e) {
        throw ProblemParseError(std::string("bad unbound type: ") + e.what());
      }
    }
  }

  p.train = parse_cases(j["train"], "train", p.argTypes, p.returnType);
  p.test = parse_cases(j["test"], "test", p.argTypes, p.returnType);
  if (p.train.empty()) throw EmptyCaseSet("problem '" + p.name + "' has no training cases");
  if (p.test.empty()) throw EmptyCaseSet("problem '" + p.name + "' has no test cases");
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemParseError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace foldsynth
