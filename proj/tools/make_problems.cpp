// SPDX-License-Identifier: MIT
//
// Generates the bundled problem specs (problems/*.json) with a fixed seed so
// the files are reproducible. Each spec carries hand-picked edge cases at the
// front of the training split followed by random fill; the test split is
// random. Values are rendered in the canonical value syntax the loader
// expects.

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "foldsynth/rng.hpp"
#include "foldsynth/value.hpp"

namespace {

using namespace foldsynth;
using nlohmann::ordered_json;

struct Case {
  std::vector<ValuePtr> inputs;
  ValuePtr output;
};

ordered_json case_json(const Case& c) {
  ordered_json j;
  j["inputs"] = ordered_json::array();
  for (const auto& v : c.inputs) j["inputs"].push_back(render_value(v));
  j["output"] = render_value(c.output);
  return j;
}

void write_problem(const std::string& dir, const std::string& name, const std::string& signature,
                   const std::vector<Case>& train, const std::vector<Case>& test) {
  ordered_json j;
  j["name"] = name;
  j["signature"] = signature;
  j["train"] = ordered_json::array();
  for (const auto& c : train) j["train"].push_back(case_json(c));
  j["test"] = ordered_json::array();
  for (const auto& c : test) j["test"].push_back(case_json(c));
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name + ".json";
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  std::cout << path << ": " << train.size() << " train, " << test.size() << " test\n";
}

// smallest: the minimum of four ints.
Case smallest_case(const std::vector<long long>& v) {
  Case c;
  for (long long x : v) c.inputs.push_back(v_int(x));
  c.output = v_int(*std::min_element(v.begin(), v.end()));
  return c;
}

void make_smallest(const std::string& dir) {
  std::vector<Case> train, test;
  for (const auto& v : std::vector<std::vector<long long>>{
           {0, 0, 0, 0},
           {-100, -100, -100, -100},
           {100, 100, 100, 100},
           {-100, 0, 0, 0},
           {0, -100, 0, 0},
           {0, 0, -100, 0},
           {0, 0, 0, -100},
           {100, 99, 98, 97},
           {-98, -99, -100, -97},
           {7, -7, 7, -7},
       })
    train.push_back(smallest_case(v));
  Rng rng(1001);
  auto rand_case = [&rng]() {
    std::vector<long long> v;
    for (int i = 0; i < 4; ++i) v.push_back(rng.uniform_int(-100, 100));
    return smallest_case(v);
  };
  while (train.size() < 100) train.push_back(rand_case());
  while (test.size() < 1000) test.push_back(rand_case());
  write_problem(dir, "smallest", "Int -> Int -> Int -> Int -> Int", train, test);
}

// median: the middle value of three ints.
Case median_case(const std::vector<long long>& v) {
  Case c;
  for (long long x : v) c.inputs.push_back(v_int(x));
  std::vector<long long> s = v;
  std::sort(s.begin(), s.end());
  c.output = v_int(s[1]);
  return c;
}

void make_median(const std::string& dir) {
  std::vector<Case> train, test;
  for (const auto& v : std::vector<std::vector<long long>>{
           {0, 0, 0},
           {-100, -100, -100},
           {100, 100, 100},
           {-100, 0, 100},
           {100, 0, -100},
           {0, 100, -100},
           {5, 5, -5},
           {-5, 5, 5},
           {5, -5, 5},
           {99, 100, 98},
       })
    train.push_back(median_case(v));
  Rng rng(1002);
  auto rand_case = [&rng]() {
    std::vector<long long> v;
    for (int i = 0; i < 3; ++i) v.push_back(rng.uniform_int(-100, 100));
    return median_case(v);
  };
  while (train.size() < 100) train.push_back(rand_case());
  while (test.size() < 1000) test.push_back(rand_case());
  write_problem(dir, "median", "Int -> Int -> Int -> Int", train, test);
}

// count-odds: how many elements of an int list are odd.
Case count_odds_case(const std::vector<long long>& v) {
  Case c;
  std::vector<ValuePtr> xs;
  long long odd = 0;
  for (long long x : v) {
    if (x % 2 != 0) ++odd;
    xs.push_back(v_int(x));
  }
  c.inputs.push_back(v_list(std::move(xs)));
  c.output = v_int(odd);
  return c;
}

void make_count_odds(const std::string& dir) {
  std::vector<Case> train, test;
  for (const auto& v : std::vector<std::vector<long long>>{
           {},
           {0},
           {1},
           {-1},
           {2},
           {-2},
           {7},
           {-9},
           {1000},
           {-1000},
           {999},
           {-999},
           {0, 0},
           {0, 1},
           {1, 0},
           {7, 1},
           {-9, -1},
           {1, 1, 1},
           {2, 2, 4, 6},
           {1, 3, 5, 7, 9},
           {-2, -4, -6, -8},
           {-1, -3, -5, -7},
           {0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
       })
    train.push_back(count_odds_case(v));
  Rng rng(1003);
  auto rand_case = [&rng](long long maxLen) {
    std::vector<long long> v;
    long long len = rng.uniform_int(0, maxLen);
    for (long long i = 0; i < len; ++i) v.push_back(rng.uniform_int(-1000, 1000));
    return count_odds_case(v);
  };
  // A block of short lists keeps per-case errors informative before the
  // uniform-length fill, whose long lists dominate totals otherwise.
  while (train.size() < 60) train.push_back(rand_case(5));
  while (train.size() < 200) train.push_back(rand_case(50));
  while (test.size() < 2000) test.push_back(rand_case(50));
  write_problem(dir, "count-odds", "[Int] -> Int", train, test);
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "problems";
  make_smallest(dir);
  make_median(dir);
  make_count_odds(dir);
  return 0;
}
