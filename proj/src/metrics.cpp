// SPDX-License-Identifier: MIT

#include "foldsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace foldsynth {

namespace {

double magnitude(const ValuePtr& v) {
  switch (v->tag) {
    case Value::Tag::Int:
      return std::fabs(static_cast<double>(v->i));
    case Value::Tag::Float:
      return std::fabs(v->f);
    case Value::Tag::List:
    case Value::Tag::Set: {
      double m = 0;
      for (const auto& e : v->elems) m = std::max(m, magnitude(e));
      return m;
    }
    case Value::Tag::Pair:
      return std::max(magnitude(v->first), magnitude(v->second));
    case Value::Tag::Map: {
      double m = 0;
      for (const auto& kv : v->entries)
        m = std::max({m, magnitude(kv.first), magnitude(kv.second)});
      return m;
    }
    case Value::Tag::Maybe:
      return v->first ? magnitude(v->first) : 0.0;
    default:
      return 1.0;
  }
}

double symmetric_difference(const std::vector<ValuePtr>& a, const std::vector<ValuePtr>& b) {
  auto count_missing = [](const std::vector<ValuePtr>& xs, const std::vector<ValuePtr>& ys) {
    double n = 0;
    for (const auto& x : xs) {
      bool found = false;
      for (const auto& y : ys)
        if (canonical_compare(x, y) == Cmp::EQ) {
          found = true;
          break;
        }
      if (!found) n += 1;
    }
    return n;
  };
  return count_missing(a, b) + count_missing(b, a);
}

}  // namespace

long long levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<long long> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<long long>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<long long>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      long long sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double case_error(const ValuePtr& got, const ValuePtr& want) {
  if (got->tag != want->tag) return kInfiniteError;
  switch (want->tag) {
    case Value::Tag::Int:
      return std::fabs(static_cast<double>(got->i) - static_cast<double>(want->i));
    case Value::Tag::Float: {
      double d = std::fabs(got->f - want->f);
      return d <= 1e-4 ? 0.0 : d;
    }
    case Value::Tag::Bool:
      return got->b == want->b ? 0.0 : 1.0;
    case Value::Tag::Char:
      return got->c == want->c ? 0.0 : 1.0;
    case Value::Tag::List: {
      if (is_char_list(got) && is_char_list(want) &&
          !(got->elems.empty() && want->elems.empty()))
        return static_cast<double>(
            levenshtein(list_to_string(got), list_to_string(want)));
      const auto& g = got->elems;
      const auto& w = want->elems;
      double err = 0;
      std::size_t common = std::min(g.size(), w.size());
      for (std::size_t i = 0; i < common; ++i) err += case_error(g[i], w[i]);
      if (g.size() != w.size()) {
        double scale = 1.0;
        for (const auto& e : g) scale = std::max(scale, magnitude(e));
        for (const auto& e : w) scale = std::max(scale, magnitude(e));
        err += std::fabs(static_cast<double>(g.size()) - static_cast<double>(w.size())) * scale;
      }
      return err;
    }
    case Value::Tag::Pair:
      return case_error(got->first, want->first) + case_error(got->second, want->second);
    case Value::Tag::Set:
      return symmetric_difference(got->elems, want->elems);
    case Value::Tag::Map: {
      auto as_pairs = [](const ValuePtr& v) {
        std::vector<ValuePtr> out;
        for (const auto& kv : v->entries) out.push_back(v_pair(kv.first, kv.second));
        return out;
      };
      return symmetric_difference(as_pairs(got), as_pairs(want));
    }
    case Value::Tag::Maybe:
      if (got->first && want->first) return case_error(got->first, want->first);
      return (got->first == nullptr) == (want->first == nullptr) ? 0.0 : 1.0;
    default:
      return kInfiniteError;  // closures are never valid outputs
  }
}

}  // namespace foldsynth
