// SPDX-License-Identifier: MIT
//
// Registry construction. Order matters: generation enumerates primitives in
// this order, so reordering changes seeded runs.

#include "foldsynth/prims.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "foldsynth/eval.hpp"

namespace foldsynth {

namespace {

using Args = const std::vector<ValuePtr>&;

[[noreturn]] void raise(EvalErrorKind k) { throw EvalError{k}; }

long long ck_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) raise(EvalErrorKind::Overflow);
  return r;
}
long long ck_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) raise(EvalErrorKind::Overflow);
  return r;
}
long long ck_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) raise(EvalErrorKind::Overflow);
  return r;
}

void div_guard(long long a, long long b) {
  if (b == 0) raise(EvalErrorKind::DivByZero);
  if (a == INT64_MIN && b == -1) raise(EvalErrorKind::Overflow);
}

// Haskell div: floor division.
long long hs_div(long long a, long long b) {
  div_guard(a, b);
  long long q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}
// Haskell mod: result takes the divisor's sign.
long long hs_mod(long long a, long long b) {
  div_guard(a, b);
  long long r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}
long long hs_quot(long long a, long long b) {
  div_guard(a, b);
  return a / b;
}
long long hs_rem(long long a, long long b) {
  div_guard(a, b);
  return a % b;
}

double fin(double x) {
  if (!std::isfinite(x)) raise(EvalErrorKind::NumericDomain);
  return x;
}

// List-building primitives charge one iteration per constructed element so
// exponential blowups (e.g. repeated self-append inside a fold) hit the
// iteration budget before exhausting memory.
void charge(EvalState& st, long long n) {
  st.iterations += n;
  if (st.iterations > st.budget.maxIterations) raise(EvalErrorKind::BudgetExceeded);
}

bool ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

Cmp cmp_or_raise(const ValuePtr& a, const ValuePtr& b) {
  Cmp c = canonical_compare(a, b);
  if (c == Cmp::Incomparable) raise(EvalErrorKind::InvalidArgument);
  return c;
}

std::vector<Primitive> make_all() {
  std::vector<Primitive> out;
  out.reserve(128);

  const TypePtr I = t_int(), F = t_float(), B = t_bool(), C = t_char();
  const TypePtr a = t_var(1), b = t_var(2);

  auto def = [&out](std::string name, std::vector<TypePtr> params, TypePtr result,
                    std::function<ValuePtr(EvalState&, Args)> fn,
                    std::vector<int> comparableVars = {}, bool special = false) {
    Primitive p;
    p.name = std::move(name);
    p.params = std::move(params);
    p.result = std::move(result);
    p.comparableVars = std::move(comparableVars);
    p.special = special;
    p.fn = std::move(fn);
    out.push_back(std::move(p));
  };

  auto int2 = [&](std::string name, long long (*op)(long long, long long)) {
    def(std::move(name), {I, I}, I,
        [op](EvalState&, Args v) { return v_int(op(v[0]->i, v[1]->i)); });
  };
  auto float2 = [&](std::string name, double (*op)(double, double)) {
    def(std::move(name), {F, F}, F,
        [op](EvalState&, Args v) { return v_float(fin(op(v[0]->f, v[1]->f))); });
  };
  auto intCmp = [&](std::string name, bool (*op)(long long, long long)) {
    def(std::move(name), {I, I}, B, [op](EvalState&, Args v) { return v_bool(op(v[0]->i, v[1]->i)); });
  };
  auto floatCmp = [&](std::string name, bool (*op)(double, double)) {
    def(std::move(name), {F, F}, B, [op](EvalState&, Args v) { return v_bool(op(v[0]->f, v[1]->f)); });
  };

  // --- integer arithmetic -------------------------------------------------
  int2("addInt", +[](long long x, long long y) { return ck_add(x, y); });
  int2("subInt", +[](long long x, long long y) { return ck_sub(x, y); });
  int2("multInt", +[](long long x, long long y) { return ck_mul(x, y); });
  int2("divInt", +[](long long x, long long y) { return hs_div(x, y); });
  int2("quotInt", +[](long long x, long long y) { return hs_quot(x, y); });
  int2("modInt", +[](long long x, long long y) { return hs_mod(x, y); });
  int2("remInt", +[](long long x, long long y) { return hs_rem(x, y); });
  int2("minInt", +[](long long x, long long y) { return std::min(x, y); });
  int2("maxInt", +[](long long x, long long y) { return std::max(x, y); });
  def("absInt", {I}, I, [](EvalState&, Args v) {
    if (v[0]->i == INT64_MIN) raise(EvalErrorKind::Overflow);
    return v_int(v[0]->i < 0 ? -v[0]->i : v[0]->i);
  });
  def("incrementInt", {I}, I, [](EvalState&, Args v) { return v_int(ck_add(v[0]->i, 1)); });
  def("decrementInt", {I}, I, [](EvalState&, Args v) { return v_int(ck_sub(v[0]->i, 1)); });
  def("sumInt", {t_list(I)}, I, [](EvalState&, Args v) {
    long long s = 0;
    for (const auto& e : v[0]->elems) s = ck_add(s, e->i);
    return v_int(s);
  });
  def("productInt", {t_list(I)}, I, [](EvalState&, Args v) {
    long long s = 1;
    for (const auto& e : v[0]->elems) s = ck_mul(s, e->i);
    return v_int(s);
  });

  // --- float arithmetic ---------------------------------------------------
  float2("addFloat", +[](double x, double y) { return x + y; });
  float2("subFloat", +[](double x, double y) { return x - y; });
  float2("multFloat", +[](double x, double y) { return x * y; });
  float2("divFloat", +[](double x, double y) { return x / y; });
  float2("minFloat", +[](double x, double y) { return std::min(x, y); });
  float2("maxFloat", +[](double x, double y) { return std::max(x, y); });
  float2("powFloat", +[](double x, double y) { return std::pow(x, y); });
  def("absFloat", {F}, F, [](EvalState&, Args v) { return v_float(std::fabs(v[0]->f)); });
  def("sqrt", {F}, F, [](EvalState&, Args v) {
    if (v[0]->f < 0) raise(EvalErrorKind::NumericDomain);
    return v_float(std::sqrt(v[0]->f));
  });
  def("sin", {F}, F, [](EvalState&, Args v) { return v_float(std::sin(v[0]->f)); });
  def("cos", {F}, F, [](EvalState&, Args v) { return v_float(std::cos(v[0]->f)); });
  def("incrementFloat", {F}, F, [](EvalState&, Args v) { return v_float(fin(v[0]->f + 1.0)); });
  def("decrementFloat", {F}, F, [](EvalState&, Args v) { return v_float(fin(v[0]->f - 1.0)); });
  def("sumFloat", {t_list(F)}, F, [](EvalState&, Args v) {
    double s = 0;
    for (const auto& e : v[0]->elems) s += e->f;
    return v_float(fin(s));
  });
  def("productFloat", {t_list(F)}, F, [](EvalState&, Args v) {
    double s = 1;
    for (const auto& e : v[0]->elems) s *= e->f;
    return v_float(fin(s));
  });

  // --- comparisons --------------------------------------------------------
  intCmp("ltInt", +[](long long x, long long y) { return x < y; });
  intCmp("gtInt", +[](long long x, long long y) { return x > y; });
  intCmp("gteInt", +[](long long x, long long y) { return x >= y; });
  intCmp("lteInt", +[](long long x, long long y) { return x <= y; });
  floatCmp("ltFloat", +[](double x, double y) { return x < y; });
  floatCmp("gtFloat", +[](double x, double y) { return x > y; });
  floatCmp("gteFloat", +[](double x, double y) { return x >= y; });
  floatCmp("lteFloat", +[](double x, double y) { return x <= y; });

  // --- conversions --------------------------------------------------------
  def("fromIntegral", {I}, F, [](EvalState&, Args v) { return v_float(double(v[0]->i)); });
  auto float2int = [&](std::string name, double (*op)(double)) {
    def(std::move(name), {F}, I, [op](EvalState&, Args v) {
      double r = op(v[0]->f);
      if (!(r >= -9.2e18 && r <= 9.2e18)) raise(EvalErrorKind::Overflow);
      return v_int(static_cast<long long>(r));
    });
  };
  float2int("floor", +[](double x) { return std::floor(x); });
  float2int("ceiling", +[](double x) { return std::ceil(x); });
  // Haskell round: half to even.
  float2int("round", +[](double x) { return std::nearbyint(x); });

  // --- booleans (and/or/if are lazy special forms) ------------------------
  def("and", {B, B}, B, [](EvalState&, Args v) { return v_bool(v[0]->b && v[1]->b); }, {}, true);
  def("or", {B, B}, B, [](EvalState&, Args v) { return v_bool(v[0]->b || v[1]->b); }, {}, true);
  def("not", {B}, B, [](EvalState&, Args v) { return v_bool(!v[0]->b); });
  def("if", {B, a, a}, a,
      [](EvalState&, Args v) { return v[0]->b ? v[1] : v[2]; }, {}, true);

  // --- polymorphic equality / order ---------------------------------------
  def("eq", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) == Cmp::EQ); }, {1});
  def("neq", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) != Cmp::EQ); }, {1});
  def("gtOrd", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) == Cmp::GT); }, {1});
  def("ltOrd", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) == Cmp::LT); }, {1});
  def("gteOrd", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) != Cmp::LT); }, {1});
  def("lteOrd", {a, a}, B,
      [](EvalState&, Args v) { return v_bool(cmp_or_raise(v[0], v[1]) != Cmp::GT); }, {1});
  def("min", {a, a}, a,
      [](EvalState&, Args v) { return cmp_or_raise(v[0], v[1]) == Cmp::GT ? v[1] : v[0]; }, {1});
  def("max", {a, a}, a,
      [](EvalState&, Args v) { return cmp_or_raise(v[0], v[1]) == Cmp::LT ? v[1] : v[0]; }, {1});

  // --- show ---------------------------------------------------------------
  def("showInt", {I}, t_string(),
      [](EvalState&, Args v) { return v_string(std::to_string(v[0]->i)); });
  def("showFloat", {F}, t_string(),
      [](EvalState&, Args v) { return v_string(render_float(v[0]->f)); });
  def("showBool", {B}, t_string(),
      [](EvalState&, Args v) { return v_string(v[0]->b ? "True" : "False"); });
  def("showChar", {C}, t_string(),
      [](EvalState&, Args v) { return v_string(std::string(1, v[0]->c)); });

  // --- characters ---------------------------------------------------------
  def("charToInt", {C}, I,
      [](EvalState&, Args v) { return v_int(static_cast<unsigned char>(v[0]->c)); });
  def("digitToInt", {C}, I, [](EvalState&, Args v) {
    char c = v[0]->c;
    if (ascii_digit(c)) return v_int(c - '0');
    if (c >= 'a' && c <= 'f') return v_int(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return v_int(c - 'A' + 10);
    raise(EvalErrorKind::InvalidArgument);
  });
  def("intToChar", {I}, C, [](EvalState&, Args v) {
    if (v[0]->i < 0 || v[0]->i > 255) raise(EvalErrorKind::InvalidArgument);
    return v_char(static_cast<char>(v[0]->i));
  });
  def("isLetter", {C}, B, [](EvalState&, Args v) { return v_bool(ascii_letter(v[0]->c)); });
  def("isSpace", {C}, B, [](EvalState&, Args v) { return v_bool(ascii_space(v[0]->c)); });
  def("isDigit", {C}, B, [](EvalState&, Args v) { return v_bool(ascii_digit(v[0]->c)); });
  def("toLower", {C}, C, [](EvalState&, Args v) {
    char c = v[0]->c;
    return v_char(c >= 'A' && c <= 'Z' ? char(c - 'A' + 'a') : c);
  });
  def("toUpper", {C}, C, [](EvalState&, Args v) {
    char c = v[0]->c;
    return v_char(c >= 'a' && c <= 'z' ? char(c - 'a' + 'A') : c);
  });

  // --- lists --------------------------------------------------------------
  def("length", {t_list(a)}, I,
      [](EvalState&, Args v) { return v_int(static_cast<long long>(v[0]->elems.size())); });
  def("cons", {a, t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[1]->elems.size()) + 1);
    std::vector<ValuePtr> xs;
    xs.reserve(v[1]->elems.size() + 1);
    xs.push_back(v[0]);
    xs.insert(xs.end(), v[1]->elems.begin(), v[1]->elems.end());
    return v_list(std::move(xs));
  });
  def("snoc", {a, t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[1]->elems.size()) + 1);
    std::vector<ValuePtr> xs = v[1]->elems;
    xs.push_back(v[0]);
    return v_list(std::move(xs));
  });
  def("mappend", {t_list(a), t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size() + v[1]->elems.size()));
    std::vector<ValuePtr> xs = v[0]->elems;
    xs.insert(xs.end(), v[1]->elems.begin(), v[1]->elems.end());
    return v_list(std::move(xs));
  });
  def("singleton", {a}, t_list(a),
      [](EvalState&, Args v) { return v_list({v[0]}); });
  def("delete", {a, t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[1]->elems.size()));
    std::vector<ValuePtr> xs;
    xs.reserve(v[1]->elems.size());
    bool removed = false;
    for (const auto& e : v[1]->elems) {
      if (!removed && canonical_compare(e, v[0]) == Cmp::EQ) {
        removed = true;
        continue;
      }
      xs.push_back(e);
    }
    return v_list(std::move(xs));
  }, {1});
  def("elem", {a, t_list(a)}, B, [](EvalState&, Args v) {
    for (const auto& e : v[1]->elems)
      if (canonical_compare(e, v[0]) == Cmp::EQ) return v_bool(true);
    return v_bool(false);
  }, {1});
  def("null", {t_list(a)}, B, [](EvalState&, Args v) { return v_bool(v[0]->elems.empty()); });
  def("head", {t_list(a)}, a, [](EvalState&, Args v) {
    if (v[0]->elems.empty()) raise(EvalErrorKind::PartialFunction);
    return v[0]->elems.front();
  });
  def("last", {t_list(a)}, a, [](EvalState&, Args v) {
    if (v[0]->elems.empty()) raise(EvalErrorKind::PartialFunction);
    return v[0]->elems.back();
  });
  def("tail", {t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    if (v[0]->elems.empty()) raise(EvalErrorKind::PartialFunction);
    charge(st, static_cast<long long>(v[0]->elems.size()) - 1);
    return v_list(std::vector<ValuePtr>(v[0]->elems.begin() + 1, v[0]->elems.end()));
  });
  def("init", {t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    if (v[0]->elems.empty()) raise(EvalErrorKind::PartialFunction);
    charge(st, static_cast<long long>(v[0]->elems.size()) - 1);
    return v_list(std::vector<ValuePtr>(v[0]->elems.begin(), v[0]->elems.end() - 1));
  });
  def("zip", {t_list(a), t_list(b)}, t_list(t_pair(a, b)), [](EvalState& st, Args v) {
    std::size_t n = std::min(v[0]->elems.size(), v[1]->elems.size());
    charge(st, static_cast<long long>(n));
    std::vector<ValuePtr> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) xs.push_back(v_pair(v[0]->elems[i], v[1]->elems[i]));
    return v_list(std::move(xs));
  });
  def("replicate", {I, a}, t_list(a), [](EvalState& st, Args v) {
    long long n = std::max(0ll, v[0]->i);
    charge(st, n);
    std::vector<ValuePtr> xs(static_cast<std::size_t>(n), v[1]);
    return v_list(std::move(xs));
  });
  def("enumFromThenTo", {I, I, I}, t_list(I), [](EvalState& st, Args v) {
    // Haskell [a, b .. c].
    long long from = v[0]->i, then = v[1]->i, to = v[2]->i;
    long long step = ck_sub(then, from);
    std::vector<ValuePtr> xs;
    if (step == 0) {
      if (to >= from)
        for (;;) charge(st, 1);  // infinite list: budget stops it
      return v_list(std::move(xs));
    }
    for (long long x = from; step > 0 ? x <= to : x >= to; x = ck_add(x, step)) {
      charge(st, 1);
      xs.push_back(v_int(x));
    }
    return v_list(std::move(xs));
  });
  def("range", {I, I, I}, t_list(I), [](EvalState& st, Args v) {
    // from / to / step with inclusive endpoint; from == to short-circuits so
    // `range a a b` is a singleton for every step.
    long long from = v[0]->i, to = v[1]->i, step = v[2]->i;
    if (from == to) return v_list({v_int(from)});
    if (step == 0) raise(EvalErrorKind::InvalidArgument);
    std::vector<ValuePtr> xs;
    for (long long x = from; step > 0 ? x <= to : x >= to; x = ck_add(x, step)) {
      charge(st, 1);
      xs.push_back(v_int(x));
    }
    return v_list(std::move(xs));
  });
  def("take", {I, t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    long long n = std::clamp(v[0]->i, 0ll, static_cast<long long>(v[1]->elems.size()));
    charge(st, n);
    return v_list(std::vector<ValuePtr>(v[1]->elems.begin(), v[1]->elems.begin() + n));
  });
  def("drop", {I, t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    long long n = std::clamp(v[0]->i, 0ll, static_cast<long long>(v[1]->elems.size()));
    charge(st, static_cast<long long>(v[1]->elems.size()) - n);
    return v_list(std::vector<ValuePtr>(v[1]->elems.begin() + n, v[1]->elems.end()));
  });
  def("takeWhile", {t_fn({a}, B), t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    std::vector<ValuePtr> xs;
    for (const auto& e : v[1]->elems) {
      if (!truthy(call_closure(st, v[0], e))) break;
      charge(st, 1);
      xs.push_back(e);
    }
    return v_list(std::move(xs));
  });
  def("any", {t_fn({a}, B), t_list(a)}, B, [](EvalState& st, Args v) {
    for (const auto& e : v[1]->elems)
      if (truthy(call_closure(st, v[0], e))) return v_bool(true);
    return v_bool(false);
  });
  def("all", {t_fn({a}, B), t_list(a)}, B, [](EvalState& st, Args v) {
    for (const auto& e : v[1]->elems)
      if (!truthy(call_closure(st, v[0], e))) return v_bool(false);
    return v_bool(true);
  });
  def("reverse", {t_list(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size()));
    std::vector<ValuePtr> xs(v[0]->elems.rbegin(), v[0]->elems.rend());
    return v_list(std::move(xs));
  });
  def("splitAt", {I, t_list(a)}, t_pair(t_list(a), t_list(a)), [](EvalState& st, Args v) {
    long long n = std::clamp(v[0]->i, 0ll, static_cast<long long>(v[1]->elems.size()));
    charge(st, static_cast<long long>(v[1]->elems.size()));
    return v_pair(v_list(std::vector<ValuePtr>(v[1]->elems.begin(), v[1]->elems.begin() + n)),
                  v_list(std::vector<ValuePtr>(v[1]->elems.begin() + n, v[1]->elems.end())));
  });
  def("intercalate", {t_list(a), t_list(t_list(a))}, t_list(a), [](EvalState& st, Args v) {
    std::vector<ValuePtr> xs;
    for (std::size_t i = 0; i < v[1]->elems.size(); ++i) {
      if (i) {
        charge(st, static_cast<long long>(v[0]->elems.size()));
        xs.insert(xs.end(), v[0]->elems.begin(), v[0]->elems.end());
      }
      charge(st, static_cast<long long>(v[1]->elems[i]->elems.size()));
      xs.insert(xs.end(), v[1]->elems[i]->elems.begin(), v[1]->elems[i]->elems.end());
    }
    return v_list(std::move(xs));
  });

  // --- pairs & application ------------------------------------------------
  def("fst", {t_pair(a, b)}, a, [](EvalState&, Args v) { return v[0]->first; });
  def("snd", {t_pair(a, b)}, b, [](EvalState&, Args v) { return v[0]->second; });
  def("pair", {a, b}, t_pair(a, b), [](EvalState&, Args v) { return v_pair(v[0], v[1]); });
  def("apply", {t_fn({a}, b), a}, b,
      [](EvalState& st, Args v) { return call_closure(st, v[0], v[1]); });

  // --- maps ---------------------------------------------------------------
  const TypePtr k = a, vv = b;
  def("mapSingleton", {k, vv}, t_map(k, vv),
      [](EvalState&, Args v) { return v_map({{v[0], v[1]}}); }, {1});
  def("mapInsert", {k, vv, t_map(k, vv)}, t_map(k, vv), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[2]->entries.size()) + 1);
    auto kvs = v[2]->entries;
    kvs.emplace_back(v[0], v[1]);  // v_map keeps the later entry on ties
    return v_map(std::move(kvs));
  }, {1});
  def("mapInsertWith", {t_fn({vv}, t_fn({vv}, vv)), k, vv, t_map(k, vv)}, t_map(k, vv),
      [](EvalState& st, Args v) {
        charge(st, static_cast<long long>(v[3]->entries.size()) + 1);
        auto kvs = v[3]->entries;
        for (auto& kv : kvs) {
          if (canonical_compare(kv.first, v[1]) == Cmp::EQ) {
            // Data.Map.insertWith f: stores f newValue oldValue.
            ValuePtr merged = call_closure(st, call_closure(st, v[0], v[2]), kv.second);
            kv.second = merged;
            return v_map(std::move(kvs));
          }
        }
        kvs.emplace_back(v[1], v[2]);
        return v_map(std::move(kvs));
      }, {1});
  def("lookup", {k, t_map(k, vv)}, t_maybe(vv), [](EvalState&, Args v) {
    for (const auto& kv : v[1]->entries)
      if (canonical_compare(kv.first, v[0]) == Cmp::EQ) return v_just(kv.second);
    return v_nothing();
  }, {1});
  def("mapFromList", {t_list(t_pair(k, vv))}, t_map(k, vv), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size()));
    std::vector<std::pair<ValuePtr, ValuePtr>> kvs;
    kvs.reserve(v[0]->elems.size());
    for (const auto& e : v[0]->elems) kvs.emplace_back(e->first, e->second);
    return v_map(std::move(kvs));
  }, {1});
  def("keys", {t_map(k, vv)}, t_list(k), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->entries.size()));
    std::vector<ValuePtr> xs;
    xs.reserve(v[0]->entries.size());
    for (const auto& kv : v[0]->entries) xs.push_back(kv.first);
    return v_list(std::move(xs));
  });

  // --- sets ---------------------------------------------------------------
  def("setFromList", {t_list(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size()));
    return v_set(v[0]->elems);
  }, {1});
  def("setToList", {t_set(a)}, t_list(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size()));
    return v_list(v[0]->elems);
  });
  def("setInsert", {a, t_set(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[1]->elems.size()) + 1);
    auto xs = v[1]->elems;
    xs.push_back(v[0]);
    return v_set(std::move(xs));
  }, {1});
  def("setDelete", {a, t_set(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[1]->elems.size()));
    std::vector<ValuePtr> xs;
    for (const auto& e : v[1]->elems)
      if (canonical_compare(e, v[0]) != Cmp::EQ) xs.push_back(e);
    return v_set(std::move(xs));
  }, {1});
  def("setMember", {a, t_set(a)}, B, [](EvalState&, Args v) {
    for (const auto& e : v[1]->elems)
      if (canonical_compare(e, v[0]) == Cmp::EQ) return v_bool(true);
    return v_bool(false);
  }, {1});
  def("setUnion", {t_set(a), t_set(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size() + v[1]->elems.size()));
    auto xs = v[0]->elems;
    xs.insert(xs.end(), v[1]->elems.begin(), v[1]->elems.end());
    return v_set(std::move(xs));
  }, {1});
  def("setIntersection", {t_set(a), t_set(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size() + v[1]->elems.size()));
    std::vector<ValuePtr> xs;
    for (const auto& e : v[0]->elems) {
      for (const auto& f : v[1]->elems)
        if (canonical_compare(e, f) == Cmp::EQ) {
          xs.push_back(e);
          break;
        }
    }
    return v_set(std::move(xs));
  }, {1});
  def("setDifference", {t_set(a), t_set(a)}, t_set(a), [](EvalState& st, Args v) {
    charge(st, static_cast<long long>(v[0]->elems.size() + v[1]->elems.size()));
    std::vector<ValuePtr> xs;
    for (const auto& e : v[0]->elems) {
      bool found = false;
      for (const auto& f : v[1]->elems)
        if (canonical_compare(e, f) == Cmp::EQ) {
          found = true;
          break;
        }
      if (!found) xs.push_back(e);
    }
    return v_set(std::move(xs));
  }, {1});

  return out;
}

const std::vector<Primitive>& storage() {
  static const std::vector<Primitive> prims = make_all();
  return prims;
}

}  // namespace

const std::vector<const Primitive*>& base_registry() {
  static const std::vector<const Primitive*> ptrs = [] {
    std::vector<const Primitive*> v;
    for (const Primitive& p : storage()) v.push_back(&p);
    return v;
  }();
  return ptrs;
}

const Primitive* find_prim(const std::string& name) {
  static const std::map<std::string, const Primitive*> index = [] {
    std::map<std::string, const Primitive*> m;
    for (const Primitive* p : base_registry()) m.emplace(p->name, p);
    return m;
  }();
  auto it = index.find(name);
  return it == index.end() ? nullptr : it->second;
}

Registry Registry::base() {
  Registry r;
  r.prims = base_registry();
  return r;
}

const Primitive* Registry::find(const std::string& name) const {
  for (const Primitive* p : prims)
    if (p->name == name) return p;
  return nullptr;
}

}  // namespace foldsynth
