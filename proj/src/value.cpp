// SPDX-License-Identifier: MIT

#include "foldsynth/value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace foldsynth {

namespace {

std::shared_ptr<Value> make(Value::Tag tag) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  return v;
}

}  // namespace

ValuePtr v_int(long long x) {
  // Small integers dominate evaluator traffic (indices, counters, literals);
  // interning them removes the allocation from the common case.
  static constexpr long long kLo = -1024, kHi = 1024;
  static const std::vector<ValuePtr> interned = [] {
    std::vector<ValuePtr> t;
    t.reserve(static_cast<std::size_t>(kHi - kLo + 1));
    for (long long n = kLo; n <= kHi; ++n) {
      auto v = make(Value::Tag::Int);
      v->i = n;
      t.push_back(std::move(v));
    }
    return t;
  }();
  if (x >= kLo && x <= kHi) return interned[static_cast<std::size_t>(x - kLo)];
  auto v = make(Value::Tag::Int);
  v->i = x;
  return v;
}
ValuePtr v_float(double x) {
  auto v = make(Value::Tag::Float);
  v->f = x;
  return v;
}
ValuePtr v_bool(bool x) {
  static const ValuePtr vTrue = [] {
    auto v = make(Value::Tag::Bool);
    v->b = true;
    return ValuePtr(v);
  }();
  static const ValuePtr vFalse = [] {
    auto v = make(Value::Tag::Bool);
    v->b = false;
    return ValuePtr(v);
  }();
  return x ? vTrue : vFalse;
}
ValuePtr v_char(char x) {
  static const std::vector<ValuePtr> interned = [] {
    std::vector<ValuePtr> t;
    t.reserve(256);
    for (int n = 0; n < 256; ++n) {
      auto v = make(Value::Tag::Char);
      v->c = static_cast<char>(n);
      t.push_back(std::move(v));
    }
    return t;
  }();
  return interned[static_cast<unsigned char>(x)];
}
ValuePtr v_list(std::vector<ValuePtr> xs) {
  auto v = make(Value::Tag::List);
  v->elems = std::move(xs);
  return v;
}
ValuePtr v_string(std::string_view s) {
  std::vector<ValuePtr> xs;
  xs.reserve(s.size());
  for (char c : s) xs.push_back(v_char(c));
  return v_list(std::move(xs));
}
ValuePtr v_pair(ValuePtr a, ValuePtr b) {
  auto v = make(Value::Tag::Pair);
  v->first = std::move(a);
  v->second = std::move(b);
  return v;
}

ValuePtr v_set(std::vector<ValuePtr> xs) {
  std::sort(xs.begin(), xs.end(), [](const ValuePtr& a, const ValuePtr& b) {
    return canonical_compare(a, b) == Cmp::LT;
  });
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const ValuePtr& a, const ValuePtr& b) { return value_equal(a, b); }),
           xs.end());
  auto v = make(Value::Tag::Set);
  v->elems = std::move(xs);
  return v;
}

ValuePtr v_map(std::vector<std::pair<ValuePtr, ValuePtr>> kvs) {
  // Stable sort + keep the last entry per key: fromList is right-biased.
  std::stable_sort(kvs.begin(), kvs.end(), [](const auto& a, const auto& b) {
    return canonical_compare(a.first, b.first) == Cmp::LT;
  });
  std::vector<std::pair<ValuePtr, ValuePtr>> out;
  for (auto& kv : kvs) {
    if (!out.empty() && value_equal(out.back().first, kv.first))
      out.back().second = kv.second;
    else
      out.push_back(kv);
  }
  auto v = make(Value::Tag::Map);
  v->entries = std::move(out);
  return v;
}

ValuePtr v_nothing() {
  static const ValuePtr v = make(Value::Tag::Maybe);
  return v;
}
ValuePtr v_just(ValuePtr x) {
  auto v = make(Value::Tag::Maybe);
  v->first = std::move(x);
  return v;
}
ValuePtr v_closure_expr(std::shared_ptr<const Expr> lambda, Env captured) {
  auto v = make(Value::Tag::Closure);
  v->lambda = std::move(lambda);
  v->captured = std::make_shared<Env>(std::move(captured));
  return v;
}
ValuePtr v_closure_prim(const Primitive* prim, std::vector<ValuePtr> applied) {
  auto v = make(Value::Tag::Closure);
  v->prim = prim;
  v->applied = std::move(applied);
  return v;
}

namespace {

Cmp cmp_of(int c) { return c < 0 ? Cmp::LT : (c > 0 ? Cmp::GT : Cmp::EQ); }

Cmp compare_seq(const std::vector<ValuePtr>& a, const std::vector<ValuePtr>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Cmp c = canonical_compare(a[i], b[i]);
    if (c != Cmp::EQ) return c;
  }
  if (a.size() == b.size()) return Cmp::EQ;
  return a.size() < b.size() ? Cmp::LT : Cmp::GT;
}

}  // namespace

Cmp canonical_compare(const ValuePtr& a, const ValuePtr& b) {
  if (a->tag != b->tag) return Cmp::Incomparable;
  switch (a->tag) {
    case Value::Tag::Int:
      return cmp_of(a->i < b->i ? -1 : (a->i > b->i ? 1 : 0));
    case Value::Tag::Float:
      return cmp_of(a->f < b->f ? -1 : (a->f > b->f ? 1 : 0));
    case Value::Tag::Bool:
      return cmp_of(int(a->b) - int(b->b));
    case Value::Tag::Char:
      return cmp_of(int(static_cast<unsigned char>(a->c)) - int(static_cast<unsigned char>(b->c)));
    case Value::Tag::List:
    case Value::Tag::Set:
      return compare_seq(a->elems, b->elems);
    case Value::Tag::Pair: {
      Cmp c = canonical_compare(a->first, b->first);
      if (c != Cmp::EQ) return c;
      return canonical_compare(a->second, b->second);
    }
    case Value::Tag::Map: {
      std::size_t n = std::min(a->entries.size(), b->entries.size());
      for (std::size_t i = 0; i < n; ++i) {
        Cmp c = canonical_compare(a->entries[i].first, b->entries[i].first);
        if (c != Cmp::EQ) return c;
        c = canonical_compare(a->entries[i].second, b->entries[i].second);
        if (c != Cmp::EQ) return c;
      }
      if (a->entries.size() == b->entries.size()) return Cmp::EQ;
      return a->entries.size() < b->entries.size() ? Cmp::LT : Cmp::GT;
    }
    case Value::Tag::Maybe: {
      bool ja = a->first != nullptr, jb = b->first != nullptr;
      if (!ja && !jb) return Cmp::EQ;
      if (ja != jb) return ja ? Cmp::GT : Cmp::LT;  // Nothing < Just
      return canonical_compare(a->first, b->first);
    }
    case Value::Tag::Closure:
      return Cmp::Incomparable;
  }
  return Cmp::Incomparable;
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  return canonical_compare(a, b) == Cmp::EQ;
}

bool is_char_list(const ValuePtr& v) {
  if (v->tag != Value::Tag::List) return false;
  for (const auto& e : v->elems)
    if (e->tag != Value::Tag::Char) return false;
  return true;
}

std::string list_to_string(const ValuePtr& v) {
  std::string s;
  s.reserve(v->elems.size());
  for (const auto& e : v->elems) s.push_back(e->c);
  return s;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_float(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  // Shortest round-trip form; force a decimal marker so Float literals are
  // distinguishable from Int literals.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

namespace {

void escape_char_into(char c, char quote, std::string& out) {
  switch (c) {
    case '\n': out += "\\n"; return;
    case '\t': out += "\\t"; return;
    case '\\': out += "\\\\"; return;
    default:
      if (c == quote) {
        out += '\\';
        out += quote;
      } else {
        out += c;
      }
      return;
  }
}

void render_into(const ValuePtr& v, std::string& out) {
  switch (v->tag) {
    case Value::Tag::Int:
      out += std::to_string(v->i);
      return;
    case Value::Tag::Float:
      out += render_float(v->f);
      return;
    case Value::Tag::Bool:
      out += v->b ? "True" : "False";
      return;
    case Value::Tag::Char:
      out += '\'';
      escape_char_into(v->c, '\'', out);
      out += '\'';
      return;
    case Value::Tag::List:
      if (!v->elems.empty() && is_char_list(v)) {
        out += '"';
        for (const auto& e : v->elems) escape_char_into(e->c, '"', out);
        out += '"';
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < v->elems.size(); ++i) {
        if (i) out += ", ";
        render_into(v->elems[i], out);
      }
      out += ']';
      return;
    case Value::Tag::Pair:
      out += '(';
      render_into(v->first, out);
      out += ", ";
      render_into(v->second, out);
      out += ')';
      return;
    case Value::Tag::Map:
      out += '{';
      for (std::size_t i = 0; i < v->entries.size(); ++i) {
        if (i) out += ", ";
        render_into(v->entries[i].first, out);
        out += ": ";
        render_into(v->entries[i].second, out);
      }
      out += '}';
      return;
    case Value::Tag::Set:
      out += '{';
      for (std::size_t i = 0; i < v->elems.size(); ++i) {
        if (i) out += ", ";
        render_into(v->elems[i], out);
      }
      out += '}';
      return;
    case Value::Tag::Maybe:
      if (!v->first) {
        out += "Nothing";
      } else {
        out += "Just ";
        render_into(v->first, out);
      }
      return;
    case Value::Tag::Closure:
      out += "<function>";
      return;
  }
}

}  // namespace

std::string render_value(const ValuePtr& v) {
  std::string out;
  render_into(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// Type-directed parsing

namespace {

struct ValueParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ValueParseError("value parse error at offset " + std::to_string(pos) + ": " + what +
                          " in \"" + std::string(text) + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  char unescape() {
    if (pos >= text.size()) fail("unterminated escape");
    char c = text[pos++];
    if (c != '\\') return c;
    if (pos >= text.size()) fail("unterminated escape");
    char e = text[pos++];
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      case '0': return '\0';
      default: fail(std::string("unknown escape \\") + e);
    }
  }

  ValuePtr parse(const TypePtr& type) {
    skip_ws();
    switch (type->tag) {
      case Type::Tag::Base:
        switch (type->base) {
          case BaseKind::Int: return parse_int();
          case BaseKind::Float: return parse_float();
          case BaseKind::Bool: return parse_bool();
          case BaseKind::Char: return parse_char();
        }
        fail("bad base type");
      case Type::Tag::List: return parse_list(type->args[0]);
      case Type::Tag::Pair: {
        if (!eat('(')) fail("expected (");
        ValuePtr a = parse(type->args[0]);
        if (!eat(',')) fail("expected ,");
        ValuePtr b = parse(type->args[1]);
        if (!eat(')')) fail("expected )");
        return v_pair(a, b);
      }
      case Type::Tag::Map: {
        if (!eat('{')) fail("expected {");
        std::vector<std::pair<ValuePtr, ValuePtr>> kvs;
        if (!eat('}')) {
          do {
            ValuePtr k = parse(type->args[0]);
            if (!eat(':')) fail("expected :");
            ValuePtr v = parse(type->args[1]);
            kvs.emplace_back(k, v);
          } while (eat(','));
          if (!eat('}')) fail("expected }");
        }
        return v_map(std::move(kvs));
      }
      case Type::Tag::Set: {
        if (!eat('{')) fail("expected {");
        std::vector<ValuePtr> xs;
        if (!eat('}')) {
          do {
            xs.push_back(parse(type->args[0]));
          } while (eat(','));
          if (!eat('}')) fail("expected }");
        }
        return v_set(std::move(xs));
      }
      case Type::Tag::Maybe: {
        skip_ws();
        if (text.compare(pos, 7, "Nothing") == 0) {
          pos += 7;
          return v_nothing();
        }
        if (text.compare(pos, 4, "Just") == 0) {
          pos += 4;
          return v_just(parse(type->args[0]));
        }
        fail("expected Nothing or Just");
      }
      case Type::Tag::Fn:
        fail("function values have no textual form");
      case Type::Tag::Var:
        fail("cannot parse a value at an unresolved type variable");
    }
    fail("unreachable");
  }

  ValuePtr parse_int() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    long long out = 0;
    auto res = std::from_chars(text.data() + start, text.data() + pos, out);
    if (res.ec != std::errc()) fail("bad integer");
    return v_int(out);
  }

  ValuePtr parse_float() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E' ||
                                 ((text[pos] == '-' || text[pos] == '+') &&
                                  (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    if (pos == start) fail("expected float");
    double out = 0;
    auto res = std::from_chars(text.data() + start, text.data() + pos, out);
    if (res.ec != std::errc()) fail("bad float");
    return v_float(out);
  }

  ValuePtr parse_bool() {
    skip_ws();
    if (text.compare(pos, 4, "True") == 0) {
      pos += 4;
      return v_bool(true);
    }
    if (text.compare(pos, 5, "False") == 0) {
      pos += 5;
      return v_bool(false);
    }
    fail("expected True or False");
  }

  ValuePtr parse_char() {
    if (!eat('\'')) fail("expected '");
    char c = unescape();
    if (pos >= text.size() || text[pos] != '\'') fail("expected closing '");
    ++pos;
    return v_char(c);
  }

  ValuePtr parse_list(const TypePtr& elem) {
    skip_ws();
    if (peek() == '"') {
      ++pos;
      std::vector<ValuePtr> xs;
      while (pos < text.size() && text[pos] != '"') xs.push_back(v_char(unescape()));
      if (pos >= text.size()) fail("unterminated string");
      ++pos;
      return v_list(std::move(xs));
    }
    if (!eat('[')) fail("expected [ or \"");
    std::vector<ValuePtr> xs;
    if (!eat(']')) {
      do {
        xs.push_back(parse(elem));
      } while (eat(','));
      if (!eat(']')) fail("expected ]");
    }
    return v_list(std::move(xs));
  }
};

}  // namespace

ValuePtr parse_value(std::string_view text, const TypePtr& type) {
  ValueParser p{text};
  ValuePtr v = p.parse(type);
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return v;
}

}  // namespace foldsynth
