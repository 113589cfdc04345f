#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bracket {

enum class Polarity { Down, Up };

inline Polarity flip(Polarity p) {
  return p == Polarity::Down ? Polarity::Up : Polarity::Down;
}

enum class Variance { Covariant, Contravariant, Mixed };

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_), col(col_) {}
};

// A single strand: either a sort atom or a bracket enclosing a word.
struct Strand {
  Polarity pol = Polarity::Down;
  bool is_bracket = false;
  std::string sort;           // set when !is_bracket
  std::vector<Strand> inner;  // set when is_bracket

  friend bool operator==(const Strand&, const Strand&) = default;
};

// A word of strands; the empty word is the unit I.
struct ObjectExpr {
  std::vector<Strand> strands;

  bool is_unit() const { return strands.empty(); }
  friend bool operator==(const ObjectExpr&, const ObjectExpr&) = default;
};

inline Strand atom(std::string sort, Polarity p = Polarity::Down) {
  Strand s;
  s.pol = p;
  s.sort = std::move(sort);
  return s;
}

inline Strand bracket(ObjectExpr contents, Polarity p = Polarity::Down) {
  Strand s;
  s.pol = p;
  s.is_bracket = true;
  s.inner = std::move(contents.strands);
  return s;
}

inline ObjectExpr unit_object() { return {}; }

inline ObjectExpr word(std::vector<Strand> strands) {
  return ObjectExpr{std::move(strands)};
}

inline ObjectExpr tensor(const ObjectExpr& a, const ObjectExpr& b) {
  ObjectExpr r = a;
  r.strands.insert(r.strands.end(), b.strands.begin(), b.strands.end());
  return r;
}

inline ObjectExpr tensor(std::initializer_list<ObjectExpr> parts) {
  ObjectExpr r;
  for (const auto& p : parts)
    r.strands.insert(r.strands.end(), p.strands.begin(), p.strands.end());
  return r;
}

namespace detail {

inline std::vector<Strand> dual_word(const std::vector<Strand>& w) {
  std::vector<Strand> out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Strand s = *it;
    s.pol = flip(s.pol);
    if (s.is_bracket) s.inner = dual_word(s.inner);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Strand> normal_word(const std::vector<Strand>& w,
                                       bool sort_top) {
  std::vector<Strand> out;
  out.reserve(w.size());
  for (const Strand& s : w) {
    Strand t = s;
    if (t.is_bracket) t.inner = normal_word(t.inner, true);
    out.push_back(std::move(t));
  }
  if (sort_top) {
    std::stable_sort(out.begin(), out.end(),
                     [](const Strand& a, const Strand& b) {
                       return a.pol == Polarity::Up && b.pol == Polarity::Down;
                     });
  }
  return out;
}

inline bool word_normalised(const std::vector<Strand>& w, bool check_top) {
  if (check_top) {
    bool seen_down = false;
    for (const Strand& s : w) {
      if (s.pol == Polarity::Down) seen_down = true;
      else if (seen_down) return false;
    }
  }
  for (const Strand& s : w)
    if (s.is_bracket && !word_normalised(s.inner, true)) return false;
  return true;
}

}  // namespace detail

inline ObjectExpr dual_object(const ObjectExpr& o) {
  return ObjectExpr{detail::dual_word(o.strands)};
}

// Sorts every bracket's contents (recursively) so that Up strands precede
// Down strands; the relative order within each polarity class is preserved.
// The top level itself is left unsorted.
inline ObjectExpr normal_form(const ObjectExpr& o) {
  return ObjectExpr{detail::normal_word(o.strands, false)};
}

// Variant that also sorts the top-level word, used for bracket contents.
inline ObjectExpr normal_form_word(const ObjectExpr& o) {
  return ObjectExpr{detail::normal_word(o.strands, true)};
}

inline bool is_normalised(const ObjectExpr& o) {
  return detail::word_normalised(o.strands, false);
}

inline bool is_normalised_word(const ObjectExpr& o) {
  return detail::word_normalised(o.strands, true);
}

inline Variance variance_class(const ObjectExpr& o) {
  bool up = false, down = false;
  for (const Strand& s : o.strands)
    (s.pol == Polarity::Up ? up : down) = true;
  if (up && down) return Variance::Mixed;
  if (up) return Variance::Contravariant;
  return Variance::Covariant;
}

inline bool is_covariant(const ObjectExpr& o) {
  return variance_class(o) == Variance::Covariant;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_word(const std::vector<Strand>& w, std::string& out) {
  bool first = true;
  for (const Strand& s : w) {
    if (!first) out += ' ';
    first = false;
    if (s.is_bracket) {
      out += '[';
      if (s.inner.empty()) out += 'I';
      else print_word(s.inner, out);
      out += ']';
    } else {
      out += s.sort;
    }
    if (s.pol == Polarity::Up) out += '^';
  }
}

}  // namespace detail

inline std::string print_object(const ObjectExpr& o) {
  if (o.is_unit()) return "I";
  std::string out;
  detail::print_word(o.strands, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct ObjLexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit ObjLexer(const std::string& s) : src(s) {}

  void advance() {
    if (pos < src.size()) {
      if (src[pos] == '\n') { ++line; col = 1; }
      else ++col;
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
  }

  bool eof() { skip_ws(); return pos >= src.size(); }
  char peek() { skip_ws(); return pos < src.size() ? src[pos] : '\0'; }
};

inline std::vector<Strand> parse_word(ObjLexer& lx, bool inside_bracket);

inline std::string parse_ident(ObjLexer& lx) {
  lx.skip_ws();
  std::string name;
  while (lx.pos < lx.src.size()) {
    char c = lx.src[lx.pos];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      name += c;
      lx.advance();
    } else break;
  }
  if (name.empty())
    throw ParseError("expected identifier", lx.line, lx.col);
  return name;
}

inline std::vector<Strand> parse_word(ObjLexer& lx, bool inside_bracket) {
  std::vector<Strand> out;
  for (;;) {
    char c = lx.peek();
    if (c == '\0') {
      if (inside_bracket)
        throw ParseError("unbalanced bracket", lx.line, lx.col);
      break;
    }
    if (c == ']' || c == ')') {
      if (!inside_bracket)
        throw ParseError(std::string("unbalanced '") + c + "'", lx.line, lx.col);
      break;
    }
    if (c == '(') {
      // parentheses are transparent grouping; a trailing '^' dualises the group
      lx.advance();
      std::vector<Strand> group = parse_word(lx, true);
      if (lx.peek() != ')')
        throw ParseError("expected ')'", lx.line, lx.col);
      lx.advance();
      if (lx.pos < lx.src.size() && lx.src[lx.pos] == '^') {
        lx.advance();
        group = dual_word(group);
      }
      out.insert(out.end(), group.begin(), group.end());
      continue;
    }
    Strand s;
    if (c == '[') {
      lx.advance();
      s.is_bracket = true;
      s.inner = parse_word(lx, true);
      if (lx.peek() != ']')
        throw ParseError("expected ']'", lx.line, lx.col);
      lx.advance();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = parse_ident(lx);
      if (name == "I") continue;  // the unit contributes no strand
      s.sort = std::move(name);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'",
                       lx.line, lx.col);
    }
    // no whitespace allowed before '^'
    if (lx.pos < lx.src.size() && lx.src[lx.pos] == '^') {
      s.pol = Polarity::Up;
      lx.advance();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

inline ObjectExpr parse_object(const std::string& text) {
  detail::ObjLexer lx(text);
  ObjectExpr o{detail::parse_word(lx, false)};
  if (!lx.eof())
    throw ParseError("trailing input", lx.line, lx.col);
  return o;
}

// Collects sort names not in `known`; used for validation against a signature.
inline void collect_unknown_sorts(const ObjectExpr& o,
                                  const std::vector<std::string>& known,
                                  std::vector<std::string>& out) {
  for (const Strand& s : o.strands) {
    if (s.is_bracket) {
      collect_unknown_sorts(ObjectExpr{s.inner}, known, out);
    } else if (std::find(known.begin(), known.end(), s.sort) == known.end() &&
               std::find(out.begin(), out.end(), s.sort) == out.end()) {
      out.push_back(s.sort);
    }
  }
}

// Splits a mixed word into its Up strands and Down strands, order preserved.
inline std::pair<ObjectExpr, ObjectExpr> split_polarity(const ObjectExpr& o) {
  ObjectExpr ups, downs;
  for (const Strand& s : o.strands)
    (s.pol == Polarity::Up ? ups : downs).strands.push_back(s);
  return {ups, downs};
}

// A total order on objects, used for deterministic tie-breaking.
inline std::strong_ordering compare(const Strand& a, const Strand& b);

inline std::strong_ordering compare(const ObjectExpr& a, const ObjectExpr& b) {
  std::size_t n = std::min(a.strands.size(), b.strands.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = compare(a.strands[i], b.strands[i]); c != 0) return c;
  return a.strands.size() <=> b.strands.size();
}

inline std::strong_ordering compare(const Strand& a, const Strand& b) {
  if (a.is_bracket != b.is_bracket)
    return a.is_bracket ? std::strong_ordering::greater
                        : std::strong_ordering::less;
  if (a.pol != b.pol)
    return a.pol == Polarity::Down ? std::strong_ordering::less
                                   : std::strong_ordering::greater;
  if (a.is_bracket) return compare(ObjectExpr{a.inner}, ObjectExpr{b.inner});
  return a.sort.compare(b.sort) <=> 0;
}

}  // namespace bracket
