#pragma once

#include <optional>
#include <string>
#include <vector>

#include "objects.hpp"

namespace bracket {

struct Sort {
  std::string name;
  friend bool operator==(const Sort&, const Sort&) = default;
};

struct GeneratorDecl {
  std::string name;
  ObjectExpr arity;    // covariant word
  ObjectExpr coarity;  // covariant word
  friend bool operator==(const GeneratorDecl&, const GeneratorDecl&) = default;
};

struct Diagnostic {
  std::string code;  // DuplicateName, UnknownSort, BadName, NonCovariant
  std::string message;
};

struct Signature {
  std::vector<Sort> sorts;
  std::vector<GeneratorDecl> generators;
  bool cartesian = false;

  bool has_sort(const std::string& name) const {
    for (const Sort& s : sorts)
      if (s.name == name) return true;
    return false;
  }

  const GeneratorDecl* find_generator(const std::string& name) const {
    for (const GeneratorDecl& g : generators)
      if (g.name == name) return &g;
    return nullptr;
  }

  std::vector<std::string> sort_names() const {
    std::vector<std::string> out;
    out.reserve(sorts.size());
    for (const Sort& s : sorts) out.push_back(s.name);
    return out;
  }
};

inline bool valid_name(const std::string& n) {
  if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0]))))
    return false;
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::vector<Diagnostic> validate(const Signature& sig) {
  std::vector<Diagnostic> out;
  auto known = sig.sort_names();
  for (std::size_t i = 0; i < sig.sorts.size(); ++i) {
    if (!valid_name(sig.sorts[i].name))
      out.push_back({"BadName", "invalid sort name '" + sig.sorts[i].name + "'"});
    for (std::size_t j = i + 1; j < sig.sorts.size(); ++j)
      if (sig.sorts[i].name == sig.sorts[j].name)
        out.push_back({"DuplicateName",
                       "duplicate sort '" + sig.sorts[i].name + "'"});
  }
  for (std::size_t i = 0; i < sig.generators.size(); ++i) {
    const auto& g = sig.generators[i];
    if (!valid_name(g.name))
      out.push_back({"BadName", "invalid generator name '" + g.name + "'"});
    for (std::size_t j = i + 1; j < sig.generators.size(); ++j)
      if (g.name == sig.generators[j].name)
        out.push_back({"DuplicateName", "duplicate generator '" + g.name + "'"});
    std::vector<std::string> unknown;
    collect_unknown_sorts(g.arity, known, unknown);
    collect_unknown_sorts(g.coarity, known, unknown);
    for (const auto& u : unknown)
      out.push_back({"UnknownSort",
                     "generator '" + g.name + "' uses undeclared sort '" + u + "'"});
    if (!is_covariant(g.arity) || !is_covariant(g.coarity))
      out.push_back({"NonCovariant",
                     "generator '" + g.name + "' boundary must be a covariant word"});
  }
  return out;
}

struct DualGen {
  std::string name;     // f*
  ObjectExpr arity;     // (coar f)*
  ObjectExpr coarity;   // (ar f)*
};

inline DualGen dual_generator(const Signature& sig, const std::string& name) {
  const GeneratorDecl* g = sig.find_generator(name);
  if (!g) throw std::runtime_error("unknown generator '" + name + "'");
  return DualGen{g->name + "*", dual_object(g->coarity), dual_object(g->arity)};
}

// ---------------------------------------------------------------------------
// Signature file format:
//   sorts A B ;
//   gen f : A -> [A^ B] ;
//   cartesian ;

inline std::string print_signature(const Signature& sig) {
  std::string out = "sorts";
  for (const Sort& s : sig.sorts) out += " " + s.name;
  out += ";\n";
  for (const GeneratorDecl& g : sig.generators)
    out += "gen " + g.name + " : " + print_object(g.arity) + " -> " +
           print_object(g.coarity) + ";\n";
  if (sig.cartesian) out += "cartesian;\n";
  return out;
}

inline Signature parse_signature(const std::string& text) {
  Signature sig;
  detail::ObjLexer lx(text);
  auto expect = [&](char c) {
    if (lx.peek() != c)
      throw ParseError(std::string("expected '") + c + "'", lx.line, lx.col);
    lx.advance();
  };
  auto read_until = [&](const std::string& stop) {
    // collects raw text up to (not including) one of the stop characters
    std::string raw;
    while (lx.pos < lx.src.size() &&
           stop.find(lx.src[lx.pos]) == std::string::npos) {
      raw += lx.src[lx.pos];
      lx.advance();
    }
    return raw;
  };
  while (!lx.eof()) {
    std::string kw = detail::parse_ident(lx);
    if (kw == "sorts") {
      while (lx.peek() != ';')
        sig.sorts.push_back(Sort{detail::parse_ident(lx)});
      expect(';');
    } else if (kw == "gen") {
      GeneratorDecl g;
      g.name = detail::parse_ident(lx);
      expect(':');
      std::string lhs = read_until("-;");
      if (lx.peek() != '-')
        throw ParseError("expected '->'", lx.line, lx.col);
      lx.advance();
      expect('>');
      std::string rhs = read_until(";");
      expect(';');
      g.arity = parse_object(lhs);
      g.coarity = parse_object(rhs);
      sig.generators.push_back(std::move(g));
    } else if (kw == "cartesian") {
      expect(';');
      sig.cartesian = true;
    } else {
      throw ParseError("unknown declaration '" + kw + "'", lx.line, lx.col);
    }
  }
  auto diags = validate(sig);
  for (const auto& d : diags)
    if (d.code == "DuplicateName" || d.code == "UnknownSort")
      throw ParseError(d.message, 0, 0);
  return sig;
}

}  // namespace bracket
