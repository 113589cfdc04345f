#pragma once

#include <optional>

#include "models.hpp"

namespace bracket {

// A finite family of interpretations: every assignment of the given carrier
// sizes to sorts, with every (basepoint-preserving) generator table,
// enumerated in a fixed lexicographic order and truncated at `cap`.
struct ModelFamily {
  ModelKind kind = ModelKind::FinSet;
  std::vector<int> sizes = {2};
  std::size_t cap = 20000;
};

struct Refutation {
  Interpretation interp;
  int input_index = 0;  // first differing input in the domain carrier
};

namespace detail {

template <class F>
void for_each_interpretation(const Signature& sig, const ModelFamily& fam,
                             F&& visit) {
  std::vector<std::string> names;
  for (const Sort& s : sig.sorts) names.push_back(s.name);
  std::vector<std::size_t> size_idx(names.size(), 0);
  std::size_t seen = 0;
  for (;;) {
    Interpretation base;
    for (std::size_t i = 0; i < names.size(); ++i)
      base.sort_size[names[i]] = fam.sizes[size_idx[i]];
    // carrier sizes for generator tables come from a throwaway semantics
    Semantics probe(sig, fam.kind, base);
    struct GenShape { std::string name; std::size_t dom, cod, forced; };
    std::vector<GenShape> shapes;
    bool feasible = true;
    for (const GeneratorDecl& g : sig.generators) {
      std::size_t ds, cs;
      try {
        ds = probe.carrier(g.arity).elems.size();
        cs = probe.carrier(g.coarity).elems.size();
      } catch (const std::runtime_error&) {
        feasible = false;
        break;
      }
      if (cs == 0 && ds > 0) { feasible = false; break; }
      std::size_t forced = fam.kind == ModelKind::Pointed ? 1 : 0;
      shapes.push_back({g.name, ds, cs, std::min(forced, ds)});
    }
    if (feasible) {
      // odometer over all free table entries, leftmost slowest
      std::vector<std::vector<int>> tables;
      for (const GenShape& s : shapes) {
        std::vector<int> t(s.dom, 0);
        tables.push_back(std::move(t));
      }
      for (;;) {
        Interpretation interp = base;
        for (std::size_t i = 0; i < shapes.size(); ++i)
          interp.gen_table[shapes[i].name] = tables[i];
        if (!visit(interp)) return;
        if (++seen >= fam.cap) return;
        // increment: last generator's last entry fastest
        bool carried = true;
        for (std::size_t i = shapes.size(); carried && i > 0;) {
          --i;
          for (std::size_t j = shapes[i].dom; carried && j > shapes[i].forced;) {
            --j;
            if (++tables[i][j] < static_cast<int>(shapes[i].cod)) {
              carried = false;
            } else {
              tables[i][j] = 0;
            }
          }
        }
        if (carried) break;  // exhausted all tables for this size assignment
      }
    }
    // next size assignment
    std::size_t i = names.size();
    bool done = (i == 0);
    while (i > 0) {
      --i;
      if (++size_idx[i] < fam.sizes.size()) break;
      size_idx[i] = 0;
      if (i == 0) done = true;
    }
    if (done || names.empty()) break;
  }
}

}  // namespace detail

// Compares the two terms in every interpretation of the family; returns the
// first countermodel found, or nullopt if they agree everywhere. Terms with
// up strands on their boundary are compared under a surrounding bracket.
inline std::optional<Refutation> refute(const Signature& sig, const Term& a,
                                        const Term& b, const ModelFamily& fam) {
  MorphType ma = typecheck(sig, a);
  MorphType mb = typecheck(sig, b);
  if (!(ma.dom == mb.dom) || !(ma.cod == mb.cod))
    throw TypeError("CompositionMismatch",
                    "cannot compare terms with different boundaries");
  Term ta = a, tb = b;
  if (!is_covariant(ma.dom) || !is_covariant(ma.cod)) {
    ta = bracketed(a);
    tb = bracketed(b);
  }
  std::optional<Refutation> found;
  detail::for_each_interpretation(sig, fam, [&](const Interpretation& interp) {
    Semantics sem(sig, fam.kind, interp);
    ModelMorphism x = sem.tabulate(ta);
    ModelMorphism y = sem.tabulate(tb);
    for (std::size_t i = 0; i < x.table.size(); ++i) {
      if (x.table[i] != y.table[i]) {
        found = Refutation{interp, static_cast<int>(i)};
        return false;
      }
    }
    return true;
  });
  return found;
}

inline bool agree_on_family(const Signature& sig, const Term& a, const Term& b,
                            const ModelFamily& fam) {
  return !refute(sig, a, b, fam).has_value();
}

}  // namespace bracket
