#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <thread>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "axioms.hpp"
#include "json.hpp"
#include "model_search.hpp"
#include "terms.hpp"

namespace bracket {

// ---------------------------------------------------------------------------
// Canonical slice form
//
// A term is flattened into a sequence of slices, each holding exactly one
// non-identity factor with identity whiskers on both sides. This quotients
// by associativity and unitality of both composition operations. Adjacent
// slices with disjoint support are then exchange-sorted so that interchange
// is also canonicalised away.

struct CSlice {
  ObjectExpr left;
  Term fac;
  ObjectExpr right;
};

struct CForm {
  ObjectExpr dom, cod;
  std::vector<CSlice> slices;
};

CForm canon_form(const Signature& sig, const Term& t);
Term canon_rebuild(const CForm& cf);

namespace rwdetail {

using detail::comp_chain;
using detail::infer;
using detail::whisker;

inline ObjectExpr subword(const ObjectExpr& o, std::size_t lo, std::size_t hi) {
  return ObjectExpr{
      std::vector<Strand>(o.strands.begin() + lo, o.strands.begin() + hi)};
}

inline bool starts_with(const ObjectExpr& o, const ObjectExpr& p) {
  if (p.strands.size() > o.strands.size()) return false;
  for (std::size_t i = 0; i < p.strands.size(); ++i)
    if (!(o.strands[i] == p.strands[i])) return false;
  return true;
}

inline bool ends_with(const ObjectExpr& o, const ObjectExpr& p) {
  if (p.strands.size() > o.strands.size()) return false;
  std::size_t off = o.strands.size() - p.strands.size();
  for (std::size_t i = 0; i < p.strands.size(); ++i)
    if (!(o.strands[off + i] == p.strands[i])) return false;
  return true;
}

inline void seq_slices(const Signature& sig, const Term& t,
                       const ObjectExpr& before, const ObjectExpr& after,
                       std::vector<CSlice>& out) {
  switch (t->tag) {
    case TK::Id:
      return;
    case TK::Sym:
      if (t->obj.is_unit() || t->obj2.is_unit()) return;
      out.push_back({before, t, after});
      return;
    case TK::Comp:
      seq_slices(sig, t->a, before, after, out);
      seq_slices(sig, t->b, before, after, out);
      return;
    case TK::Tensor: {
      MorphType ma = infer(sig, t->a), mb = infer(sig, t->b);
      seq_slices(sig, t->a, before, tensor(mb.dom, after), out);
      seq_slices(sig, t->b, tensor(before, ma.cod), after, out);
      return;
    }
    case TK::Bracketed: {
      CForm ci = canon_form(sig, t->a);
      if (ci.slices.empty()) return;  // [id] = id
      out.push_back({before, bracketed(canon_rebuild(ci)), after});
      return;
    }
    case TK::Dual: {
      const Term& x = t->a;
      if (x->tag == TK::Bracketed) {
        CForm ci = canon_form(sig, x->a);
        if (ci.slices.empty()) return;
        out.push_back({before, dual(bracketed(canon_rebuild(ci))), after});
        return;
      }
      out.push_back({before, t, after});
      return;
    }
    default:
      out.push_back({before, t, after});
      return;
  }
}

// Bubbles commuting adjacent slices into a left-most-first order. A swap is
// taken only when it makes the pair of start columns lexicographically
// smaller, so each pass strictly decreases the column sequence.
inline void exchange_sort(const Signature& sig, std::vector<CSlice>& ss) {
  if (ss.size() < 2) return;
  std::size_t guard = ss.size() * ss.size() * 4 + 16;
  for (bool moved = true; moved && guard > 0; --guard) {
    moved = false;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
      MorphType mf = infer(sig, ss[i].fac), mg = infer(sig, ss[i + 1].fac);
      std::size_t c1 = ss[i].left.strands.size();
      std::size_t cf = mf.cod.strands.size(), df = mf.dom.strands.size();
      std::size_t c2 = ss[i + 1].left.strands.size();
      std::size_t dg = mg.dom.strands.size(), cg = mg.cod.strands.size();
      if (c2 + dg > c1) continue;  // not entirely left of the first factor
      if (!(c2 < c1 || cg < dg)) continue;
      ObjectExpr D = tensor(ss[i].left, tensor(mf.dom, ss[i].right));
      Term g = ss[i + 1].fac, f = ss[i].fac;
      CSlice s1{subword(D, 0, c2), g, subword(D, c2 + dg, D.strands.size())};
      ObjectExpr W = tensor(s1.left, tensor(mg.cod, s1.right));
      std::size_t p = c1 + cg - dg;
      CSlice s2{subword(W, 0, p), f, subword(W, p + df, W.strands.size())};
      ss[i] = s1;
      ss[i + 1] = s2;
      moved = true;
    }
  }
}

}  // namespace rwdetail

inline CForm canon_form(const Signature& sig, const Term& t) {
  Term d = detail::dual_normal(t);
  MorphType m = rwdetail::infer(sig, d);
  CForm cf{m.dom, m.cod, {}};
  rwdetail::seq_slices(sig, d, {}, {}, cf.slices);
  rwdetail::exchange_sort(sig, cf.slices);
  return cf;
}

inline Term canon_rebuild(const CForm& cf) {
  if (cf.slices.empty()) return id(cf.dom);
  std::vector<Term> parts;
  for (const CSlice& s : cf.slices)
    parts.push_back(rwdetail::whisker(s.left, s.fac, s.right));
  return rwdetail::comp_chain(parts);
}

inline std::string canon_key(const Signature& sig, const Term& t) {
  return print_term(canon_rebuild(canon_form(sig, t)));
}

// equality up to associativity, unitality and interchange
inline bool au_equal(const Signature& sig, const Term& a, const Term& b) {
  return canon_key(sig, a) == canon_key(sig, b);
}

// ---------------------------------------------------------------------------
// Pattern matching against the slice view

namespace rwdetail {

using Sink = std::function<void(const Subst&)>;

// exploded view of one or more merged slices: single-strand identity
// entries interleaved with the proper factors
struct REnt {
  Term fac;
  ObjectExpr dom, cod;
  bool isid;
};

inline void explode_slice(const Signature& sig, const CSlice& s,
                          std::vector<REnt>& out) {
  for (const Strand& st : s.left.strands) {
    ObjectExpr w = word({st});
    out.push_back({id(w), w, w, true});
  }
  MorphType m = infer(sig, s.fac);
  out.push_back({s.fac, m.dom, m.cod, false});
  for (const Strand& st : s.right.strands) {
    ObjectExpr w = word({st});
    out.push_back({id(w), w, w, true});
  }
}

// Composes a further slice into an exploded row; succeeds only when the new
// factor lands entirely on identity strands.
inline bool merge_slice(const Signature& sig, std::vector<REnt>& row,
                        const CSlice& s) {
  MorphType m = infer(sig, s.fac);
  std::size_t c2 = s.left.strands.size(), dg = m.dom.strands.size();
  std::size_t col = 0, a = 0;
  for (a = 0;; ++a) {
    if (col == c2) break;
    if (a >= row.size()) return false;
    col += row[a].cod.strands.size();
    if (col > c2) return false;
  }
  std::size_t b = a, need = dg;
  ObjectExpr dw;
  while (need > 0) {
    if (b >= row.size() || !row[b].isid) return false;
    dw.strands.push_back(row[b].cod.strands[0]);
    --need;
    ++b;
  }
  if (!(dw == m.dom)) return false;
  row.erase(row.begin() + a, row.begin() + b);
  row.insert(row.begin() + a, REnt{s.fac, m.dom, m.cod, false});
  return true;
}

inline ObjectExpr row_word(const std::vector<REnt>& row, std::size_t lo,
                           std::size_t hi, bool cod) {
  ObjectExpr w;
  for (std::size_t i = lo; i < hi; ++i) {
    const ObjectExpr& o = cod ? row[i].cod : row[i].dom;
    w.strands.insert(w.strands.end(), o.strands.begin(), o.strands.end());
  }
  return w;
}

// --- pattern rows

inline std::optional<std::vector<Term>> flat_row(const Term& p) {
  if (p->tag == TK::Comp) return std::nullopt;
  if (p->tag == TK::Tensor) {
    auto a = flat_row(p->a), b = flat_row(p->b);
    if (!a || !b) return std::nullopt;
    a->insert(a->end(), b->begin(), b->end());
    return a;
  }
  return std::vector<Term>{p};
}

inline std::vector<std::vector<Term>> pattern_rows(const Term& p) {
  if (p->tag == TK::Comp) {
    auto r = pattern_rows(p->a);
    auto s = pattern_rows(p->b);
    r.insert(r.end(), s.begin(), s.end());
    return r;
  }
  auto fr = flat_row(p);
  if (!fr)
    throw TypeError("Internal", "pattern is not a composite of tensor rows");
  return {*fr};
}

inline bool pure_id_rows(const std::vector<std::vector<Term>>& rows) {
  if (rows.size() != 1) return false;
  for (const Term& f : rows[0])
    if (f->tag != TK::Id) return false;
  return true;
}

inline bool identity_matchable_factor(const Term& p) {
  switch (p->tag) {
    case TK::Id:
      return true;
    case TK::Gen:
      return is_term_mvar(p);
    case TK::Dual:
      return p->a->tag == TK::Gen && is_term_mvar(p->a);
    case TK::Bracketed: {
      auto rows = pattern_rows(p->a);
      for (const auto& r : rows)
        for (const Term& f : r)
          if (!identity_matchable_factor(f)) return false;
      return true;
    }
    default:
      return false;
  }
}

inline bool identity_matchable_row(const std::vector<Term>& row) {
  for (const Term& f : row)
    if (!identity_matchable_factor(f)) return false;
  return true;
}

// --- object-level matching with subword metavariables

inline void match_strands(const std::vector<Strand>& ps, std::size_t pi,
                          const std::vector<Strand>& ss, std::size_t lo,
                          std::size_t hi, const Subst& su, const Sink& k) {
  if (pi == ps.size()) {
    if (lo == hi) k(su);
    return;
  }
  const Strand& p = ps[pi];
  if (is_object_mvar(p)) {
    std::string name = p.sort.substr(1);
    auto it = su.obj.find(name);
    if (it != su.obj.end()) {
      ObjectExpr exp =
          p.pol == Polarity::Up ? dual_object(it->second) : it->second;
      std::size_t n = exp.strands.size();
      if (lo + n > hi) return;
      for (std::size_t i = 0; i < n; ++i)
        if (!(ss[lo + i] == exp.strands[i])) return;
      match_strands(ps, pi + 1, ss, lo + n, hi, su, k);
      return;
    }
    for (std::size_t n = 0; lo + n <= hi; ++n) {
      ObjectExpr cand{
          std::vector<Strand>(ss.begin() + lo, ss.begin() + lo + n)};
      Subst s2 = su;
      s2.obj[name] = p.pol == Polarity::Up ? dual_object(cand) : cand;
      match_strands(ps, pi + 1, ss, lo + n, hi, s2, k);
    }
    return;
  }
  if (lo == hi) return;
  const Strand& s = ss[lo];
  if (p.is_bracket) {
    if (!s.is_bracket || s.pol != p.pol) return;
    match_strands(p.inner, 0, s.inner, 0, s.inner.size(), su,
                  [&](const Subst& s2) {
                    match_strands(ps, pi + 1, ss, lo + 1, hi, s2, k);
                  });
    return;
  }
  if (s.is_bracket || s.sort != p.sort || s.pol != p.pol) return;
  match_strands(ps, pi + 1, ss, lo + 1, hi, su, k);
}

inline void match_object_full(const ObjectExpr& pat, const ObjectExpr& sub,
                              const Subst& su, const Sink& k) {
  match_strands(pat.strands, 0, sub.strands, 0, sub.strands.size(), su, k);
}

inline void match_objects(const std::vector<ObjectExpr>& pats,
                          const std::vector<ObjectExpr>& subs, std::size_t i,
                          const Subst& su, const Sink& k) {
  if (i == pats.size()) {
    k(su);
    return;
  }
  match_object_full(pats[i], subs[i], su, [&](const Subst& s2) {
    match_objects(pats, subs, i + 1, s2, k);
  });
}

inline bool bind_term(const Signature& sig, Subst& su, const std::string& name,
                      const Term& t) {
  auto it = su.trm.find(name);
  if (it != su.trm.end()) return canon_key(sig, it->second) == canon_key(sig, t);
  su.trm[name] = t;
  return true;
}

void mseq(const Signature& sig, const std::vector<Term>& pats, std::size_t pi,
          const std::vector<REnt>& ents, std::size_t ei, std::size_t ehi,
          const Subst& su, const Sink& k);
void imatch_row(const Signature& sig, const std::vector<Term>& pats,
                std::size_t pi, const std::vector<Strand>& w, std::size_t lo,
                std::size_t hi, const Subst& su, const Sink& k);
void box_rows_match(const Signature& sig,
                    const std::vector<std::vector<Term>>& rows, const CForm& cf,
                    const Subst& su, const Sink& k);

// identity instances of a stack of rows over a fixed word
inline void irows(const Signature& sig,
                  const std::vector<std::vector<Term>>& rows, std::size_t ri,
                  const std::vector<Strand>& w, const Subst& su,
                  const Sink& k) {
  if (ri == rows.size()) {
    k(su);
    return;
  }
  imatch_row(sig, rows[ri], 0, w, 0, w.size(), su, [&](const Subst& s2) {
    irows(sig, rows, ri + 1, w, s2, k);
  });
}

inline void imatch_row(const Signature& sig, const std::vector<Term>& pats,
                       std::size_t pi, const std::vector<Strand>& w,
                       std::size_t lo, std::size_t hi, const Subst& su,
                       const Sink& k) {
  if (pi == pats.size()) {
    if (lo == hi) k(su);
    return;
  }
  const Term& p = pats[pi];
  switch (p->tag) {
    case TK::Id: {
      for (std::size_t e = lo; e <= hi; ++e)
        match_strands(p->obj.strands, 0, w, lo, e, su, [&](const Subst& s2) {
          imatch_row(sig, pats, pi + 1, w, e, hi, s2, k);
        });
      return;
    }
    case TK::Gen: {
      if (!is_term_mvar(p)) return;
      std::string name = p->name.substr(1);
      for (std::size_t e = lo; e <= hi; ++e) {
        ObjectExpr o{std::vector<Strand>(w.begin() + lo, w.begin() + e)};
        Subst s2 = su;
        if (!bind_term(sig, s2, name, id(o))) continue;
        imatch_row(sig, pats, pi + 1, w, e, hi, s2, k);
      }
      return;
    }
    case TK::Dual: {
      if (!(p->a->tag == TK::Gen && is_term_mvar(p->a))) return;
      std::string name = p->a->name.substr(1);
      for (std::size_t e = lo; e <= hi; ++e) {
        ObjectExpr o{std::vector<Strand>(w.begin() + lo, w.begin() + e)};
        Subst s2 = su;
        if (!bind_term(sig, s2, name, id(dual_object(o)))) continue;
        imatch_row(sig, pats, pi + 1, w, e, hi, s2, k);
      }
      return;
    }
    case TK::Bracketed: {
      if (lo >= hi || !w[lo].is_bracket || w[lo].pol != Polarity::Down) return;
      auto rows = pattern_rows(p->a);
      irows(sig, rows, 0, w[lo].inner, su, [&](const Subst& s2) {
        imatch_row(sig, pats, pi + 1, w, lo + 1, hi, s2, k);
      });
      return;
    }
    default:
      return;
  }
}

// one pattern factor against one proper subject factor
inline void match_factor(const Signature& sig, const Term& p, const Term& f,
                         const Subst& su, const Sink& k) {
  switch (p->tag) {
    case TK::Sym:
      if (f->tag != TK::Sym) return;
      match_object_full(p->obj, f->obj, su, [&](const Subst& s2) {
        match_object_full(p->obj2, f->obj2, s2, k);
      });
      return;
    case TK::Gen:
      if (is_term_mvar(p)) return;  // handled at row level
      if (f->tag == TK::Gen && f->name == p->name) k(su);
      return;
    case TK::BracketGen:
      if (f->tag != TK::BracketGen || f->kind != p->kind) return;
      if (f->args.size() != p->args.size()) return;
      match_objects(p->args, f->args, 0, su, k);
      return;
    case TK::Copy:
    case TK::Discard:
      if (f->tag != p->tag) return;
      match_object_full(p->obj, f->obj, su, k);
      return;
    case TK::Bracketed:
      if (f->tag != TK::Bracketed) return;
      box_rows_match(sig, pattern_rows(p->a), canon_form(sig, f->a), su, k);
      return;
    case TK::Dual: {
      if (f->tag != TK::Dual) return;
      const Term& q = p->a;
      const Term& x = f->a;
      if (q->tag == TK::Gen && is_term_mvar(q)) {
        Subst s2 = su;
        if (bind_term(sig, s2, q->name.substr(1), x)) k(s2);
        return;
      }
      if (q->tag == TK::Bracketed) {
        if (x->tag != TK::Bracketed) return;
        box_rows_match(sig, pattern_rows(q->a), canon_form(sig, x->a), su, k);
        return;
      }
      match_factor(sig, q, x, su, k);
      return;
    }
    default:
      return;
  }
}

inline Term tens_fold(const std::vector<Term>& fs) {
  Term t;
  for (const Term& f : fs) t = t ? tens(t, f) : f;
  return t;
}

inline void mseq(const Signature& sig, const std::vector<Term>& pats,
                 std::size_t pi, const std::vector<REnt>& ents, std::size_t ei,
                 std::size_t ehi, const Subst& su, const Sink& k) {
  if (pi == pats.size()) {
    if (ei == ehi) k(su);
    return;
  }
  const Term& p = pats[pi];
  if (p->tag == TK::Id) {
    for (std::size_t n = 0; ei + n <= ehi; ++n) {
      if (n > 0 && !ents[ei + n - 1].isid) break;
      ObjectExpr w = row_word(ents, ei, ei + n, false);
      match_strands(p->obj.strands, 0, w.strands, 0, w.strands.size(), su,
                    [&](const Subst& s2) {
                      mseq(sig, pats, pi + 1, ents, ei + n, ehi, s2, k);
                    });
    }
    return;
  }
  if (p->tag == TK::Gen && is_term_mvar(p)) {
    std::string name = p->name.substr(1);
    for (std::size_t n = 1; ei + n <= ehi; ++n) {
      std::vector<Term> fs;
      for (std::size_t i = ei; i < ei + n; ++i) fs.push_back(ents[i].fac);
      Subst s2 = su;
      if (!bind_term(sig, s2, name, tens_fold(fs))) continue;
      mseq(sig, pats, pi + 1, ents, ei + n, ehi, s2, k);
    }
    return;
  }
  if (p->tag == TK::Bracketed && ei < ehi && ents[ei].isid) {
    // a bracket box whose content happens to be an identity
    const Strand& st = ents[ei].dom.strands[0];
    if (st.is_bracket && st.pol == Polarity::Down) {
      irows(sig, pattern_rows(p->a), 0, st.inner, su, [&](const Subst& s2) {
        mseq(sig, pats, pi + 1, ents, ei + 1, ehi, s2, k);
      });
    }
  }
  if (ei >= ehi || ents[ei].isid) return;
  match_factor(sig, p, ents[ei].fac, su, [&](const Subst& s2) {
    mseq(sig, pats, pi + 1, ents, ei + 1, ehi, s2, k);
  });
}

// ---------------------------------------------------------------------------
// Window enumeration over the slice view

// reports: substitution, consumed slice span [s,e), identity residue words
using WindowSink = std::function<void(const Subst&, std::size_t, std::size_t,
                                      const ObjectExpr&, const ObjectExpr&)>;

struct RowAssigner {
  const Signature& sig;
  const CForm& cf;
  const std::vector<std::vector<Term>>& rows;
  std::size_t start = 0;
  WindowSink done;

  ObjectExpr boundary(std::size_t si) const {
    if (si == 0) return cf.dom;
    const CSlice& s = cf.slices[si - 1];
    MorphType m = infer(sig, s.fac);
    return tensor(s.left, tensor(m.cod, s.right));
  }

  static bool ids_mvar_ids(const std::vector<Term>& row,
                           std::vector<Term>& leftIds, Term& mv,
                           std::vector<Term>& rightIds) {
    leftIds.clear();
    rightIds.clear();
    mv = Term();
    for (const Term& f : row) {
      if (f->tag == TK::Id) {
        (mv ? rightIds : leftIds).push_back(f);
      } else if (f->tag == TK::Gen && is_term_mvar(f)) {
        if (mv) return false;
        mv = f;
      } else {
        return false;
      }
    }
    return static_cast<bool>(mv);
  }

  void go(std::size_t ri, std::size_t si, const Subst& su, bool hasLR,
          const ObjectExpr& Lw, const ObjectExpr& Rw) const {
    std::size_t n = cf.slices.size();
    if (ri == rows.size()) {
      if (hasLR) done(su, start, si, Lw, Rw);
      return;
    }
    const std::vector<Term>& row = rows[ri];
    // the row instantiates to an identity and consumes no slice
    if (identity_matchable_row(row)) {
      ObjectExpr W = boundary(si);
      if (hasLR) {
        std::size_t lw = Lw.strands.size(), rw = Rw.strands.size();
        if (W.strands.size() >= lw + rw && starts_with(W, Lw) &&
            ends_with(W, Rw)) {
          imatch_row(sig, row, 0, W.strands, lw, W.strands.size() - rw, su,
                     [&](const Subst& s2) { go(ri + 1, si, s2, true, Lw, Rw); });
        }
      } else {
        for (std::size_t i = 0; i <= W.strands.size(); ++i)
          for (std::size_t j = i; j <= W.strands.size(); ++j) {
            ObjectExpr L = subword(W, 0, i), R = subword(W, j, W.strands.size());
            imatch_row(sig, row, 0, W.strands, i, j, su,
                       [&](const Subst& s2) { go(ri + 1, si, s2, true, L, R); });
          }
      }
    }
    // the row consumes g merged slices
    {
      std::vector<REnt> ents;
      for (std::size_t g = 1; si + g <= n; ++g) {
        if (g == 1)
          explode_slice(sig, cf.slices[si], ents);
        else if (!merge_slice(sig, ents, cf.slices[si + g - 1]))
          break;
        if (hasLR) {
          std::size_t lw = Lw.strands.size(), rw = Rw.strands.size();
          if (ents.size() < lw + rw) continue;
          bool ok = true;
          for (std::size_t i = 0; i < lw && ok; ++i)
            ok = ents[i].isid && ents[i].dom.strands[0] == Lw.strands[i];
          for (std::size_t i = 0; i < rw && ok; ++i) {
            const REnt& e = ents[ents.size() - rw + i];
            ok = e.isid && e.dom.strands[0] == Rw.strands[i];
          }
          if (!ok) continue;
          mseq(sig, row, 0, ents, lw, ents.size() - rw, su,
               [&](const Subst& s2) { go(ri + 1, si + g, s2, true, Lw, Rw); });
        } else {
          std::size_t li = 0, ti = 0;
          while (li < ents.size() && ents[li].isid) ++li;
          while (ti < ents.size() && ents[ents.size() - 1 - ti].isid) ++ti;
          for (std::size_t i = 0; i <= li; ++i)
            for (std::size_t j = 0; j <= ti && i + j <= ents.size(); ++j) {
              ObjectExpr L = row_word(ents, 0, i, false);
              ObjectExpr R =
                  row_word(ents, ents.size() - j, ents.size(), false);
              mseq(sig, row, 0, ents, i, ents.size() - j, su,
                   [&](const Subst& s2) {
                     go(ri + 1, si + g, s2, true, L, R);
                   });
            }
        }
      }
    }
    // a lone term metavariable (possibly whiskered by identities) may bind a
    // vertical composite spanning several slices
    {
      std::vector<Term> leftIds, rightIds;
      Term mv;
      if (ids_mvar_ids(row, leftIds, mv, rightIds)) {
        const ObjectExpr& L0 = cf.slices.empty() || si >= n
                                   ? ObjectExpr{}
                                   : cf.slices[si].left;
        const ObjectExpr& R0 = cf.slices.empty() || si >= n
                                   ? ObjectExpr{}
                                   : cf.slices[si].right;
        for (std::size_t g = 2; si + g <= n; ++g) {
          bool same = true;
          for (std::size_t kk = 0; kk < g && same; ++kk)
            same = cf.slices[si + kk].left == L0 &&
                   cf.slices[si + kk].right == R0;
          if (!same) break;
          auto attempt = [&](const ObjectExpr& Lfix, const ObjectExpr& Rfix) {
            if (!starts_with(L0, Lfix) || !ends_with(R0, Rfix)) return;
            ObjectExpr lex = subword(L0, Lfix.strands.size(),
                                     L0.strands.size());
            ObjectExpr rex =
                subword(R0, 0, R0.strands.size() - Rfix.strands.size());
            imatch_row(sig, leftIds, 0, lex.strands, 0, lex.strands.size(), su,
                       [&](const Subst& s1) {
                         imatch_row(
                             sig, rightIds, 0, rex.strands, 0,
                             rex.strands.size(), s1, [&](const Subst& s2) {
                               std::vector<Term> parts;
                               for (std::size_t kk = 0; kk < g; ++kk)
                                 parts.push_back(whisker(
                                     lex, cf.slices[si + kk].fac, rex));
                               Subst s3 = s2;
                               if (!bind_term(sig, s3, mv->name.substr(1),
                                              comp_chain(parts)))
                                 return;
                               go(ri + 1, si + g, s3, true, Lfix, Rfix);
                             });
                       });
          };
          if (hasLR) {
            attempt(Lw, Rw);
          } else {
            for (std::size_t i = 0; i <= L0.strands.size(); ++i)
              for (std::size_t j = 0; j <= R0.strands.size(); ++j)
                attempt(subword(L0, 0, i),
                        subword(R0, R0.strands.size() - j, R0.strands.size()));
          }
        }
      }
    }
  }
};

inline void box_rows_match(const Signature& sig,
                           const std::vector<std::vector<Term>>& rows,
                           const CForm& cf, const Subst& su, const Sink& k) {
  const ObjectExpr I;
  RowAssigner ra{sig, cf, rows, 0,
                 [&](const Subst& s2, std::size_t s, std::size_t e,
                     const ObjectExpr&, const ObjectExpr&) {
                   if (s == 0 && e == cf.slices.size()) k(s2);
                 }};
  ra.go(0, 0, su, true, I, I);
}

}  // namespace rwdetail

// ---------------------------------------------------------------------------
// Schema application

struct Application {
  std::string schema;
  bool l2r = true;
  std::string position;
  Subst su;
  Term result;
};

inline std::map<std::string, std::string> printed_subst(const Subst& su) {
  std::map<std::string, std::string> out;
  for (const auto& [n, o] : su.obj) out[n] = print_object(o);
  for (const auto& [n, t] : su.trm) out[n] = print_term(t);
  return out;
}

namespace rwdetail {

inline Term segment(const CForm& cf, std::size_t from, std::size_t to) {
  if (from >= to) return Term();
  std::vector<Term> ps;
  for (std::size_t k = from; k < to; ++k)
    ps.push_back(whisker(cf.slices[k].left, cf.slices[k].fac,
                         cf.slices[k].right));
  return comp_chain(ps);
}

inline Term assemble(const std::vector<Term>& parts, const ObjectExpr& dom) {
  std::vector<Term> keep;
  for (const Term& p : parts)
    if (p) keep.push_back(p);
  if (keep.empty()) return id(dom);
  return comp_chain(keep);
}

inline bool layer_ok(const Signature& sig, const EquationSchema& sc,
                     const Subst& su) {
  for (const MetaVar& v : sc.vars) {
    if (v.is_term) {
      auto it = su.trm.find(v.name);
      if (it == su.trm.end()) return false;
      if (v.layer == Variance::Mixed) continue;
      MorphType m = infer(sig, it->second);
      if (m.layer != v.layer) return false;
    } else {
      auto it = su.obj.find(v.name);
      if (it == su.obj.end()) return false;
      if (v.layer == Variance::Covariant && !is_covariant(it->second))
        return false;
      if (v.layer == Variance::Contravariant &&
          !is_covariant(dual_object(it->second)))
        return false;
    }
  }
  return true;
}

inline void collect_apps(const Signature& sig, const Term& t,
                         const std::vector<EquationSchema>& schemas,
                         bool respect_flags, const std::string& prefix,
                         const std::function<Term(const Term&)>& wrap,
                         std::vector<Application>& out) {
  CForm cf = canon_form(sig, t);
  std::size_t n = cf.slices.size();
  for (const EquationSchema& sc : schemas) {
    if (sc.name == "interchange") continue;
    for (bool l2r : {true, false}) {
      if (!l2r && !sc.bidirectional) continue;
      if (respect_flags && !(l2r ? sc.search_l2r : sc.search_r2l)) continue;
      const Term& side = l2r ? sc.lhs : sc.rhs;
      const Term& other = l2r ? sc.rhs : sc.lhs;
      auto rows = pattern_rows(side);
      auto finalize = [&](const Subst& su) -> std::optional<std::pair<Subst, Term>> {
        Subst s2 = su;
        try {
          if (sc.complete && !sc.complete(sig, s2)) return std::nullopt;
          if (!layer_ok(sig, sc, s2)) return std::nullopt;
          Term inst = subst_term(other, s2);
          return std::make_pair(s2, inst);
        } catch (const TypeError&) {
          return std::nullopt;
        }
      };
      auto emit = [&](const std::string& pos, const Subst& su, Term local) {
        Term global = wrap(local);
        out.push_back({sc.name, l2r, prefix + pos, su, global});
      };
      if (pure_id_rows(rows)) {
        // an identity pattern: the other side can be inserted wherever the
        // pattern matches a stretch of parallel wires
        for (std::size_t b = 0; b <= n; ++b) {
          ObjectExpr W =
              b == 0 ? cf.dom
                     : [&] {
                         const CSlice& s = cf.slices[b - 1];
                         MorphType m = infer(sig, s.fac);
                         return tensor(s.left, tensor(m.cod, s.right));
                       }();
          for (std::size_t i = 0; i <= W.strands.size(); ++i)
            for (std::size_t j = i; j <= W.strands.size(); ++j) {
              imatch_row(sig, rows[0], 0, W.strands, i, j, Subst{},
                         [&](const Subst& su) {
                           auto fin = finalize(su);
                           if (!fin) return;
                           Term local = assemble(
                               {segment(cf, 0, b),
                                whisker(subword(W, 0, i), fin->second,
                                        subword(W, j, W.strands.size())),
                                segment(cf, b, n)},
                               cf.dom);
                           emit("i" + std::to_string(b) + ":" +
                                    std::to_string(i) + "-" + std::to_string(j),
                                fin->first, local);
                         });
            }
        }
      } else if (rows.size() == 1) {
        // one row, arbitrary residue factors on either side
        for (std::size_t s = 0; s < n; ++s) {
          std::vector<REnt> ents;
          for (std::size_t g = 1; s + g <= n; ++g) {
            if (g == 1)
              explode_slice(sig, cf.slices[s], ents);
            else if (!merge_slice(sig, ents, cf.slices[s + g - 1]))
              break;
            for (std::size_t a = 0; a < ents.size(); ++a)
              for (std::size_t b2 = a + 1; b2 <= ents.size(); ++b2) {
                std::size_t e = s + g;
                mseq(sig, rows[0], 0, ents, a, b2, Subst{},
                     [&](const Subst& su) {
                       auto fin = finalize(su);
                       if (!fin) return;
                       std::vector<Term> facs;
                       for (std::size_t x = 0; x < a; ++x)
                         facs.push_back(ents[x].fac);
                       facs.push_back(fin->second);
                       for (std::size_t x = b2; x < ents.size(); ++x)
                         facs.push_back(ents[x].fac);
                       Term local = assemble({segment(cf, 0, s),
                                              tens_fold(facs),
                                              segment(cf, e, n)},
                                             cf.dom);
                       emit(std::to_string(s) + "+" + std::to_string(g) + ":" +
                                std::to_string(a) + "-" + std::to_string(b2),
                            fin->first, local);
                     });
              }
          }
        }
      } else {
        for (std::size_t s = 0; s <= n; ++s) {
          RowAssigner ra{sig, cf, rows, s,
                         [&](const Subst& su, std::size_t ws, std::size_t we,
                             const ObjectExpr& Lw, const ObjectExpr& Rw) {
                           auto fin = finalize(su);
                           if (!fin) return;
                           Term local = assemble(
                               {segment(cf, 0, ws),
                                whisker(Lw, fin->second, Rw),
                                segment(cf, we, n)},
                               cf.dom);
                           emit(std::to_string(ws) + "+" +
                                    std::to_string(we - ws),
                                fin->first, local);
                         }};
          ra.go(0, s, Subst{}, false, {}, {});
        }
      }
    }
  }
  // congruence: rewriting inside bracket boxes
  for (std::size_t k = 0; k < n; ++k) {
    const Term& f = cf.slices[k].fac;
    bool dl = f->tag == TK::Dual && f->a->tag == TK::Bracketed;
    if (f->tag != TK::Bracketed && !dl) continue;
    Term inner = dl ? f->a->a : f->a;
    CForm cfc = cf;
    std::size_t kk = k;
    auto wrap2 = [&sig, cfc, kk, dl, wrap, n](const Term& nt) {
      Term nf = dl ? dual(bracketed(nt)) : bracketed(nt);
      Term local = assemble(
          {segment(cfc, 0, kk),
           whisker(cfc.slices[kk].left, nf, cfc.slices[kk].right),
           segment(cfc, kk + 1, n)},
          cfc.dom);
      return wrap(local);
    };
    collect_apps(sig, inner, schemas, respect_flags,
                 prefix + std::to_string(k) + "/", wrap2, out);
  }
}

}  // namespace rwdetail

inline std::vector<Application> applications(
    const Signature& sig, const Term& t,
    const std::vector<EquationSchema>& schemas, bool respect_flags = true) {
  std::vector<Application> raw;
  rwdetail::collect_apps(sig, t, schemas, respect_flags, "",
                         [](const Term& x) { return x; }, raw);
  MorphType m0 = rwdetail::infer(sig, t);
  std::vector<Application> out;
  std::set<std::string> seen;
  for (Application& a : raw) {
    try {
      MorphType m = rwdetail::infer(sig, a.result);
      if (!(m.dom == m0.dom && m.cod == m0.cod)) continue;
    } catch (const TypeError&) {
      continue;
    }
    std::string key = a.schema + "|" + (a.l2r ? ">" : "<") + "|" + a.position +
                      "|" + print_term(a.result);
    if (!seen.insert(key).second) continue;
    out.push_back(std::move(a));
  }
  return out;
}

// all substitutions under which the pattern matches the slice view of the
// subject, anywhere, modulo associativity/unitality/interchange
inline std::vector<Subst> match(const Signature& sig, const Term& pattern,
                                const Term& subject) {
  using namespace rwdetail;
  CForm cf = canon_form(sig, subject);
  std::size_t n = cf.slices.size();
  auto rows = pattern_rows(pattern);
  std::vector<Subst> out;
  std::set<std::string> seen;
  auto record = [&](const Subst& su) {
    std::string key;
    for (const auto& [k, v] : printed_subst(su)) key += k + "=" + v + ";";
    if (seen.insert(key).second) out.push_back(su);
  };
  if (rows.size() == 1 && !pure_id_rows(rows)) {
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<REnt> ents;
      for (std::size_t g = 1; s + g <= n; ++g) {
        if (g == 1)
          explode_slice(sig, cf.slices[s], ents);
        else if (!merge_slice(sig, ents, cf.slices[s + g - 1]))
          break;
        for (std::size_t a = 0; a < ents.size(); ++a)
          for (std::size_t b2 = a + 1; b2 <= ents.size(); ++b2)
            mseq(sig, rows[0], 0, ents, a, b2, Subst{}, record);
      }
    }
  } else {
    for (std::size_t s = 0; s <= n; ++s) {
      RowAssigner ra{sig, cf, rows, s,
                     [&](const Subst& su, std::size_t, std::size_t,
                         const ObjectExpr&, const ObjectExpr&) { record(su); }};
      ra.go(0, s, Subst{}, false, {}, {});
    }
  }
  return out;
}

inline Term rewrite_step(const Signature& sig, const Term& t,
                         const EquationSchema& schema, bool l2r,
                         const std::string& position,
                         const Subst* expected = nullptr) {
  auto apps = applications(sig, t, {schema}, false);
  for (const Application& a : apps) {
    if (a.l2r != l2r || a.position != position) continue;
    if (expected && printed_subst(a.su) != printed_subst(*expected)) continue;
    return a.result;
  }
  throw TypeError("PositionInvalid",
                  schema.name + (l2r ? " -> " : " <- ") + "at " + position);
}

// ---------------------------------------------------------------------------
// Bounded equality procedure

enum class EqStatus { Proven, Refuted, Unknown };

struct TraceStep {
  std::string schema;
  std::string direction;  // "->" or "<-"
  std::string position;
  std::map<std::string, std::string> substitution;
  Term before, after;
};

struct RewriteTrace {
  Term source, target;
  std::vector<TraceStep> steps;
};

inline std::string trace_text(const RewriteTrace& tr) {
  std::string out;
  for (std::size_t i = 0; i < tr.steps.size(); ++i)
    out += "step " + std::to_string(i + 1) + ": " + tr.steps[i].schema + " " +
           tr.steps[i].direction + " at " + tr.steps[i].position + "\n";
  return out;
}

inline nlohmann::json trace_json(const RewriteTrace& tr) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const TraceStep& st = tr.steps[i];
    steps.push_back({{"step", i + 1},
                     {"schema", st.schema},
                     {"direction", st.direction},
                     {"position", st.position},
                     {"substitution", st.substitution},
                     {"before", print_term(st.before)},
                     {"after", print_term(st.after)}});
  }
  return {{"source", print_term(tr.source)},
          {"target", print_term(tr.target)},
          {"steps", steps}};
}

inline bool replay(const Signature& sig, const RewriteTrace& tr,
                   const std::vector<EquationSchema>& schemas) {
  Term cur = tr.source;
  if (canon_key(sig, cur) != canon_key(sig, tr.source)) return false;
  for (const TraceStep& st : tr.steps) {
    if (canon_key(sig, cur) != canon_key(sig, st.before)) return false;
    std::vector<EquationSchema> one;
    for (const EquationSchema& s : schemas)
      if (s.name == st.schema) one.push_back(s);
    if (one.empty()) return false;
    std::string want = canon_key(sig, st.after);
    bool ok = false;
    for (const Application& a : applications(sig, cur, one, false)) {
      if ((a.l2r ? "->" : "<-") != st.direction) continue;
      if (canon_key(sig, a.result) == want) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      // a step is also justified when the schema rewrites the result back to
      // the redex; matching need not be symmetric once identity boxes are
      // absorbed by canonicalisation
      std::string back = canon_key(sig, cur);
      for (const Application& a : applications(sig, st.after, one, false)) {
        if ((a.l2r ? "->" : "<-") == st.direction) continue;
        if (canon_key(sig, a.result) == back) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) return false;
    cur = st.after;
  }
  return canon_key(sig, cur) == canon_key(sig, tr.target);
}

inline std::vector<ModelFamily> default_refutation_families() {
  return {ModelFamily{ModelKind::FinSet, {1, 2}, 20000},
          ModelFamily{ModelKind::Pointed, {2, 3}, 20000}};
}

struct EqOptions {
  int max_steps = 64;
  long max_expansions = 20000;
  long max_nodes = 150000;  // stored search states, bounds memory
  std::vector<ModelFamily> families = default_refutation_families();
  unsigned seed = 0;
  int workers = 1;  // results are worker-count independent by construction
};

struct EqResult {
  EqStatus status = EqStatus::Unknown;
  RewriteTrace trace;
  std::optional<Refutation> witness;
  ModelKind witness_kind = ModelKind::FinSet;
  long expansions = 0;
};

inline EqResult equal(const Signature& sig, const Term& a, const Term& b,
                      EqOptions opt = {},
                      const std::vector<EquationSchema>* schemas_in = nullptr) {
  MorphType ma = typecheck(sig, a), mb = typecheck(sig, b);
  if (!(ma.dom == mb.dom && ma.cod == mb.cod))
    throw TypeError("BoundaryMismatch",
                    print_object(ma.dom) + " -> " + print_object(ma.cod) +
                        " vs " + print_object(mb.dom) + " -> " +
                        print_object(mb.cod));
  std::vector<EquationSchema> owned;
  if (!schemas_in) {
    std::vector<EquationSchema> base = axiom_schemas(sig.cartesian);
    for (EquationSchema& s : lemma_schemas()) base.push_back(std::move(s));
    owned = close_under_reflection(base);
    schemas_in = &owned;
  }
  const std::vector<EquationSchema>& schemas = *schemas_in;

  // steps that shrink the canonical form are cheap, roughly size-preserving
  // ones moderate, and growing ones dear; proofs that expand a definition
  // and contract again stay affordable while blind insertion chains do not
  auto cost_of = [](std::size_t cur, std::size_t res) {
    if (res < cur) return 1;
    if (res <= cur + 16) return 2;
    return 5;
  };

  // nodes record only how they were reached; terms are rebuilt on demand so
  // the visited set stays small enough for deep searches
  struct ENode {
    Term t;
    int parent = -1;
    int schema = -1;
    bool l2r = true;
    std::string position;
    int depth = 0;
    int cost = 0;
    std::string key;
  };
  std::vector<ENode> tab[2];
  std::unordered_map<std::string, int> vis[2];
  std::set<std::pair<int, std::string>> fr[2];
  std::map<std::string, int> schema_index;
  for (std::size_t i = 0; i < schemas.size(); ++i)
    schema_index[schemas[i].name] = static_cast<int>(i);
  std::string ka = canon_key(sig, a), kb = canon_key(sig, b);
  EqResult res;
  res.trace.source = a;
  res.trace.target = b;
  if (ka == kb) {
    res.status = EqStatus::Proven;
    return res;
  }
  tab[0].push_back({a, -1, -1, true, "", 0, 0, ka});
  tab[1].push_back({b, -1, -1, true, "", 0, 0, kb});
  vis[0][ka] = 0;
  vis[1][kb] = 0;
  fr[0].insert({0, ka});
  fr[1].insert({0, kb});
  const std::size_t size_cap = std::max(ka.size(), kb.size()) * 6 + 128;

  auto find_app = [&](int side, int idx) -> Application {
    const ENode& nd = tab[side][idx];
    const ENode& pd = tab[side][nd.parent];
    std::vector<EquationSchema> one = {schemas[nd.schema]};
    for (const Application& ap : applications(sig, pd.t, one, false)) {
      if (ap.l2r != nd.l2r || ap.position != nd.position) continue;
      if (canon_key(sig, ap.result) == nd.key) return ap;
    }
    throw TypeError("PositionInvalid", "trace reconstruction failed");
  };
  auto ensure_term = [&](int side, int idx) {
    std::vector<int> chain;
    for (int i = idx; i >= 0 && !tab[side][i].t; i = tab[side][i].parent)
      chain.push_back(i);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      tab[side][*it].t = find_app(side, *it).result;
  };

  auto build_trace = [&](const std::string& meet) {
    std::vector<TraceStep> left;
    for (int i = vis[0][meet]; tab[0][i].parent >= 0; i = tab[0][i].parent) {
      ensure_term(0, i);
      const ENode& nd = tab[0][i];
      const ENode& pd = tab[0][nd.parent];
      Application ap = find_app(0, i);
      left.push_back({schemas[nd.schema].name, nd.l2r ? "->" : "<-",
                      nd.position, printed_subst(ap.su), pd.t, nd.t});
    }
    std::reverse(left.begin(), left.end());
    for (int i = vis[1][meet]; tab[1][i].parent >= 0; i = tab[1][i].parent) {
      ensure_term(1, i);
      const ENode& nd = tab[1][i];
      const ENode& pd = tab[1][nd.parent];
      Application ap = find_app(1, i);
      // the mirror of a step taken from the target side
      left.push_back({schemas[nd.schema].name, nd.l2r ? "<-" : "->",
                      "~" + nd.position, printed_subst(ap.su), nd.t, pd.t});
    }
    res.trace.steps = std::move(left);
  };

  while (!fr[0].empty() || !fr[1].empty()) {
    int side;
    if (fr[0].empty())
      side = 1;
    else if (fr[1].empty())
      side = 0;
    else
      side = fr[0].begin()->first <= fr[1].begin()->first ? 0 : 1;
    auto top = *fr[side].begin();
    fr[side].erase(fr[side].begin());
    const std::string key = top.second;
    const int idx = vis[side][key];
    if (tab[side][idx].cost != top.first) continue;  // superseded
    if (tab[side][idx].depth >= opt.max_steps) continue;
    if (res.expansions >= opt.max_expansions) break;
    if (static_cast<long>(tab[0].size() + tab[1].size()) > opt.max_nodes)
      break;
    ++res.expansions;
    ensure_term(side, idx);
    const Term cur = tab[side][idx].t;
    const int cur_cost = tab[side][idx].cost;
    const int cur_depth = tab[side][idx].depth;
    std::vector<Application> succ;
    if (opt.workers > 1) {
      // schemas are matched in fixed chunks and merged in order, so the
      // result is identical to the sequential enumeration
      int w = opt.workers;
      std::vector<std::vector<EquationSchema>> chunks(w);
      for (std::size_t i = 0; i < schemas.size(); ++i)
        chunks[i % w].push_back(schemas[i]);
      std::vector<std::vector<Application>> parts(w);
      std::vector<std::thread> threads;
      for (int i = 0; i < w; ++i)
        threads.emplace_back([&, i] {
          parts[i] = applications(sig, cur, chunks[i], true);
        });
      for (auto& th : threads) th.join();
      for (auto& part : parts)
        for (Application& ap : part) succ.push_back(std::move(ap));
    } else {
      succ = applications(sig, cur, schemas, true);
    }
    // canonical ordering keeps traces independent of the worker count
    std::vector<std::pair<std::string, std::size_t>> order;
    order.reserve(succ.size());
    for (std::size_t i = 0; i < succ.size(); ++i)
      order.push_back({succ[i].schema + "|" + (succ[i].l2r ? ">" : "<") + "|" +
                           succ[i].position + "|" + print_term(succ[i].result),
                       i});
    std::sort(order.begin(), order.end());
    for (const auto& [okey, oi] : order) {
      const Application& ap = succ[oi];
      std::string k2 = canon_key(sig, ap.result);
      if (k2 == key || k2.size() > size_cap) continue;
      int c2 = cur_cost + cost_of(key.size(), k2.size());
      auto prev = vis[side].find(k2);
      if (prev != vis[side].end() && tab[side][prev->second].cost <= c2)
        continue;
      tab[side].push_back({Term{}, idx, schema_index[ap.schema], ap.l2r,
                           ap.position, cur_depth + 1, c2, k2});
      vis[side][k2] = static_cast<int>(tab[side].size()) - 1;
      auto it = vis[1 - side].find(k2);
      if (it != vis[1 - side].end() &&
          cur_depth + 1 + tab[1 - side][it->second].depth <= opt.max_steps) {
        res.status = EqStatus::Proven;
        build_trace(k2);
        return res;
      }
      fr[side].insert({c2, k2});
    }
  }

  for (const ModelFamily& fam : opt.families) {
    if (auto r = refute(sig, a, b, fam)) {
      res.status = EqStatus::Refuted;
      res.witness = *r;
      res.witness_kind = fam.kind;
      return res;
    }
  }
  res.status = EqStatus::Unknown;
  return res;
}

}  // namespace bracket
