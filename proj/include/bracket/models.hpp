#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gen_composites.hpp"
#include "objects.hpp"
#include "signature.hpp"
#include "terms.hpp"

namespace bracket {

enum class ModelKind { FinSet, Pointed };

// A carrier element. Functions are stored as output vectors indexed by the
// canonical enumeration of their input carrier, which makes equality exact.
struct Value {
  enum Kind : std::uint8_t { Atom, Tup, Fun, Bot } kind = Atom;
  int atom = 0;
  std::vector<Value> items;  // Tup components or Fun outputs

  friend bool operator==(const Value&, const Value&) = default;
  friend bool operator<(const Value& a, const Value& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind == Atom) return a.atom < b.atom;
    return a.items < b.items;
  }
};

inline Value atom_value(int i) { Value v; v.kind = Value::Atom; v.atom = i; return v; }
inline Value tup_value(std::vector<Value> items) {
  Value v; v.kind = Value::Tup; v.items = std::move(items); return v;
}
inline Value fun_value(std::vector<Value> outs) {
  Value v; v.kind = Value::Fun; v.items = std::move(outs); return v;
}
inline Value bot_value() { Value v; v.kind = Value::Bot; return v; }

struct Interpretation {
  std::map<std::string, int> sort_size;  // pointed: index 0 is the basepoint
  std::map<std::string, std::vector<int>> gen_table;  // dom idx -> cod idx
  std::map<std::string, std::vector<std::string>> sort_labels;  // optional
};

struct Carrier {
  std::vector<Value> elems;
  std::map<Value, int> index;

  int find(const Value& v) const {
    auto it = index.find(v);
    if (it == index.end())
      throw std::runtime_error("value outside carrier");
    return it->second;
  }
};

struct ModelMorphism {
  ObjectExpr dom, cod;
  std::vector<int> table;  // dom carrier index -> cod carrier index
  friend bool operator==(const ModelMorphism&, const ModelMorphism&) = default;
};

namespace detail {

inline ObjectExpr ups_word(const std::vector<Strand>& w) {
  ObjectExpr r;
  for (const Strand& s : w)
    if (s.pol == Polarity::Up) r.strands.push_back(s);
  return r;
}
inline ObjectExpr downs_word(const std::vector<Strand>& w) {
  ObjectExpr r;
  for (const Strand& s : w)
    if (s.pol == Polarity::Down) r.strands.push_back(s);
  return r;
}

}  // namespace detail

// Evaluator for terms in an executable model. Down strands carry values
// top-to-bottom, up strands bottom-to-top; strand values are wired through
// the term structure and collapsed to canonical carrier elements (with
// basepoint collapse in the pointed model) at every generator application.
class Semantics {
 public:
  Semantics(const Signature& sig, ModelKind kind, Interpretation interp,
            std::size_t carrier_limit = 1 << 16)
      : sig_(sig), kind_(kind), interp_(std::move(interp)),
        limit_(carrier_limit) {}

  ModelKind kind() const { return kind_; }
  const Interpretation& interp() const { return interp_; }

  // --- carriers -----------------------------------------------------------

  const Carrier& carrier(const ObjectExpr& o) {
    std::string key = print_object(o);
    auto it = carriers_.find(key);
    if (it != carriers_.end()) return it->second;
    Carrier c = build_carrier(o);
    return carriers_.emplace(std::move(key), std::move(c)).first->second;
  }

  Value base_value(const ObjectExpr& o) {
    if (kind_ == ModelKind::Pointed) return bot_value();
    // finset has no basepoints; used only for forced-default outputs
    return carrier(o).elems.at(0);
  }

  // --- interpretation -----------------------------------------------------

  // Evaluates t on a single input carrier element.
  Value apply(const Term& t, const Value& in) {
    Term nt = detail::dual_normal(t);
    MorphType m = mtype(nt);
    require_cov_boundary(m);
    Flow f = expand(m.dom, in);
    Flow out = eval_down(nt, f, Flow{});
    return canon(m.cod, out);
  }

  // Full morphism table of a covariant-boundary term.
  ModelMorphism tabulate(const Term& t) {
    Term nt = detail::dual_normal(t);
    MorphType m = mtype(nt);
    require_cov_boundary(m);
    const Carrier& dc = carrier(m.dom);
    ModelMorphism mm{m.dom, m.cod, {}};
    const Carrier& cc = carrier(m.cod);
    mm.table.reserve(dc.elems.size());
    for (const Value& v : dc.elems) {
      Flow f = expand(m.dom, v);
      Flow out = eval_down(nt, f, Flow{});
      mm.table.push_back(cc.find(canon(m.cod, out)));
    }
    return mm;
  }

  static void require_cov_boundary(const MorphType& m) {
    if (!is_covariant(m.dom) || !is_covariant(m.cod))
      throw std::runtime_error(
          "evaluation needs a covariant boundary; wrap the term in a bracket");
  }

  // The cache holds shared ownership of its keys so node addresses
  // cannot be recycled under it.
  MorphType mtype(const Term& t) {
    auto it = types_.find(t);
    if (it != types_.end()) return it->second;
    MorphType m = typecheck(sig_, t);
    types_.emplace(t, m);
    return m;
  }

  // The input-side and output-side objects of a hom over contents w.
  static ObjectExpr hom_in(const std::vector<Strand>& w) {
    return dual_object(detail::ups_word(w));
  }
  static ObjectExpr hom_out(const std::vector<Strand>& w) {
    return detail::downs_word(w);
  }

 private:
  const Signature& sig_;
  ModelKind kind_;
  Interpretation interp_;
  std::size_t limit_;
  std::map<std::string, Carrier> carriers_;
  std::map<Term, MorphType, std::owner_less<Term>> types_;

  // --- carrier construction ----------------------------------------------

  // The values carried by a single strand; the outer polarity of an up
  // strand marks direction only, the carried object is its dual.
  ObjectExpr strand_object(const Strand& s) {
    Strand t = s;
    if (t.pol == Polarity::Up) {
      t.pol = Polarity::Down;
      if (t.is_bracket) t.inner = detail::dual_word(t.inner);
    }
    return ObjectExpr{{t}};
  }

  std::vector<Value> strand_elems(const Strand& s) {
    if (!s.is_bracket) {
      auto it = interp_.sort_size.find(s.sort);
      if (it == interp_.sort_size.end())
        throw std::runtime_error("no carrier assigned to sort '" + s.sort + "'");
      std::vector<Value> out;
      for (int i = 0; i < it->second; ++i) out.push_back(atom_value(i));
      return out;
    }
    std::vector<Strand> contents =
        s.pol == Polarity::Up ? detail::dual_word(s.inner) : s.inner;
    ObjectExpr inw = hom_in(contents), outw = hom_out(contents);
    const Carrier& ic = carrier(inw);
    const Carrier& oc = carrier(outw);
    // all functions (pointed: basepoint-preserving) input-0 slowest
    std::vector<Value> funs;
    std::vector<int> choice(ic.elems.size(), 0);
    std::size_t first_free = 0;
    Value obase;
    if (kind_ == ModelKind::Pointed) {
      obase = bot_value();
      first_free = 1;  // input 0 is Bot, output forced to Bot
    }
    std::size_t count = 1;
    for (std::size_t i = first_free; i < ic.elems.size(); ++i) {
      count *= oc.elems.size();
      if (count > limit_) throw std::runtime_error("hom carrier too large");
    }
    for (;;) {
      std::vector<Value> outs;
      outs.reserve(ic.elems.size());
      for (std::size_t i = 0; i < ic.elems.size(); ++i)
        outs.push_back(i < first_free ? obase : oc.elems[choice[i]]);
      funs.push_back(fun_value(std::move(outs)));
      // increment, last index fastest
      std::size_t i = ic.elems.size();
      while (i > first_free) {
        --i;
        if (++choice[i] < static_cast<int>(oc.elems.size())) break;
        choice[i] = 0;
        if (i == first_free) return funs;
      }
      if (ic.elems.size() == first_free) return funs;  // single constant map
    }
  }

  Value strand_base(const Strand& s) {
    if (!s.is_bracket) return atom_value(0);
    std::vector<Strand> contents =
        s.pol == Polarity::Up ? detail::dual_word(s.inner) : s.inner;
    ObjectExpr inw = hom_in(contents), outw = hom_out(contents);
    const Carrier& ic = carrier(inw);
    std::vector<Value> outs(ic.elems.size(), bot_value());
    return fun_value(std::move(outs));
  }

  Carrier build_carrier(const ObjectExpr& o) {
    std::vector<std::vector<Value>> per_strand;
    for (const Strand& s : o.strands) {
      std::vector<Value> es = strand_elems(s);
      if (kind_ == ModelKind::Pointed) {
        // tuples range over non-basepoint components
        Value b = strand_base(s);
        std::vector<Value> nb;
        for (Value& v : es)
          if (!(v == b)) nb.push_back(std::move(v));
        per_strand.push_back(std::move(nb));
      } else {
        per_strand.push_back(std::move(es));
      }
    }
    Carrier c;
    if (kind_ == ModelKind::Pointed) c.elems.push_back(bot_value());
    // product, leftmost slowest
    std::size_t total = 1;
    for (auto& p : per_strand) {
      total *= p.size();
      if (total > limit_) throw std::runtime_error("carrier too large");
    }
    std::vector<std::size_t> idx(per_strand.size(), 0);
    if (total > 0) {
      for (;;) {
        std::vector<Value> comp;
        comp.reserve(per_strand.size());
        for (std::size_t i = 0; i < per_strand.size(); ++i)
          comp.push_back(per_strand[i][idx[i]]);
        c.elems.push_back(tup_value(std::move(comp)));
        std::size_t i = per_strand.size();
        bool done = (i == 0);
        while (i > 0) {
          --i;
          if (++idx[i] < per_strand[i].size()) break;
          idx[i] = 0;
          if (i == 0) done = true;
        }
        if (done) break;
      }
    }
    for (std::size_t i = 0; i < c.elems.size(); ++i)
      c.index.emplace(c.elems[i], static_cast<int>(i));
    return c;
  }

  // --- flows --------------------------------------------------------------

  struct Flow {
    std::vector<Value> s;  // one value per strand
    bool dead = false;     // pointed: a unit factor collapsed to basepoint
  };

  Flow expand(const ObjectExpr& o, const Value& v) {
    Flow f;
    if (v.kind == Value::Bot) {
      f.dead = true;
      for (const Strand& s : o.strands) f.s.push_back(strand_base(s));
      return f;
    }
    if (v.kind != Value::Tup || v.items.size() != o.strands.size())
      throw std::runtime_error("value does not match object shape");
    f.s = v.items;
    return f;
  }

  Value canon(const ObjectExpr& o, const Flow& f) {
    if (f.s.size() != o.strands.size())
      throw std::runtime_error("flow does not match object shape");
    if (kind_ == ModelKind::Pointed) {
      bool dead = f.dead;
      for (std::size_t i = 0; i < f.s.size(); ++i)
        if (f.s[i] == strand_base(o.strands[i])) { dead = true; break; }
      if (dead) return bot_value();
    }
    return tup_value(f.s);
  }

  static std::size_t count_pol(const ObjectExpr& o, Polarity p) {
    std::size_t n = 0;
    for (const Strand& s : o.strands)
      if (s.pol == p) ++n;
    return n;
  }

  static Flow take(const Flow& f, std::size_t from, std::size_t n) {
    Flow r;
    r.dead = f.dead;
    r.s.assign(f.s.begin() + from, f.s.begin() + from + n);
    return r;
  }

  static Flow concat(const Flow& a, const Flow& b) {
    Flow r;
    r.dead = a.dead || b.dead;
    r.s = a.s;
    r.s.insert(r.s.end(), b.s.begin(), b.s.end());
    return r;
  }

  static Flow reversed(const Flow& f) {
    Flow r = f;
    std::reverse(r.s.begin(), r.s.end());
    return r;
  }

  // --- evaluation ---------------------------------------------------------

  // up-flow: values for the cod's Up strands, in strand order, flowing to
  // the dom's Up strands; independent of the down-flow
  Flow eval_up(const Term& t, const Flow& u) {
    switch (t->tag) {
      case TK::Id:
        return u;
      case TK::Sym: {
        std::size_t ul = count_pol(t->obj, Polarity::Up);
        std::size_t ur = count_pol(t->obj2, Polarity::Up);
        // cod ups = ups(r) ups(l); dom ups = ups(l) ups(r)
        return concat(take(u, ur, ul), take(u, 0, ur));
      }
      case TK::Comp:
        return eval_up(t->a, eval_up(t->b, u));
      case TK::Tensor: {
        MorphType ma = mtype(t->a), mb = mtype(t->b);
        std::size_t ua = count_pol(ma.cod, Polarity::Up);
        std::size_t ub = count_pol(mb.cod, Polarity::Up);
        Flow fa = eval_up(t->a, take(u, 0, ua));
        Flow fb = eval_up(t->b, take(u, ua, ub));
        return concat(fa, fb);
      }
      case TK::Dual: {
        // contravariant flow: apply the underlying covariant term upward
        MorphType inner = mtype(t->a);
        if (inner.layer == Variance::Mixed)
          throw std::runtime_error("cannot evaluate dual of a mixed term");
        Flow x = reversed(u);
        Value v = canon(inner.dom, x);
        if (v.kind == Value::Bot)
          return reversed(expand(inner.cod, bot_value()));
        Flow in = expand(inner.dom, v);
        Flow out = eval_down(t->a, in, Flow{});
        Value r = canon(inner.cod, out);
        return reversed(expand(inner.cod, r));
      }
      default:
        // covariant constructs have no up strands
        return Flow{{}, u.dead};
    }
  }

  Flow eval_down(const Term& t, const Flow& d, const Flow& u) {
    switch (t->tag) {
      case TK::Id:
        return d;
      case TK::Sym: {
        std::size_t dl = count_pol(t->obj, Polarity::Down);
        std::size_t dr = count_pol(t->obj2, Polarity::Down);
        return concat(take(d, dl, dr), take(d, 0, dl));
      }
      case TK::Comp: {
        Flow um = eval_up(t->b, u);
        Flow dm = eval_down(t->a, d, um);
        return eval_down(t->b, dm, u);
      }
      case TK::Tensor: {
        MorphType ma = mtype(t->a), mb = mtype(t->b);
        std::size_t da = count_pol(ma.dom, Polarity::Down);
        std::size_t db = count_pol(mb.dom, Polarity::Down);
        std::size_t ua = count_pol(ma.cod, Polarity::Up);
        std::size_t ub = count_pol(mb.cod, Polarity::Up);
        Flow fa = eval_down(t->a, take(d, 0, da), take(u, 0, ua));
        Flow fb = eval_down(t->b, take(d, da, db), take(u, ua, ub));
        return concat(fa, fb);
      }
      case TK::Dual:
        return Flow{{}, d.dead};
      case TK::Copy: {
        if (kind_ == ModelKind::Pointed)
          throw std::runtime_error("copy is not available in the pointed model");
        return concat(d, d);
      }
      case TK::Discard: {
        if (kind_ == ModelKind::Pointed)
          throw std::runtime_error(
              "discard is not available in the pointed model");
        return Flow{{}, d.dead};
      }
      case TK::Bracketed: {
        MorphType mi = mtype(t->a);
        const std::vector<Strand>& ca = mi.dom.strands;
        const std::vector<Strand>& cb = mi.cod.strands;
        ObjectExpr in1 = hom_in(ca), out1 = hom_out(ca);
        ObjectExpr in2 = hom_in(cb), out2 = hom_out(cb);
        const Value& fv = d.s.at(0);
        if (kind_ == ModelKind::Pointed && fv == strand_base(bracket(mi.dom)))
          return Flow{{strand_base(bracket(mi.cod))}, d.dead};
        const Carrier& ic2 = carrier(in2);
        std::vector<Value> outs;
        outs.reserve(ic2.elems.size());
        for (const Value& u2 : ic2.elems) {
          Flow uflow = reversed(expand(in2, u2));
          Flow ua = eval_up(t->a, uflow);
          Value x = canon(in1, reversed(ua));
          Value o = apply_fun(fv, in1, x);
          Flow dflow = expand(out1, o);
          Flow db = eval_down(t->a, dflow, uflow);
          outs.push_back(canon(out2, db));
        }
        return Flow{{fun_value(std::move(outs))}, d.dead};
      }
      case TK::Gen:
      case TK::BracketGen:
        return apply_cov(t, d);
    }
    throw std::runtime_error("unexpected term in evaluation");
  }

  Value apply_fun(const Value& f, const ObjectExpr& inw, const Value& x) {
    if (f.kind != Value::Fun) throw std::runtime_error("not a function value");
    return f.items.at(carrier(inw).find(x));
  }

  template <class F>
  Value make_fun(const ObjectExpr& inw, const ObjectExpr& outw, F&& fn) {
    const Carrier& ic = carrier(inw);
    std::vector<Value> outs;
    outs.reserve(ic.elems.size());
    for (const Value& v : ic.elems) {
      if (kind_ == ModelKind::Pointed && v.kind == Value::Bot)
        outs.push_back(bot_value());
      else
        outs.push_back(fn(v));
    }
    (void)outw;
    return fun_value(std::move(outs));
  }

  Flow apply_cov(const Term& t, const Flow& d) {
    MorphType m = mtype(t);
    Value v = canon(m.dom, d);
    if (v.kind == Value::Bot) return expand(m.cod, bot_value());
    Value out = apply_prim(t, v, m);
    return expand(m.cod, out);
  }

  Value apply_prim(const Term& t, const Value& v, const MorphType& m) {
    if (t->tag == TK::Gen) {
      auto it = interp_.gen_table.find(t->name);
      if (it == interp_.gen_table.end())
        throw std::runtime_error("no assignment for generator '" + t->name + "'");
      const Carrier& dc = carrier(m.dom);
      const Carrier& cc = carrier(m.cod);
      int i = dc.find(v);
      return cc.elems.at(it->second.at(i));
    }
    return apply_bracket_gen(t->kind, t->args, v, m);
  }

  Value apply_bracket_gen(BracketGenKind k, const std::vector<ObjectExpr>& a,
                          const Value& v, const MorphType& m);
};

// ---------------------------------------------------------------------------
// Bracket generator semantics

inline Value Semantics::apply_bracket_gen(BracketGenKind k,
                                          const std::vector<ObjectExpr>& a,
                                          const Value& v, const MorphType& m) {
  using K = BracketGenKind;
  const ObjectExpr I;
  auto contents_of = [&](const ObjectExpr& o, std::size_t i) {
    return ObjectExpr{o.strands.at(i).inner};
  };
  switch (k) {
    case K::BubbleCup: {
      // the unique isomorphism hom(1,1) ~ 1
      const Value& f = v.items.at(0);
      Value unit_elem = canon(I, Flow{});
      return apply_fun(f, I, unit_elem);
    }
    case K::BubbleCap: {
      return tup_value({make_fun(I, I, [&](const Value& u) { return u; })});
    }
    case K::EntryDL: {
      std::size_t nx = a[0].strands.size();
      Flow x = Flow{{v.items.begin(), v.items.begin() + nx}, false};
      const Value& f = v.items.at(nx);
      ObjectExpr yc = contents_of(m.dom, nx);
      ObjectExpr in1 = hom_in(yc.strands), out1 = hom_out(yc.strands);
      ObjectExpr out2 = tensor(a[0], out1);
      Value g = make_fun(in1, out2, [&](const Value& u) {
        Flow fo = expand(out1, apply_fun(f, in1, u));
        return canon(out2, concat(x, fo));
      });
      return tup_value({g});
    }
    case K::ExitDL: {
      const Value& f = v.items.at(0);
      ObjectExpr xy = tensor(a[0], a[1]);
      Value o = apply_fun(f, I, canon(I, Flow{}));
      Flow fo = expand(xy, o);
      std::size_t nx = a[0].strands.size();
      Flow xf = take(fo, 0, nx);
      Flow yf = take(fo, nx, a[1].strands.size());
      Value g = make_fun(I, a[1], [&](const Value&) { return canon(a[1], yf); });
      Flow res = concat(xf, Flow{{g}, false});
      // a collapsed hom output collapses the whole result
      if (fo.dead) res.dead = true;
      return canon(m.cod, res);
    }
    case K::EntryUL: {
      // [X^ Y^ [Z] W^] -> [X^ [Y^ Z] W^]
      const ObjectExpr &X = a[0], &Y = a[1], &Z = a[2], &W = a[3];
      const Value& f = v.items.at(0);
      ObjectExpr c1 = contents_of(m.dom, 0);
      ObjectExpr in1 = hom_in(c1.strands);  // W Y X
      ObjectExpr out1 = hom_out(c1.strands);  // [Z]
      ObjectExpr c2 = contents_of(m.cod, 0);
      ObjectExpr in2 = hom_in(c2.strands);  // W X
      ObjectExpr out2 = hom_out(c2.strands);  // [Y^ Z]
      ObjectExpr duZ = dual_object(detail::ups_word(Z.strands));
      ObjectExpr dZ = detail::downs_word(Z.strands);
      ObjectExpr in3 = tensor(duZ, Y);  // inner hom input of [Y^ Z]
      Value g = make_fun(in2, out2, [&](const Value& wx) {
        Flow wxf = expand(in2, wx);
        Flow wf = take(wxf, 0, W.strands.size());
        Flow xf = take(wxf, W.strands.size(), X.strands.size());
        Value h = make_fun(in3, dZ, [&](const Value& u3) {
          Flow u3f = expand(in3, u3);
          Flow uz = take(u3f, 0, duZ.strands.size());
          Flow yf = take(u3f, duZ.strands.size(), Y.strands.size());
          Value o = apply_fun(f, in1, canon(in1, concat(concat(wf, yf), xf)));
          Flow of = expand(out1, o);
          return apply_fun(of.s.at(0), duZ, canon(duZ, uz));
        });
        return canon(out2, Flow{{h}, wxf.dead});
      });
      return tup_value({g});
    }
    case K::ExitUL: {
      // [X [Y^ Z] W] -> [X Y^ [Z] W]
      const ObjectExpr &X = a[0], &Y = a[1], &Z = a[2], &W = a[3];
      const Value& f = v.items.at(0);
      ObjectExpr c1 = contents_of(m.dom, 0);
      ObjectExpr in1 = hom_in(c1.strands);
      ObjectExpr out1 = hom_out(c1.strands);  // dX [Y^ Z] dW
      ObjectExpr c2 = contents_of(m.cod, 0);
      ObjectExpr in2 = hom_in(c2.strands);  // duW Y duX
      ObjectExpr out2 = hom_out(c2.strands);  // dX [Z] dW
      ObjectExpr duX = dual_object(detail::ups_word(X.strands));
      ObjectExpr duW = dual_object(detail::ups_word(W.strands));
      ObjectExpr dX = detail::downs_word(X.strands);
      ObjectExpr dW = detail::downs_word(W.strands);
      ObjectExpr duZ = dual_object(detail::ups_word(Z.strands));
      ObjectExpr dZ = detail::downs_word(Z.strands);
      ObjectExpr in3 = tensor(duZ, Y);
      Value g = make_fun(in2, out2, [&](const Value& u2) {
        Flow u2f = expand(in2, u2);
        Flow uw = take(u2f, 0, duW.strands.size());
        Flow yf = take(u2f, duW.strands.size(), Y.strands.size());
        Flow ux = take(u2f, duW.strands.size() + Y.strands.size(),
                       duX.strands.size());
        Value o = apply_fun(f, in1, canon(in1, concat(uw, ux)));
        Flow of = expand(out1, o);
        Flow dx = take(of, 0, dX.strands.size());
        Value h = of.s.at(dX.strands.size());
        Flow dw = take(of, dX.strands.size() + 1, dW.strands.size());
        Value h2 = make_fun(duZ, dZ, [&](const Value& uz) {
          Flow uzf = expand(duZ, uz);
          return apply_fun(h, in3, canon(in3, concat(uzf, yf)));
        });
        Flow res = concat(concat(dx, Flow{{h2}, of.dead}), dw);
        return canon(out2, res);
      });
      return tup_value({g});
    }
    case K::CupCrossL: {
      // X [X^ Y] -> [Y]
      const ObjectExpr& X = a[0];
      const ObjectExpr& Y = a[1];
      std::size_t nx = X.strands.size();
      Flow x = Flow{{v.items.begin(), v.items.begin() + nx}, false};
      const Value& f = v.items.at(nx);
      ObjectExpr c1 = contents_of(m.dom, nx);
      ObjectExpr in1 = hom_in(c1.strands);  // duY X
      ObjectExpr duY = dual_object(detail::ups_word(Y.strands));
      ObjectExpr dY = detail::downs_word(Y.strands);
      Value g = make_fun(duY, dY, [&](const Value& uy) {
        Flow uyf = expand(duY, uy);
        return apply_fun(f, in1, canon(in1, concat(uyf, x)));
      });
      return tup_value({g});
    }
    case K::CapR: {
      // [X Z] -> [X Y^ Y Z]
      const ObjectExpr &X = a[0], &Y = a[1], &Z = a[2];
      const Value& f = v.items.at(0);
      ObjectExpr c1 = contents_of(m.dom, 0);
      ObjectExpr in1 = hom_in(c1.strands);  // duZ duX
      ObjectExpr out1 = hom_out(c1.strands);  // dX dZ
      ObjectExpr c2 = contents_of(m.cod, 0);
      ObjectExpr in2 = hom_in(c2.strands);  // duZ Y duX
      ObjectExpr out2 = hom_out(c2.strands);  // dX Y dZ
      ObjectExpr duX = dual_object(detail::ups_word(X.strands));
      ObjectExpr duZ = dual_object(detail::ups_word(Z.strands));
      ObjectExpr dX = detail::downs_word(X.strands);
      Value g = make_fun(in2, out2, [&](const Value& u2) {
        Flow u2f = expand(in2, u2);
        Flow uz = take(u2f, 0, duZ.strands.size());
        Flow yf = take(u2f, duZ.strands.size(), Y.strands.size());
        Flow ux = take(u2f, duZ.strands.size() + Y.strands.size(),
                       duX.strands.size());
        Value o = apply_fun(f, in1, canon(in1, concat(uz, ux)));
        Flow of = expand(out1, o);
        Flow dx = take(of, 0, dX.strands.size());
        Flow dz = take(of, dX.strands.size(),
                       of.s.size() - dX.strands.size());
        return canon(out2, concat(concat(dx, yf), dz));
      });
      return tup_value({g});
    }
    case K::CupR: {
      // [X Y] [Y^ Z] -> [X Z]
      const ObjectExpr &X = a[0], &Y = a[1], &Z = a[2];
      const Value& f = v.items.at(0);
      const Value& g = v.items.at(1);
      ObjectExpr c1 = contents_of(m.dom, 0);
      ObjectExpr c2 = contents_of(m.dom, 1);
      ObjectExpr c3 = contents_of(m.cod, 0);
      ObjectExpr in1 = hom_in(c1.strands);   // duX
      ObjectExpr out1 = hom_out(c1.strands); // dX Y
      ObjectExpr in2 = hom_in(c2.strands);   // duZ Y
      ObjectExpr out2 = hom_out(c2.strands); // dZ
      ObjectExpr in3 = hom_in(c3.strands);   // duZ duX
      ObjectExpr out3 = hom_out(c3.strands); // dX dZ
      ObjectExpr duX = dual_object(detail::ups_word(X.strands));
      ObjectExpr duZ = dual_object(detail::ups_word(Z.strands));
      ObjectExpr dX = detail::downs_word(X.strands);
      Value h = make_fun(in3, out3, [&](const Value& u3) {
        Flow u3f = expand(in3, u3);
        Flow uz = take(u3f, 0, duZ.strands.size());
        Flow ux = take(u3f, duZ.strands.size(), duX.strands.size());
        Value o1 = apply_fun(f, in1, canon(in1, ux));
        Flow o1f = expand(out1, o1);
        Flow dx = take(o1f, 0, dX.strands.size());
        Flow yv = take(o1f, dX.strands.size(), Y.strands.size());
        Value o2 = apply_fun(g, in2, canon(in2, concat(uz, yv)));
        Flow dz = expand(out2, o2);
        return canon(out3, concat(dx, dz));
      });
      return tup_value({h});
    }
    case K::Eta: {
      const ObjectExpr &Y = a[0], &X = a[1];
      Flow x = expand(X, v);
      ObjectExpr yx = tensor(Y, X);
      Value g = make_fun(Y, yx, [&](const Value& yv) {
        Flow yf = expand(Y, yv);
        return canon(yx, concat(yf, x));
      });
      return tup_value({g});
    }
    case K::Eps: {
      const ObjectExpr &Y = a[0], &X = a[1];
      std::size_t ny = Y.strands.size();
      Flow y = Flow{{v.items.begin(), v.items.begin() + ny}, false};
      const Value& f = v.items.at(ny);
      Value o = apply_fun(f, Y, canon(Y, y));
      return o.kind == Value::Bot ? bot_value() : o;
    }
    default: {
      // vertical-axis reflections evaluate via their unreflected composite
      Term c = unreflect_gen(k, a);
      if (!c) throw std::runtime_error("no semantics for generator kind");
      Flow in = expand(m.dom, v);
      Flow out = eval_down(c, in, Flow{});
      return canon(m.cod, out);
    }
  }
}

// ---------------------------------------------------------------------------
// Interpretation files
//
//   assign A = {a1, a2, a3};
//   assign A = {z, s} basepoint z;
//   assign f = { a1 -> b2; (a1, b2) -> c1; ... };
//
// Sorts must be assigned before the generators that mention them. Generator
// boundaries must be plain sort words; element tuples are written in domain
// order and a bare label abbreviates a 1-tuple.

namespace detail {

struct InterpLexer {
  std::string s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) { ++i; continue; }
      if (s[i] == '#') { while (i < s.size() && s[i] != '\n') ++i; continue; }
      break;
    }
  }
  bool eof() { skip(); return i >= s.size(); }
  bool peek(char c) { skip(); return i < s.size() && s[i] == c; }
  void expect(char c) {
    skip();
    if (i >= s.size() || s[i] != c)
      throw std::runtime_error(std::string("expected '") + c +
                               "' in interpretation file");
    ++i;
  }
  bool try_arrow() {
    skip();
    if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>') { i += 2; return true; }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t b = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                            s[i] == '_' || s[i] == '\''))
      ++i;
    if (b == i) throw std::runtime_error("expected a name in interpretation file");
    return s.substr(b, i - b);
  }
};

}  // namespace detail

inline Interpretation parse_interpretation(const Signature& sig, ModelKind kind,
                                           const std::string& text) {
  detail::InterpLexer lx{text};
  Interpretation out;
  std::map<std::string, std::map<std::string, int>> label_index;

  auto tuple_labels = [&](const std::string& first) {
    std::vector<std::string> ls;
    if (first == "(") {
      if (!lx.peek(')'))
        for (;;) {
          ls.push_back(lx.ident());
          if (lx.peek(',')) { lx.expect(','); continue; }
          break;
        }
      lx.expect(')');
    } else {
      ls.push_back(first);
    }
    return ls;
  };
  auto read_side = [&]() {
    if (lx.peek('(')) { lx.expect('('); return tuple_labels("("); }
    return tuple_labels(lx.ident());
  };
  auto value_of = [&](const ObjectExpr& o, const std::vector<std::string>& ls) {
    if (ls.size() != o.strands.size())
      throw std::runtime_error("element tuple arity does not match boundary");
    bool hit_base = false;
    std::vector<Value> comp;
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const Strand& st = o.strands[k];
      if (st.is_bracket || st.pol != Polarity::Down)
        throw std::runtime_error(
            "interpretation files cover plain sort-word boundaries only");
      auto li = label_index.find(st.sort);
      if (li == label_index.end())
        throw std::runtime_error("sort '" + st.sort + "' has no assignment");
      auto ei = li->second.find(ls[k]);
      if (ei == li->second.end())
        throw std::runtime_error("unknown element '" + ls[k] + "' of sort '" +
                                 st.sort + "'");
      if (kind == ModelKind::Pointed && ei->second == 0) hit_base = true;
      comp.push_back(atom_value(ei->second));
    }
    if (kind == ModelKind::Pointed && hit_base) return bot_value();
    return tup_value(std::move(comp));
  };

  while (!lx.eof()) {
    std::string kw = lx.ident();
    if (kw != "assign")
      throw std::runtime_error("expected 'assign', got '" + kw + "'");
    std::string name = lx.ident();
    lx.expect('=');
    lx.expect('{');
    if (sig.has_sort(name)) {
      std::vector<std::string> labels;
      if (!lx.peek('}'))
        for (;;) {
          labels.push_back(lx.ident());
          if (lx.peek(',')) { lx.expect(','); continue; }
          break;
        }
      lx.expect('}');
      if (!lx.peek(';')) {
        std::string kw2 = lx.ident();
        if (kw2 != "basepoint")
          throw std::runtime_error("expected 'basepoint' or ';'");
        std::string bp = lx.ident();
        auto it = std::find(labels.begin(), labels.end(), bp);
        if (it == labels.end())
          throw std::runtime_error("basepoint '" + bp + "' is not an element");
        std::rotate(labels.begin(), it, it + 1);
      } else if (kind == ModelKind::Pointed) {
        throw std::runtime_error("pointed models need a basepoint for '" +
                                 name + "'");
      }
      lx.expect(';');
      if (labels.empty())
        throw std::runtime_error("sort '" + name + "' needs at least one element");
      out.sort_size[name] = static_cast<int>(labels.size());
      out.sort_labels[name] = labels;
      std::map<std::string, int> ix;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!ix.emplace(labels[k], static_cast<int>(k)).second)
          throw std::runtime_error("duplicate element '" + labels[k] + "'");
      }
      label_index[name] = std::move(ix);
      continue;
    }
    const GeneratorDecl* g = sig.find_generator(name);
    if (!g)
      throw std::runtime_error("'" + name + "' is neither a sort nor a generator");
    // rules, each "v -> w;"
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
        rules;
    while (!lx.peek('}')) {
      auto l = read_side();
      if (!lx.try_arrow()) throw std::runtime_error("expected '->' in rule");
      auto r = read_side();
      lx.expect(';');
      rules.push_back({std::move(l), std::move(r)});
    }
    lx.expect('}');
    lx.expect(';');
    Semantics sem(sig, kind, out);
    const Carrier& dc = sem.carrier(g->arity);
    const Carrier& cc = sem.carrier(g->coarity);
    std::vector<int> table(dc.elems.size(), -1);
    if (kind == ModelKind::Pointed) table[0] = 0;  // basepoint is preserved
    for (const auto& [l, r] : rules) {
      int di = dc.find(value_of(g->arity, l));
      int ci = cc.find(value_of(g->coarity, r));
      if (table[di] >= 0 && table[di] != ci)
        throw std::runtime_error("conflicting rules for '" + name + "'");
      table[di] = ci;
    }
    for (std::size_t k = 0; k < table.size(); ++k)
      if (table[k] < 0)
        throw std::runtime_error("generator '" + name +
                                 "' is missing a rule for some input");
    out.gen_table[name] = std::move(table);
  }
  return out;
}

}  // namespace bracket
