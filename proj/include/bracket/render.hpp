#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "bracket/terms.hpp"

namespace bracket {

// ---------------------------------------------------------------------------
// Diagram layout
//
// A term is flattened to a grid: each row is one composition slice, each
// cell one tensor factor. Between consecutive rows sits an interface, the
// flattened wire list of the boundary word at that height. Bracket strands
// flatten to an opening and a closing wire enclosing their content, so
// bracket pairs are balanced by construction; the validity checks of the
// diagram language (balanced pairs, upstrands confined to bracket
// interiors) are still asserted explicitly on every layout.

struct Wire {
  enum Kind { Plain, Open, Close } kind = Plain;
  Polarity pol = Polarity::Down;
  std::string sort;  // empty for bracket wires
  int depth = 0;     // bracket nesting depth of this wire
};

struct Cell {
  int row = 0;
  int in0 = 0, in1 = 0;    // wire span consumed on the row's top interface
  int out0 = 0, out1 = 0;  // wire span produced on the bottom interface
  enum Kind { Strands, Box, Cross, CapArc, CupArc } kind = Strands;
  std::string label;       // box label
  int cross_left = 0;      // Cross: wires in the left block
};

struct Route {
  int row = 0;
  int from = -1, to = -1;  // wire index on top / bottom interface (-1: none)
  Wire wire;               // polarity and colour tag travel with the route
};

struct BracketPair {
  int row = 0;      // interface index
  int open = 0;     // wire index of the opening strand
  int close = 0;    // wire index of the closing strand
};

struct Layout {
  std::vector<std::vector<Wire>> interfaces;  // rows+1 entries
  std::vector<Cell> cells;
  std::vector<Route> routes;
  std::vector<BracketPair> pairs;
  int rows = 0;
  int max_width = 0;
};

namespace detail {

inline void flatten_wires(const std::vector<Strand>& w, int depth,
                          std::vector<Wire>& out) {
  for (const Strand& s : w) {
    if (s.is_bracket) {
      out.push_back({Wire::Open, Polarity::Down, "", depth});
      flatten_wires(s.inner, depth + 1, out);
      out.push_back({Wire::Close, Polarity::Down, "", depth});
    } else {
      out.push_back({Wire::Plain, s.pol, s.sort, depth});
    }
  }
}

inline std::vector<Wire> flatten_wires(const ObjectExpr& o) {
  std::vector<Wire> out;
  flatten_wires(o.strands, 0, out);
  return out;
}

// one tensor factor of one slice, before wire spans are assigned
struct LayAtom {
  Term t;                          // primitive factor, or null for a wrapper
  std::vector<LayAtom> inner;      // content when this is a bracket wrapper
  ObjectExpr dom, cod;
};

// bracket functoriality, applied as a layout transformation only: a bracket
// around a composite becomes a composite of single-slice brackets
inline std::vector<std::vector<LayAtom>> lay_rows(const Signature& sig,
                                                  const Term& t) {
  switch (t->tag) {
    case TK::Comp: {
      auto ra = lay_rows(sig, t->a);
      auto rb = lay_rows(sig, t->b);
      ra.insert(ra.end(), rb.begin(), rb.end());
      return ra;
    }
    case TK::Tensor: {
      auto ra = lay_rows(sig, t->a);
      auto rb = lay_rows(sig, t->b);
      MorphType ma = infer(sig, t->a), mb = infer(sig, t->b);
      // pad the shorter side with identity slices so the rows line up
      auto pad = [](std::vector<std::vector<LayAtom>>& r, std::size_t h,
                    const ObjectExpr& edge) {
        while (r.size() < h)
          r.push_back({LayAtom{id(edge), {}, edge, edge}});
      };
      std::size_t h = std::max(ra.size(), rb.size());
      pad(ra, h, ma.cod);
      pad(rb, h, mb.cod);
      for (std::size_t i = 0; i < h; ++i)
        ra[i].insert(ra[i].end(), rb[i].begin(), rb[i].end());
      return ra;
    }
    case TK::Bracketed: {
      auto ru = lay_rows(sig, t->a);
      std::vector<std::vector<LayAtom>> out;
      for (auto& row : ru) {
        ObjectExpr d, c;
        for (const LayAtom& a : row) {
          d.strands.insert(d.strands.end(), a.dom.strands.begin(),
                           a.dom.strands.end());
          c.strands.insert(c.strands.end(), a.cod.strands.begin(),
                           a.cod.strands.end());
        }
        LayAtom wrap;
        wrap.inner = std::move(row);
        wrap.dom = bracket(d);
        wrap.cod = bracket(c);
        out.push_back({std::move(wrap)});
      }
      if (out.empty()) {
        LayAtom wrap;
        wrap.dom = wrap.cod = bracket(ObjectExpr{});
        out.push_back({std::move(wrap)});
      }
      return out;
    }
    default: {
      MorphType m = infer(sig, t);
      return {{LayAtom{t, {}, m.dom, m.cod}}};
    }
  }
}

inline void emit_atom(const LayAtom& a, int row, int in0, int out0,
                      Layout& ly) {
  std::vector<Wire> dw = flatten_wires(a.dom);
  std::vector<Wire> cw = flatten_wires(a.cod);
  int in1 = in0 + static_cast<int>(dw.size());
  int out1 = out0 + static_cast<int>(cw.size());
  if (!a.t && !a.inner.empty()) {
    // bracket wrapper: the outermost wires pass straight through, the
    // content is emitted one column in
    ly.routes.push_back({row, in0, out0, dw.front()});
    ly.routes.push_back({row, in1 - 1, out1 - 1, dw.back()});
    int ci = in0 + 1, co = out0 + 1;
    for (const LayAtom& sub : a.inner) {
      emit_atom(sub, row, ci, co, ly);
      ci += static_cast<int>(flatten_wires(sub.dom).size());
      co += static_cast<int>(flatten_wires(sub.cod).size());
    }
    return;
  }
  if (!a.t) return;  // empty bracket wrapper handled below as strands
  switch (a.t->tag) {
    case TK::Id: {
      for (int i = 0; i < in1 - in0; ++i)
        ly.routes.push_back({row, in0 + i, out0 + i, dw[i]});
      ly.cells.push_back({row, in0, in1, out0, out1, Cell::Strands, "", 0});
      return;
    }
    case TK::Sym: {
      int nl = static_cast<int>(flatten_wires(a.t->obj).size());
      int n = in1 - in0;
      for (int i = 0; i < nl; ++i)
        ly.routes.push_back({row, in0 + i, out0 + (n - nl) + i, dw[i]});
      for (int i = nl; i < n; ++i)
        ly.routes.push_back({row, in0 + i, out0 + (i - nl), dw[i]});
      ly.cells.push_back({row, in0, in1, out0, out1, Cell::Cross, "", nl});
      return;
    }
    case TK::BracketGen:
      if (a.t->kind == BracketGenKind::BubbleCap) {
        ly.cells.push_back({row, in0, in1, out0, out1, Cell::CapArc, "", 0});
        return;
      }
      if (a.t->kind == BracketGenKind::BubbleCup) {
        ly.cells.push_back({row, in0, in1, out0, out1, Cell::CupArc, "", 0});
        return;
      }
      ly.cells.push_back(
          {row, in0, in1, out0, out1, Cell::Box, kind_name(a.t->kind), 0});
      return;
    default: {
      std::string label = print_term(a.t);
      ly.cells.push_back({row, in0, in1, out0, out1, Cell::Box, label, 0});
      return;
    }
  }
}

inline void validate_interface(const std::vector<Wire>& w, int row,
                               Layout& ly) {
  std::vector<int> stack;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (w[i].kind == Wire::Open) {
      stack.push_back(i);
    } else if (w[i].kind == Wire::Close) {
      if (stack.empty())
        throw TypeError("InvalidDiagram", "unbalanced bracket strands");
      ly.pairs.push_back({row, stack.back(), i});
      stack.pop_back();
    } else if (w[i].pol == Polarity::Up && stack.empty()) {
      throw TypeError("InvalidDiagram",
                      "upstrand outside a bracket pair: " + w[i].sort);
    }
  }
  if (!stack.empty())
    throw TypeError("InvalidDiagram", "unbalanced bracket strands");
}

}  // namespace detail

inline Layout layout(const Signature& sig, const Term& t) {
  MorphType m = infer(sig, t);
  auto rows = detail::lay_rows(sig, t);
  Layout ly;
  ly.rows = static_cast<int>(rows.size());
  ObjectExpr top = m.dom;
  ly.interfaces.push_back(detail::flatten_wires(top));
  for (int r = 0; r < ly.rows; ++r) {
    ObjectExpr bot;
    for (const detail::LayAtom& a : rows[r])
      bot.strands.insert(bot.strands.end(), a.cod.strands.begin(),
                         a.cod.strands.end());
    ly.interfaces.push_back(detail::flatten_wires(bot));
    int in0 = 0, out0 = 0;
    for (const detail::LayAtom& a : rows[r]) {
      detail::emit_atom(a, r, in0, out0, ly);
      in0 += static_cast<int>(detail::flatten_wires(a.dom).size());
      out0 += static_cast<int>(detail::flatten_wires(a.cod).size());
    }
    top = std::move(bot);
  }
  for (int i = 0; i < static_cast<int>(ly.interfaces.size()); ++i) {
    detail::validate_interface(ly.interfaces[i], i, ly);
    ly.max_width = std::max(ly.max_width,
                            static_cast<int>(ly.interfaces[i].size()));
  }
  return ly;
}

// ---------------------------------------------------------------------------
// SVG rendering
//
// Pure function of the layout; all coordinates are integers so the output
// bytes are reproducible across platforms.

namespace detail {

constexpr int kColW = 40;    // horizontal wire spacing
constexpr int kRowH = 56;    // height of one slice
constexpr int kMargin = 24;  // outer margin
constexpr int kBoxPad = 10;  // box inset from the wire span

inline int wire_x(int i) { return kMargin + kColW / 2 + i * kColW; }
inline int iface_y(int r) { return kMargin + r * kRowH; }

inline const char* wire_colour(const Wire& w) {
  return w.kind == Wire::Plain ? "#000000" : "#cc2222";
}

inline void svg_line(std::ostringstream& o, int x1, int y1, int x2, int y2,
                     const char* colour) {
  o << "  <line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
    << "\" y2=\"" << y2 << "\" stroke=\"" << colour
    << "\" stroke-width=\"2\"/>\n";
}

// full arrowhead for plain strands, pointing with the strand's orientation
inline void svg_arrow(std::ostringstream& o, int x, int y, bool down,
                      const char* colour) {
  int d = down ? 6 : -6;
  o << "  <path d=\"M " << (x - 5) << " " << (y - d) << " L " << x << " "
    << (y + d) << " L " << (x + 5) << " " << (y - d) << "\" fill=\"" << colour
    << "\"/>\n";
}

// half arrowhead for bracket strands; opening strands carry it on the
// right, closing strands on the left
inline void svg_half_arrow(std::ostringstream& o, int x, int y, bool opening) {
  int s = opening ? 1 : -1;
  o << "  <path d=\"M " << x << " " << (y + 6) << " L " << (x + s * 7) << " "
    << (y - 4) << " L " << x << " " << (y - 4) << " Z\" fill=\"#cc2222\"/>\n";
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const Layout& ly) {
  using namespace detail;
  std::ostringstream o;
  int w = 2 * kMargin + std::max(ly.max_width, 1) * kColW;
  int h = 2 * kMargin + std::max(ly.rows, 1) * kRowH;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  o << "  <rect width=\"" << w << "\" height=\"" << h
    << "\" fill=\"#ffffff\"/>\n";

  for (const Route& rt : ly.routes) {
    int y0 = iface_y(rt.row), y1 = iface_y(rt.row + 1);
    int x0 = wire_x(rt.from), x1 = wire_x(rt.to);
    const char* col = wire_colour(rt.wire);
    svg_line(o, x0, y0, x1, y1, col);
    int mx = (x0 + x1) / 2, my = (y0 + y1) / 2;
    if (rt.wire.kind == Wire::Plain) {
      svg_arrow(o, mx, my, rt.wire.pol == Polarity::Down, col);
    } else {
      svg_half_arrow(o, mx, my, rt.wire.kind == Wire::Open);
    }
  }

  for (const Cell& c : ly.cells) {
    int y0 = iface_y(c.row), y1 = iface_y(c.row + 1);
    switch (c.kind) {
      case Cell::Strands:
        break;  // routes already drawn
      case Cell::Cross: {
        // crossing strands are routes too; nothing extra to draw
        break;
      }
      case Cell::CapArc: {
        int xa = wire_x(c.out0), xb = wire_x(c.out1 - 1);
        int ym = y0 + kRowH / 4;
        o << "  <path d=\"M " << xa << " " << y1 << " C " << xa << " " << ym
          << " " << xb << " " << ym << " " << xb << " " << y1
          << "\" fill=\"none\" stroke=\"#cc2222\" stroke-width=\"2\"/>\n";
        break;
      }
      case Cell::CupArc: {
        int xa = wire_x(c.in0), xb = wire_x(c.in1 - 1);
        int ym = y1 - kRowH / 4;
        o << "  <path d=\"M " << xa << " " << y0 << " C " << xa << " " << ym
          << " " << xb << " " << ym << " " << xb << " " << y0
          << "\" fill=\"none\" stroke=\"#cc2222\" stroke-width=\"2\"/>\n";
        break;
      }
      case Cell::Box: {
        int lo = std::min(c.in0, c.out0), hi = std::max(c.in1, c.out1);
        int bx0 = wire_x(lo) - kBoxPad;
        int bx1 = (hi > lo ? wire_x(hi - 1) : wire_x(lo)) + kBoxPad;
        int by0 = y0 + kRowH / 4, by1 = y1 - kRowH / 4;
        for (int i = c.in0; i < c.in1; ++i)
          svg_line(o, wire_x(i), y0, wire_x(i), by0, "#000000");
        for (int i = c.out0; i < c.out1; ++i)
          svg_line(o, wire_x(i), by1, wire_x(i), y1, "#000000");
        o << "  <rect x=\"" << bx0 << "\" y=\"" << by0 << "\" width=\""
          << (bx1 - bx0) << "\" height=\"" << (by1 - by0)
          << "\" fill=\"#f4f4f4\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
        o << "  <text x=\"" << (bx0 + bx1) / 2 << "\" y=\""
          << (by0 + by1) / 2 + 5
          << "\" font-family=\"monospace\" font-size=\"13\" "
             "text-anchor=\"middle\">"
          << xml_escape(c.label) << "</text>\n";
        break;
      }
    }
  }
  o << "</svg>\n";
  return o.str();
}

inline std::string render_svg(const Signature& sig, const Term& t) {
  return render_svg(layout(sig, t));
}

}  // namespace bracket
