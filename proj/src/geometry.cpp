// Per-piece base geometry: spine tree points, boundary axes, collar lines.
#include <algorithm>

#include "qclab/flip_complex.hpp"

namespace qclab {
namespace {

Rational len(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

Rational walk_distance(const Walk& u, const Walk& v) {
  return len(u.size() + v.size() - 2 * common_prefix(u, v));
}

Walk extend(const Walk& w, DirEdge e) {
  Walk out = w;
  out.push_back(e);
  return reduce(out);
}

}  // namespace

TreePos FlipComplex::normalize(TreePos p) const {
  p.walk = reduce(p.walk);
  if (p.offset.sign() < 0 || p.offset > Rational(1))
    throw std::invalid_argument("tree offset outside [0,1]");
  if (p.offset == Rational(1)) {
    p.walk = extend(p.walk, p.edge);
    p.offset = 0;
  }
  if (p.offset.is_zero()) {
    p.edge = DirEdge{};
    return p;
  }
  if (!p.walk.empty() && p.walk.back() == p.edge.inv()) {
    // The edge points back toward the base vertex; re-anchor at its far end.
    p.edge = p.walk.back();
    p.walk.pop_back();
    p.offset = Rational(1) - p.offset;
  }
  return p;
}

Walk FlipComplex::axis_vertex(int piece, const WallRef& wall, long long index) const {
  Walk w = wall.rep;
  if (index >= 0) {
    for (long long k = 0; k < index; ++k) w.push_back(cycle_edge(piece, wall.cycle, k));
  } else {
    for (long long k = -1; k >= index; --k) w.push_back(cycle_edge(piece, wall.cycle, k).inv());
  }
  return reduce(w);
}

FlipComplex::AxisFoot FlipComplex::project_vertex(int piece, const Walk& v, const WallRef& wall) const {
  Walk rel = reduce([&] {
    Walk w = inverse(wall.rep);
    w.insert(w.end(), v.begin(), v.end());
    return w;
  }());
  long long a = 0, b = 0;
  while (a < static_cast<long long>(rel.size()) && rel[a] == cycle_edge(piece, wall.cycle, a)) ++a;
  while (b < static_cast<long long>(rel.size()) && rel[b] == cycle_edge(piece, wall.cycle, -b - 1).inv()) ++b;
  AxisFoot f;
  f.index = a > 0 ? a : -b;
  f.dist = static_cast<long long>(rel.size()) - std::max(a, b);
  return f;
}

std::pair<Rational, Rational> FlipComplex::foot_on_axis(int piece, const TreePos& p,
                                                        const WallRef& wall) const {
  AxisFoot fw = project_vertex(piece, p.walk, wall);
  if (p.offset.is_zero()) return {Rational(fw.index), Rational(fw.dist)};
  AxisFoot fe = project_vertex(piece, extend(p.walk, p.edge), wall);
  if (fw.dist == 0 && fe.dist == 0)
    return {Rational(fw.index) + p.offset * Rational(fe.index - fw.index), Rational(0)};
  Rational dw = p.offset + Rational(fw.dist);
  Rational de = Rational(1) - p.offset + Rational(fe.dist);
  if (dw <= de) return {Rational(fw.index), dw};
  return {Rational(fe.index), de};
}

TreePos FlipComplex::axis_point(int piece, const WallRef& wall, const Rational& s) const {
  Rational idx = s / spec_.pieces.at(piece).base_scale;
  long long k = floor_div(idx);
  Rational r = idx - Rational(k);
  TreePos p{axis_vertex(piece, wall, k), DirEdge{}, Rational(0)};
  if (!r.is_zero()) {
    p.edge = cycle_edge(piece, wall.cycle, k);
    p.offset = r;
  }
  return normalize(std::move(p));
}

std::optional<Rational> FlipComplex::axis_coordinate(int piece, const TreePos& p, const WallRef& wall) const {
  auto [idx, d] = foot_on_axis(piece, p, wall);
  if (!d.is_zero()) return std::nullopt;
  return idx * spec_.pieces.at(piece).base_scale;
}

Rational FlipComplex::tree_to_vertex(const TreePos& p, const Walk& v) const {
  if (p.offset.is_zero()) return walk_distance(p.walk, v);
  Rational a = p.offset + walk_distance(p.walk, v);
  Rational b = Rational(1) - p.offset + walk_distance(extend(p.walk, p.edge), v);
  return min(a, b);
}

Rational FlipComplex::tree_distance(const TreePos& p, const TreePos& q) const {
  if (q.offset.is_zero()) return tree_to_vertex(p, q.walk);
  if (!p.offset.is_zero() && p.walk == q.walk && p.edge == q.edge) return abs(p.offset - q.offset);
  Rational a = q.offset + tree_to_vertex(p, q.walk);
  Rational b = Rational(1) - q.offset + tree_to_vertex(p, extend(q.walk, q.edge));
  return min(a, b);
}

TreePos FlipComplex::tree_point_of(int piece, const BasePos& p) const {
  if (auto t = std::get_if<TreePos>(&p)) return *t;
  const auto& l = std::get<LinePos>(p);
  return axis_point(piece, l.wall, l.s);
}

Rational FlipComplex::base_distance(int piece, const BasePos& p, const BasePos& q) const {
  const auto& ps = spec_.pieces.at(piece);
  const auto* lp = std::get_if<LinePos>(&p);
  const auto* lq = std::get_if<LinePos>(&q);
  if (lp && lq && lp->wall == lq->wall) return abs(lp->s - lq->s);
  Rational collar = ps.collar_width * Rational((lp ? 1 : 0) + (lq ? 1 : 0));
  return collar + ps.base_scale * tree_distance(tree_point_of(piece, p), tree_point_of(piece, q));
}

Projection FlipComplex::project_to_line(int piece, const BasePos& p, const WallRef& wall) const {
  const auto& ps = spec_.pieces.at(piece);
  if (auto l = std::get_if<LinePos>(&p); l && l->wall == wall) return {*l, Rational(0)};
  Rational collar = ps.collar_width * Rational(std::holds_alternative<LinePos>(p) ? 2 : 1);
  auto [idx, d] = foot_on_axis(piece, tree_point_of(piece, p), wall);
  return {LinePos{wall, idx * ps.base_scale}, collar + ps.base_scale * d};
}

std::optional<std::pair<long long, long long>> FlipComplex::axis_overlap(int piece, const WallRef& w1,
                                                                         const WallRef& w2) const {
  if (w1 == w2) throw std::invalid_argument("axis_overlap of a line with itself");
  AxisFoot f2 = project_vertex(piece, w1.rep, w2);
  Walk v2 = axis_vertex(piece, w2, f2.index);
  AxisFoot f1 = project_vertex(piece, v2, w1);
  if (f1.dist > 0) return std::nullopt;
  const auto& p = spec_.pieces.at(piece);
  long long cap = 2 * static_cast<long long>(p.boundary_cycles[w1.cycle].size() +
                                              p.boundary_cycles[w2.cycle].size()) + 4;
  long long lo = f1.index, hi = f1.index;
  while (project_vertex(piece, axis_vertex(piece, w1, hi + 1), w2).dist == 0) {
    if (++hi - lo > cap) throw ConsistencyError("boundary axes coincide");
  }
  while (project_vertex(piece, axis_vertex(piece, w1, lo - 1), w2).dist == 0) {
    if (hi - --lo > cap) throw ConsistencyError("boundary axes coincide");
  }
  return std::make_pair(lo, hi);
}

Bridge FlipComplex::line_to_line_bridge(int piece, const WallRef& w1, const WallRef& w2) const {
  if (w1 == w2) throw std::invalid_argument("bridge between a line and itself");
  const auto& ps = spec_.pieces.at(piece);
  if (auto ov = axis_overlap(piece, w1, w2)) {
    if (ps.collar_width.is_zero())
      throw ConsistencyError("distinct boundary lines intersect (collar width 0)");
    Rational mid = Rational(ov->first + ov->second, 2);
    Rational s1 = mid * ps.base_scale;
    auto [j, d] = foot_on_axis(piece, axis_point(piece, w1, s1), w2);
    (void)d;
    return {LinePos{w1, s1}, LinePos{w2, j * ps.base_scale}, ps.collar_width * Rational(2)};
  }
  AxisFoot f2 = project_vertex(piece, w1.rep, w2);
  Walk v2 = axis_vertex(piece, w2, f2.index);
  AxisFoot f1 = project_vertex(piece, v2, w1);
  return {LinePos{w1, Rational(f1.index) * ps.base_scale}, LinePos{w2, Rational(f2.index) * ps.base_scale},
          ps.collar_width * Rational(2) + ps.base_scale * Rational(f1.dist)};
}

BasePos FlipComplex::translate(int piece, const Walk& u, const BasePos& p) const {
  if (auto t = std::get_if<TreePos>(&p)) {
    TreePos q = *t;
    Walk w = u;
    w.insert(w.end(), q.walk.begin(), q.walk.end());
    q.walk = reduce(w);
    return normalize(std::move(q));
  }
  const auto& l = std::get<LinePos>(p);
  Walk w = u;
  w.insert(w.end(), l.wall.rep.begin(), l.wall.rep.end());
  int k = 0;
  WallRef ref = canonical_wall(piece, l.wall.cycle, w, &k);
  return LinePos{std::move(ref), l.s - Rational(k) * line_period(piece, l.wall.cycle)};
}

}  // namespace qclab
