#include "qclab/flip_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qclab {

long long floor_div(const Rational& r) {
  long long q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() < 0) --q;
  return q;
}

namespace {

Rational len(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

}  // namespace

FlipComplex::FlipComplex(FlipManifoldSpec spec) : spec_(std::move(spec)) {
  validate_spec(spec_);
  ends_.resize(spec_.pieces.size());
  cycle_info_.resize(spec_.pieces.size());
  for (std::size_t i = 0; i < spec_.pieces.size(); ++i) {
    ends_[i].resize(spec_.pieces[i].boundary_cycles.size());
    cycle_info_[i].resize(spec_.pieces[i].boundary_cycles.size());
  }
  for (std::size_t g = 0; g < spec_.gluings.size(); ++g) {
    const auto& gl = spec_.gluings[g];
    ends_[gl.from_piece][gl.from_cycle] =
        GluingEnd{static_cast<int>(g), true, gl.to_piece, gl.to_cycle, gl.sigma, gl.tau};
    ends_[gl.to_piece][gl.to_cycle] =
        GluingEnd{static_cast<int>(g), false, gl.from_piece, gl.from_cycle, -gl.tau, -gl.sigma};
  }
  for (std::size_t i = 0; i < spec_.pieces.size(); ++i) {
    const auto& p = spec_.pieces[i];
    for (std::size_t c = 0; c < p.boundary_cycles.size(); ++c) {
      auto& info = cycle_info_[i][c];
      const Walk& cyc = p.boundary_cycles[c];
      info.start = p.spine.tail(cyc.front());
      info.tree = p.spine.tree_path(info.start);
      Walk w = info.tree;
      w.insert(w.end(), cyc.begin(), cyc.end());
      Walk ti = inverse(info.tree);
      w.insert(w.end(), ti.begin(), ti.end());
      info.word = reduce(w);
    }
    for (std::size_t c = 0; c < p.boundary_cycles.size(); ++c) {
      auto& info = cycle_info_[i][c];
      info.entry = canonical_wall(static_cast<int>(i), static_cast<int>(c), info.tree, &info.entry_m);
    }
  }
  check_disjoint_lines();
}

int FlipComplex::cycle_start(int piece, int cycle) const { return cycle_info_.at(piece).at(cycle).start; }

Rational FlipComplex::line_period(int piece, int cycle) const {
  const auto& p = spec_.pieces.at(piece);
  return p.base_scale * len(p.boundary_cycles.at(cycle).size());
}

DirEdge FlipComplex::cycle_edge(int piece, int cycle, long long index) const {
  const Walk& c = spec_.pieces.at(piece).boundary_cycles.at(cycle);
  long long n = static_cast<long long>(c.size());
  return c[static_cast<std::size_t>(((index % n) + n) % n)];
}

WallRef FlipComplex::canonical_wall(int piece, int cycle, const Walk& rep, int* shift) const {
  const Walk& c = spec_.pieces.at(piece).boundary_cycles.at(cycle);
  Walk r = reduce(rep);
  long long bound = static_cast<long long>(r.size() / c.size()) + 2;
  Walk best = r;
  long long best_k = 0;
  for (int dir : {1, -1}) {
    Walk cur = r;
    const Walk step = dir > 0 ? c : inverse(c);
    for (long long k = 1; k <= bound; ++k) {
      cur = concat_reduce(cur, step);
      if (shortlex_less(cur, best)) {
        best = cur;
        best_k = dir * k;
      }
    }
  }
  if (shift) *shift = static_cast<int>(best_k);
  return WallRef{cycle, std::move(best)};
}

const WallRef& FlipComplex::entry_rep(int piece, int cycle, int* m) const {
  const auto& info = cycle_info_.at(piece).at(cycle);
  if (m) *m = info.entry_m;
  return info.entry;
}

std::optional<WallRef> FlipComplex::entry_wall(const PieceCopy& copy) const {
  if (copy.address.empty()) return std::nullopt;
  return entry_rep(copy.piece, copy.entry_cycle);
}

std::optional<PieceCopy> FlipComplex::parent(const PieceCopy& copy) const {
  if (copy.address.empty()) return std::nullopt;
  return cross(copy, *entry_wall(copy)).to;
}

PieceCopy FlipComplex::neighbor_copy(const WallId& wall) const { return cross(wall.owner, wall.ref).to; }

Crossing FlipComplex::cross(const PieceCopy& copy, const WallRef& wall) const {
  const GluingEnd& end = gluing_end(copy.piece, wall.cycle);
  Crossing out;
  out.from = copy;
  out.wall_from = wall;
  auto entry = entry_wall(copy);
  if (entry && *entry == wall) {
    out.to.address.assign(copy.address.begin(), copy.address.end() - 1);
    out.to.piece = end.partner_piece;
    if (out.to.address.empty()) {
      out.to.entry_cycle = -1;
    } else {
      // Replay the parent's entry cycle from the root.
      PieceCopy cur = root();
      for (const auto& w : out.to.address) {
        const GluingEnd& e = gluing_end(cur.piece, w.cycle);
        cur.piece = e.partner_piece;
        cur.entry_cycle = e.partner_cycle;
      }
      out.to.entry_cycle = cur.entry_cycle;
    }
    out.wall_to = copy.address.back();
  } else {
    out.to.address = copy.address;
    out.to.address.push_back(wall);
    out.to.piece = end.partner_piece;
    out.to.entry_cycle = end.partner_cycle;
    out.wall_to = entry_rep(end.partner_piece, end.partner_cycle);
  }
  return out;
}

std::vector<Crossing> FlipComplex::dual_tree_geodesic(const PieceCopy& a, const PieceCopy& b) const {
  std::size_t l = 0;
  while (l < a.address.size() && l < b.address.size() && a.address[l] == b.address[l]) ++l;
  std::vector<Crossing> out;
  PieceCopy cur = a;
  while (cur.address.size() > l) {
    out.push_back(cross(cur, *entry_wall(cur)));
    cur = out.back().to;
  }
  for (std::size_t d = l; d < b.address.size(); ++d) {
    out.push_back(cross(cur, b.address[d]));
    cur = out.back().to;
  }
  return out;
}

int FlipComplex::dual_distance(const PieceCopy& a, const PieceCopy& b) const {
  std::size_t l = 0;
  while (l < a.address.size() && l < b.address.size() && a.address[l] == b.address[l]) ++l;
  return static_cast<int>(a.address.size() + b.address.size() - 2 * l);
}

PointCoord FlipComplex::canonical(PointCoord x) const {
  if (auto t = std::get_if<TreePos>(&x.base)) {
    x.base = normalize(*t);
    return x;
  }
  auto& l = std::get<LinePos>(x.base);
  auto entry = entry_wall(x.copy);
  if (!entry || *entry != l.wall) return x;
  const GluingEnd& end = gluing_end(x.copy.piece, l.wall.cycle);
  Crossing c = cross(x.copy, l.wall);
  return PointCoord{c.to, LinePos{c.wall_to, x.fiber + end.alpha}, l.s + end.beta};
}

bool FlipComplex::lies_in(const PointCoord& x, const PieceCopy& copy) const {
  if (x.copy == copy) return true;
  const auto* l = std::get_if<LinePos>(&x.base);
  return l && cross(x.copy, l->wall).to == copy;
}

PointCoord FlipComplex::express_in(const PointCoord& x, const PieceCopy& copy) const {
  if (x.copy == copy) return x;
  if (const auto* l = std::get_if<LinePos>(&x.base)) {
    Crossing c = cross(x.copy, l->wall);
    if (c.to == copy) {
      const GluingEnd& end = gluing_end(x.copy.piece, l->wall.cycle);
      return PointCoord{c.to, LinePos{c.wall_to, x.fiber + end.alpha}, l->s + end.beta};
    }
  }
  throw std::invalid_argument("point does not lie in the requested piece copy");
}

double FlipComplex::piece_distance(const PointCoord& a, const PointCoord& b, Metric m) const {
  PointCoord aa = a, bb = b;
  if (lies_in(b, a.copy)) {
    bb = express_in(b, a.copy);
  } else if (lies_in(a, b.copy)) {
    aa = express_in(a, b.copy);
  } else {
    throw std::invalid_argument("points do not share a piece copy");
  }
  double db = base_distance(aa.copy.piece, aa.base, bb.base).to_double();
  double df = std::abs((aa.fiber - bb.fiber).to_double());
  return m == Metric::L1 ? db + df : std::hypot(db, df);
}

std::pair<Rational, Rational> FlipComplex::wall_coords(const WallId& wall, const PointCoord& x) const {
  if (!lies_in(x, wall.owner)) throw std::invalid_argument("point is not on the wall");
  PointCoord y = express_in(x, wall.owner);
  const auto* l = std::get_if<LinePos>(&y.base);
  if (!l || l->wall != wall.ref) throw std::invalid_argument("point is not on the wall");
  return {l->s, y.fiber};
}

PointCoord FlipComplex::wall_point(const WallId& wall, const Rational& s, const Rational& t) const {
  return canonical(PointCoord{wall.owner, LinePos{wall.ref, s}, t});
}

namespace {

std::vector<WallRef> walls_within(const FlipComplex& fc, int piece, int radius) {
  std::set<WallRef> out;
  const auto& sp = fc.piece(piece).spine;
  auto walks = sp.reduced_walks(0, radius);
  for (int c = 0; c < static_cast<int>(fc.piece(piece).boundary_cycles.size()); ++c) {
    int start = fc.cycle_start(piece, c);
    for (const auto& w : walks) {
      if (sp.walk_end(0, w) != start) continue;
      WallRef r = fc.canonical_wall(piece, c, w);
      if (static_cast<int>(r.rep.size()) <= radius) out.insert(std::move(r));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

double FlipComplex::estimate_rho(int radius) const {
  if (radius < 1) throw std::invalid_argument("estimate_rho needs radius >= 1");
  for (int r = radius; r <= radius + 8; ++r) {
    double best = std::numeric_limits<double>::infinity();
    for (int p = 0; p < piece_count(); ++p) {
      auto walls = walls_within(*this, p, r);
      for (std::size_t i = 0; i < walls.size(); ++i)
        for (std::size_t j = i + 1; j < walls.size(); ++j)
          best = std::min(best, line_to_line_bridge(p, walls[i], walls[j]).length.to_double());
    }
    if (std::isfinite(best)) return best;
  }
  throw ConsistencyError("no pair of distinct boundary lines found near the base vertex");
}

Rational FlipComplex::max_axis_overlap(int radius) const {
  Rational best{0};
  for (int p = 0; p < piece_count(); ++p) {
    auto walls = walls_within(*this, p, radius);
    for (std::size_t i = 0; i < walls.size(); ++i)
      for (std::size_t j = i + 1; j < walls.size(); ++j)
        if (auto ov = axis_overlap(p, walls[i], walls[j]))
          best = max(best, Rational(ov->second - ov->first) * piece(p).base_scale);
  }
  return best;
}

void FlipComplex::check_disjoint_lines() const {
  for (int p = 0; p < piece_count(); ++p) {
    const auto& ps = piece(p);
    if (!ps.collar_width.is_zero()) continue;
    int longest = 0;
    for (const auto& c : ps.boundary_cycles) longest = std::max(longest, static_cast<int>(c.size()));
    int radius = 2 * longest + 2 * ps.spine.vertex_count();
    auto walls = walls_within(*this, p, radius);
    for (int c = 0; c < static_cast<int>(ps.boundary_cycles.size()); ++c) {
      const WallRef& base = entry_rep(p, c);
      for (const auto& w : walls)
        if (w != base && axis_overlap(p, base, w))
          throw SpecError("piece " + std::to_string(p) +
                          ": distinct boundary lines share spine edges; collar_width must be positive");
    }
  }
}

}  // namespace qclab
