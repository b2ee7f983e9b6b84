#include "qclab/special_paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qclab {
namespace {

const BasePos& base_in(const FlipComplex& fc, const PointCoord& x, const PieceCopy& copy, PointCoord& tmp) {
  tmp = fc.express_in(x, copy);
  return tmp.base;
}

const Rational& line_s(const BasePos& b) { return std::get<LinePos>(b).s; }

double segment_length(const FlipComplex& fc, const PieceCopy& copy, const PointCoord& a, const PointCoord& b,
                      Metric m) {
  PointCoord aa = fc.express_in(a, copy), bb = fc.express_in(b, copy);
  double db = fc.base_distance(copy.piece, aa.base, bb.base).to_double();
  double df = std::abs((aa.fiber - bb.fiber).to_double());
  return m == Metric::L1 ? db + df : std::hypot(db, df);
}

Rational exact_l1(const FlipComplex& fc, const PieceCopy& copy, const PointCoord& a, const PointCoord& b) {
  PointCoord aa = fc.express_in(a, copy), bb = fc.express_in(b, copy);
  return fc.base_distance(copy.piece, aa.base, bb.base) + abs(aa.fiber - bb.fiber);
}

}  // namespace

std::vector<Crossing> separating_walls(const FlipComplex& fc, const PointCoord& x, const PointCoord& y) {
  PointCoord cx = fc.canonical(x), cy = fc.canonical(y);
  auto walls = fc.dual_tree_geodesic(cx.copy, cy.copy);
  std::size_t front = 0;
  while (front < walls.size() && fc.lies_in(cx, walls[front].to)) ++front;
  std::size_t back = walls.size();
  while (back > front && fc.lies_in(cy, walls[back - 1].from)) --back;
  return {walls.begin() + static_cast<std::ptrdiff_t>(front), walls.begin() + static_cast<std::ptrdiff_t>(back)};
}

namespace {

// Copy holding both endpoints when no wall separates them.
PieceCopy common_copy(const FlipComplex& fc, const PointCoord& x, const PointCoord& y) {
  auto walls = fc.dual_tree_geodesic(x.copy, y.copy);
  PieceCopy cur = x.copy;
  for (const auto& c : walls) {
    if (!fc.lies_in(x, c.to)) break;
    cur = c.to;
  }
  if (!fc.lies_in(y, cur)) throw ConsistencyError("endpoints share no piece copy");
  return cur;
}

}  // namespace

SpecialPath special_path(const FlipComplex& fc, const PointCoord& x0, const PointCoord& y0) {
  PointCoord x = fc.canonical(x0), y = fc.canonical(y0);
  SpecialPath path;
  auto walls = separating_walls(fc, x, y);
  PointCoord tmp;
  if (walls.empty()) {
    PieceCopy c = common_copy(fc, x, y);
    path.copies = {c};
    path.p = {base_in(fc, x, c, tmp)};
    path.q = {base_in(fc, y, c, tmp)};
    path.breakpoints = {x, y};
    return path;
  }
  const std::size_t n = walls.size();
  path.walls = walls;
  for (const auto& w : walls) path.copies.push_back(w.from);
  path.copies.push_back(walls.back().to);
  path.p.resize(n + 1);
  path.q.resize(n + 1);

  const PieceCopy& first = path.copies.front();
  path.p[0] = base_in(fc, x, first, tmp);
  path.q[0] = fc.project_to_line(first.piece, path.p[0], walls[0].wall_from).foot;
  for (std::size_t i = 1; i < n; ++i) {
    Bridge b = fc.line_to_line_bridge(path.copies[i].piece, walls[i - 1].wall_to, walls[i].wall_from);
    path.p[i] = b.p;
    path.q[i] = b.q;
  }
  const PieceCopy& last = path.copies.back();
  path.q[n] = base_in(fc, y, last, tmp);
  path.p[n] = fc.project_to_line(last.piece, path.q[n], walls[n - 1].wall_to).foot;

  path.breakpoints.push_back(x);
  for (std::size_t i = 0; i < n; ++i) {
    const PieceCopy& m = path.copies[i];
    const GluingEnd& end = fc.gluing_end(m.piece, walls[i].wall_from.cycle);
    path.breakpoints.push_back(
        fc.canonical(PointCoord{m, LinePos{walls[i].wall_from, line_s(path.q[i])}, line_s(path.p[i + 1]) - end.alpha}));
  }
  path.breakpoints.push_back(y);
  return path;
}

double path_length(const FlipComplex& fc, const SpecialPath& path, Metric metric) {
  double total = 0;
  for (std::size_t k = 0; k + 1 < path.breakpoints.size(); ++k)
    total += segment_length(fc, path.copies[k], path.breakpoints[k], path.breakpoints[k + 1], metric);
  return total;
}

double distance_lower_bound(const FlipComplex& fc, const PointCoord& x0, const PointCoord& y0, double rho) {
  PointCoord x = fc.canonical(x0), y = fc.canonical(y0);
  auto walls = separating_walls(fc, x, y);
  if (walls.empty()) {
    PieceCopy c = common_copy(fc, x, y);
    return segment_length(fc, c, x, y, Metric::L2);
  }
  const std::size_t n = walls.size();
  PointCoord tmp;
  const PieceCopy& first = walls.front().from;
  const PieceCopy& last = walls.back().to;
  Rational sum = fc.project_to_line(first.piece, base_in(fc, x, first, tmp), walls.front().wall_from).dist;
  sum += fc.project_to_line(last.piece, base_in(fc, y, last, tmp), walls.back().wall_to).dist;
  for (std::size_t i = 1; i < n; ++i)
    sum += fc.line_to_line_bridge(walls[i].from.piece, walls[i - 1].wall_to, walls[i].wall_from).length;
  double pieces = static_cast<double>(n + 1);
  return std::max((pieces - 2) * rho, sum.to_double());
}

SlideResult horizontal_slide(const FlipComplex& fc, const PointCoord& x0, const PointCoord& y0,
                             const PointCoord& z0) {
  PointCoord x = fc.canonical(x0), y = fc.canonical(y0), z = fc.canonical(z0);
  const auto* yl = std::get_if<LinePos>(&y.base);
  if (!yl) throw std::invalid_argument("horizontal_slide: y is not a wall point");
  PieceCopy side_a = y.copy;
  PieceCopy side_b = fc.cross(y.copy, yl->wall).to;
  bool direct = fc.lies_in(x, side_a) && fc.lies_in(z, side_b);
  bool swapped = fc.lies_in(x, side_b) && fc.lies_in(z, side_a);
  if (!direct && !swapped) throw std::invalid_argument("horizontal_slide: y's wall is not adjacent to both x and z");
  const PieceCopy& a = direct ? side_a : side_b;
  const PieceCopy& b = direct ? side_b : side_a;

  PointCoord ya = fc.express_in(y, a);
  PointCoord xa = fc.express_in(x, a);
  const WallRef& wall = std::get<LinePos>(ya.base).wall;
  Rational foot = fc.project_to_line(a.piece, xa.base, wall).foot.s;
  PointCoord w = fc.canonical(PointCoord{a, LinePos{wall, foot}, ya.fiber});

  Rational before = exact_l1(fc, a, x, y) + exact_l1(fc, b, y, z);
  Rational after = exact_l1(fc, a, x, w) + exact_l1(fc, b, w, z);
  return {w, after - before};
}

std::pair<PointCoord, PointCoord> random_pair(const FlipComplex& fc, Rng& rng, int max_walls) {
  std::uniform_int_distribution<int> d0(0, 2), d1(0, max_walls);
  PieceCopy a = random_copy(fc, rng, d0(rng), fc.root());
  PieceCopy b = random_copy(fc, rng, d1(rng), a);
  PointCoord x = random_point(fc, a, rng);
  PointCoord y = random_point(fc, b, rng);
  return {x, y};
}

PairSample measure_pair(const FlipComplex& fc, const PointCoord& x, const PointCoord& y, double rho,
                        const OracleOptions& opt) {
  PairSample s;
  s.x = fc.canonical(x);
  s.y = fc.canonical(y);
  SpecialPath path = special_path(fc, s.x, s.y);
  s.walls = static_cast<int>(path.walls.size());
  s.length_l1 = path_length(fc, path, Metric::L1);
  s.length_l2 = path_length(fc, path, Metric::L2);
  s.oracle = approx_distance(fc, s.x, s.y, opt);
  s.lower_bound = distance_lower_bound(fc, s.x, s.y, rho);
  return s;
}

double fit_kappa(const std::vector<PairSample>& rows, std::size_t n) {
  double kappa = 1;
  for (std::size_t i = 0; i < std::min(n, rows.size()); ++i)
    kappa = std::max(kappa, rows[i].length_l1 / (rows[i].oracle + 1));
  return kappa;
}

QGReport qg_fit(const FlipComplex& fc, std::size_t samples, int max_walls, double resolution, std::uint64_t seed,
                double rho) {
  if (samples < 1) throw std::invalid_argument("qg_fit needs at least one sample");
  OracleOptions opt;
  opt.resolution = resolution;
  opt.max_walls = std::max(opt.max_walls, max_walls);
  QGReport rep;
  rep.samples = samples;
  rep.metric = Metric::L1;
  rep.rows.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    auto [x, y] = random_pair(fc, rng, max_walls);
    rep.rows[i] = measure_pair(fc, x, y, rho, opt);
  });
  rep.kappa = fit_kappa(rep.rows, samples);
  for (const auto& r : rep.rows)
    if (r.oracle > 1e-9) rep.worst_ratio = std::max(rep.worst_ratio, r.length_l1 / r.oracle);
  return rep;
}

}  // namespace qclab
