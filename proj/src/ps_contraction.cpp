#include "qclab/ps_contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OracleOptions far_oracle() {
  OracleOptions opt;
  opt.resolution = 0.1;
  opt.max_walls = 64;
  return opt;
}

double in_copy_distance(const FlipComplex& fc, const PieceCopy& copy, const PointCoord& a, const PointCoord& b) {
  PointCoord aa = fc.express_in(a, copy), bb = fc.express_in(b, copy);
  double db = fc.base_distance(copy.piece, aa.base, bb.base).to_double();
  return std::hypot(db, (aa.fiber - bb.fiber).to_double());
}

int add_point(Slice& s, const PointCoord& p) {
  for (std::size_t i = 0; i < s.points.size(); ++i)
    if (s.points[i] == p) return static_cast<int>(i);
  s.points.push_back(p);
  return static_cast<int>(s.points.size()) - 1;
}

void finish_slice(const FlipComplex& fc, Slice& s) {
  double best = kInf;
  for (const auto& c : s.points) {
    double far = 0;
    for (const auto& p : s.points) {
      double d = in_copy_distance(fc, s.copy, c, p);
      far = std::max(far, d);
      s.diameter = std::max(s.diameter, d);
    }
    if (far < best) {
      best = far;
      s.center = c;
    }
  }
  s.radius = best;
}

std::size_t nearest_slice(const FlipComplex& fc, const SubsetModel& a, const PointCoord& x) {
  std::size_t best = 0;
  int best_d = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < a.subtree.size(); ++i) {
    int d = fc.lies_in(x, a.subtree[i]) ? 0 : fc.dual_distance(x.copy, a.subtree[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// The plane's wall as seen from one of its two copies.
WallRef plane_ref(const FlipComplex& fc, const WallId& plane, const PieceCopy& side) {
  if (side == plane.owner) return plane.ref;
  return fc.cross(plane.owner, plane.ref).wall_to;
}

// Tree point of `side` about `depth` edges away from the plane's line.
TreePos point_off_line(const FlipComplex& fc, const PieceCopy& side, const WallRef& line, const Rational& s, int depth,
                       Rng& rng) {
  const auto& sp = fc.piece(side.piece).spine;
  TreePos p = fc.axis_point(side.piece, line, s);
  p.offset = 0;
  p.edge = DirEdge{};
  Rational dist = fc.project_to_line(side.piece, p, line).dist;
  for (int step = 0; step < depth; ++step) {
    int v = sp.walk_end(0, p.walk);
    std::vector<TreePos> options;
    for (int e = 0; e < sp.edge_count(); ++e)
      for (bool inv : {false, true}) {
        DirEdge d{e, inv};
        if (sp.tail(d) != v) continue;
        TreePos q = p;
        q.walk.push_back(d);
        q.walk = reduce(q.walk);
        if (fc.project_to_line(side.piece, q, line).dist > dist) options.push_back(q);
      }
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    p = options[pick(rng)];
    dist = fc.project_to_line(side.piece, p, line).dist;
  }
  return p;
}

// Pairwise oracle distances between slice centers.
class CenterDistances {
 public:
  CenterDistances(const FlipComplex& fc, const SubsetModel& a) : fc_(fc), a_(a) {
    std::size_t n = a.slices.size();
    d_.assign(n, std::vector<double>(n, -1));
    parallel_for(n * n, [&](std::size_t k) {
      std::size_t i = k / n, j = k % n;
      if (i < j) d_[i][j] = approx_distance(fc_, a_.slices[i].center, a_.slices[j].center, far_oracle());
    });
    for (std::size_t i = 0; i < n; ++i) {
      d_[i][i] = 0;
      for (std::size_t j = 0; j < i; ++j) d_[i][j] = d_[j][i];
    }
  }
  double operator()(std::size_t i, std::size_t j) const { return d_[i][j]; }

 private:
  const FlipComplex& fc_;
  const SubsetModel& a_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

int SubsetModel::slice_index(const PieceCopy& copy) const {
  for (std::size_t i = 0; i < subtree.size(); ++i)
    if (subtree[i] == copy) return static_cast<int>(i);
  return -1;
}

SubsetModel subset_from_morse(const GraphOfGroups& g, const GroupWord& word, const PointCoord& basepoint,
                              int steps) {
  if (steps < 1) throw std::invalid_argument("subset_from_morse: steps must be >= 1");
  if (!g.is_morse(word))
    throw std::invalid_argument("subset_from_morse: element is conjugate into a vertex group (not Morse)");
  const FlipComplex& fc = g.complex();
  std::vector<PointCoord> orbit;
  for (int i = -steps; i <= steps + 1; ++i) orbit.push_back(g.act_on_point(g.power(word, i), basepoint));

  SubsetModel a;
  a.policy = ProjectionPolicy::SliceCenter;
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    SpecialPath path = special_path(fc, orbit[i], orbit[i + 1]);
    for (std::size_t k = 0; k < path.copies.size(); ++k) {
      int idx = a.slice_index(path.copies[k]);
      if (idx < 0) {
        a.subtree.push_back(path.copies[k]);
        a.slices.push_back(Slice{path.copies[k], {}, 0, 0, {}, {}});
        idx = static_cast<int>(a.slices.size()) - 1;
      }
      Slice& s = a.slices[idx];
      int p = add_point(s, path.breakpoints[k]);
      int q = add_point(s, path.breakpoints[k + 1]);
      if (p != q) s.segments.emplace_back(p, q);
    }
  }
  for (auto& s : a.slices) {
    finish_slice(fc, s);
    a.delta = std::max(a.delta, s.diameter);
  }
  for (std::size_t i = 0; i < a.slices.size(); ++i)
    for (std::size_t j = i + 1; j < a.slices.size(); ++j) {
      if (fc.dual_distance(a.subtree[i], a.subtree[j]) != 1) continue;
      a.step = std::max(a.step, approx_distance(fc, a.slices[i].center, a.slices[j].center, far_oracle()));
      auto walls = fc.dual_tree_geodesic(a.subtree[i], a.subtree[j]);
      WallDisc disc{WallId{a.subtree[i], walls.front().wall_from}, {}, 0};
      std::vector<PointCoord> on;
      for (const auto& p : a.slices[i].points)
        if (fc.lies_in(p, a.subtree[j])) on.push_back(p);
      if (on.empty()) continue;
      disc.center = on.front();
      for (const auto& p : on) disc.radius = std::max(disc.radius, in_copy_distance(fc, a.subtree[i], on.front(), p));
      a.wall_discs.push_back(disc);
    }
  return a;
}

SubsetModel subset_wall_plane(const FlipComplex& fc, const WallId& wall, double extent) {
  if (!(extent > 0)) throw std::invalid_argument("subset_wall_plane: extent must be positive");
  SubsetModel a;
  a.policy = ProjectionPolicy::NearestPoint;
  a.plane = wall;
  a.extent = extent;
  PieceCopy other = fc.cross(wall.owner, wall.ref).to;
  a.subtree = {wall.owner, other};
  Rational e(static_cast<std::int64_t>(std::floor(extent * 64)), 64);
  for (const auto& side : a.subtree) {
    Slice s{side, fc.wall_point(wall, Rational(0), Rational(0)), 0, 0, {}, {}};
    for (int sx : {-1, 1})
      for (int tx : {-1, 1}) s.points.push_back(fc.wall_point(wall, e * Rational(sx), e * Rational(tx)));
    s.diameter = 2 * std::sqrt(2.0) * e.to_double();
    s.radius = s.diameter / 2;
    a.slices.push_back(s);
  }
  a.delta = a.slices.front().diameter;
  a.wall_discs.push_back(WallDisc{wall, a.slices.front().center, a.slices.front().radius});
  return a;
}

double contraction_constant(const SubsetModel& a) { return 10 * a.delta + a.step; }

PointCoord ps_projection(const FlipComplex& fc, const PointCoord& x0, const SubsetModel& a) {
  if (a.subtree.empty()) throw std::invalid_argument("ps_projection: empty subset");
  PointCoord x = fc.canonical(x0);
  std::size_t idx = nearest_slice(fc, a, x);
  if (a.policy == ProjectionPolicy::SliceCenter) return a.slices[idx].center;
  const PieceCopy& side = a.subtree[idx];
  PointCoord xs;
  if (fc.lies_in(x, side)) {
    xs = fc.express_in(x, side);
  } else {
    SpecialPath path = special_path(fc, x, a.slices[idx].center);
    auto it = std::find_if(path.breakpoints.begin(), path.breakpoints.end(),
                           [&](const PointCoord& p) { return fc.lies_in(p, side); });
    xs = fc.express_in(*it, side);
  }
  WallRef line = plane_ref(fc, *a.plane, side);
  LinePos foot = fc.project_to_line(side.piece, xs.base, line).foot;
  return fc.canonical(PointCoord{side, foot, xs.fiber});
}

double distance_to_segment(const FlipComplex& fc, const PieceCopy& copy, const PointCoord& p0, const PointCoord& a0,
                           const PointCoord& b0) {
  PointCoord p = fc.express_in(p0, copy), a = fc.express_in(a0, copy), b = fc.express_in(b0, copy);
  double len = fc.base_distance(copy.piece, a.base, b.base).to_double();
  double da = fc.base_distance(copy.piece, p.base, a.base).to_double();
  double db = fc.base_distance(copy.piece, p.base, b.base).to_double();
  // Gromov products place p's foot on the base geodesic.
  double foot = (len + da - db) / 2;
  double height = std::max(0.0, (da + db - len) / 2);
  double fa = a.fiber.to_double(), fb = b.fiber.to_double(), fp = p.fiber.to_double();
  auto at = [&](double tau) { return std::hypot(height + std::abs(tau * len - foot), fp - fa - tau * (fb - fa)); };
  double lo = 0, hi = 1;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int k = 0; k < 80; ++k) {
    double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (at(m1) <= at(m2)) hi = m2;
    else lo = m1;
  }
  return std::min({at(0), at(1), at((lo + hi) / 2)});
}

double distance_to_path(const FlipComplex& fc, const PointCoord& p, const SpecialPath& path) {
  double best = kInf;
  for (std::size_t k = 0; k + 1 < path.breakpoints.size(); ++k)
    if (fc.lies_in(p, path.copies[k]))
      best = std::min(best, distance_to_segment(fc, path.copies[k], p, path.breakpoints[k], path.breakpoints[k + 1]));
  if (best < kInf) return best;
  for (const auto& bp : path.breakpoints) best = std::min(best, approx_distance(fc, p, bp, far_oracle()));
  return best;
}

double distance_to_subset(const FlipComplex& fc, const PointCoord& p0, const SubsetModel& a) {
  PointCoord p = fc.canonical(p0);
  if (a.policy == ProjectionPolicy::NearestPoint) return approx_distance(fc, p, ps_projection(fc, p, a), far_oracle());
  double best = kInf;
  for (const auto& s : a.slices) {
    if (!fc.lies_in(p, s.copy)) continue;
    for (const auto& [i, j] : s.segments)
      best = std::min(best, distance_to_segment(fc, s.copy, p, s.points[i], s.points[j]));
  }
  if (best < kInf) return best;
  const Slice& s = a.slices[nearest_slice(fc, a, p)];
  for (const auto& q : s.points) best = std::min(best, approx_distance(fc, p, q, far_oracle()));
  return best;
}

std::pair<PointCoord, PointCoord> sample_pair_near(const FlipComplex& fc, const SubsetModel& a, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (a.policy == ProjectionPolicy::NearestPoint) {
    const WallId& wall = *a.plane;
    Rational e = Rational(static_cast<std::int64_t>(std::floor(a.extent * 64)), 64);
    auto draw = [&] {
      const PieceCopy& side = a.subtree[coin(rng) < 0.5 ? 0 : 1];
      WallRef line = plane_ref(fc, wall, side);
      double scale = fc.piece(side.piece).base_scale.to_double();
      std::uniform_int_distribution<int> depth(0, static_cast<int>(std::ceil(2 * a.extent / scale)));
      Rational s = random_rational(rng, -e, e);
      TreePos b = point_off_line(fc, side, line, s, depth(rng), rng);
      return fc.canonical(PointCoord{side, b, random_rational(rng, -e, e)});
    };
    PointCoord x = draw();
    if (coin(rng) < 0.5) {
      PointCoord y = x;
      y.fiber = random_rational(rng, -e, e);
      return {x, y};
    }
    return {x, draw()};
  }
  std::uniform_int_distribution<std::size_t> pick(0, a.subtree.size() - 1);
  std::uniform_int_distribution<int> depth(0, 2);
  auto draw = [&] {
    PieceCopy c = random_copy(fc, rng, depth(rng), a.subtree[pick(rng)]);
    return random_point(fc, c, rng);
  };
  PointCoord x = draw();
  if (coin(rng) < 0.25) {
    PointCoord y = x;
    y.fiber = y.fiber + random_rational(rng, Rational(-4), Rational(4));
    return {x, fc.canonical(y)};
  }
  return {x, draw()};
}

ContractionReport check_contracting(const FlipComplex& fc, const SubsetModel& a, double C, std::size_t samples,
                                    std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_contracting needs at least one sample");
  ContractionReport rep;
  rep.samples = samples;
  rep.seed = seed;
  std::optional<CenterDistances> centers;
  if (a.policy == ProjectionPolicy::SliceCenter) centers.emplace(fc, a);

  struct Outcome {
    double own = 0;  // condition (1)
    bool triggered = false;
    double dx = 0, dy = 0, dpp = 0;
    PointCoord x, y, px, py, member;
  };
  std::vector<Outcome> out(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    Outcome& o = out[i];
    // Condition (1) on a point of the subset.
    std::uniform_int_distribution<std::size_t> pick(0, a.slices.size() - 1);
    const Slice& s = a.slices[pick(rng)];
    std::uniform_int_distribution<std::size_t> pp(0, s.points.size() - 1);
    o.member = s.points[pp(rng)];
    o.own = approx_distance(fc, o.member, ps_projection(fc, o.member, a), far_oracle());

    auto [x, y] = sample_pair_near(fc, a, rng);
    o.x = x;
    o.y = y;
    o.px = ps_projection(fc, x, a);
    o.py = ps_projection(fc, y, a);
    o.dpp = centers ? (*centers)(nearest_slice(fc, a, x), nearest_slice(fc, a, y))
                    : approx_distance(fc, o.px, o.py, far_oracle());
    if (o.dpp < C) return;
    o.triggered = true;
    SpecialPath path = special_path(fc, x, y);
    o.dx = distance_to_path(fc, o.px, path);
    o.dy = distance_to_path(fc, o.py, path);
  });

  for (std::size_t i = 0; i < samples; ++i) {
    const Outcome& o = out[i];
    rep.measuredC = std::max(rep.measuredC, o.own);
    if (o.own > C && !rep.witness)
      rep.witness = ContractionWitness{i, o.member, o.member, o.member, o.member, 0, o.own, "d(x, pi(x)) > C"};
    if (!o.triggered) continue;
    ++rep.triggered;
    rep.measuredC = std::max({rep.measuredC, o.dx, o.dy});
    if ((o.dx > C || o.dy > C) && !rep.witness)
      rep.witness = ContractionWitness{i,    o.x,  o.y, o.px, o.py, o.dpp, std::max(o.dx, o.dy),
                                       o.dx > C ? "d(pi(x), path) > C" : "d(pi(y), path) > C"};
  }
  rep.passed = !rep.witness.has_value();
  rep.vacuous = rep.triggered == 0;
  return rep;
}

BallReport ball_projection_check(const FlipComplex& fc, const SubsetModel& a, const ContractionParams& params,
                                 std::size_t samples, std::uint64_t seed) {
  BallReport rep;
  rep.samples = samples;
  struct Outcome {
    double k = 0;
    bool ok = true;
    bool skipped = false;
    double diameter = 0;
  };
  std::vector<Outcome> out(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    Outcome& o = out[i];
    PointCoord x = sample_pair_near(fc, a, rng).first;
    double dA = distance_to_subset(fc, x, a);
    PointCoord px = ps_projection(fc, x, a);
    double dxp = approx_distance(fc, x, px, far_oracle());
    o.k = dxp / (dA + 1);
    if (dxp > params.k * dA + params.k) o.ok = false;
    double r = dA / params.k - params.k;
    if (r <= 0) {
      o.skipped = true;
      return;
    }
    std::vector<PointCoord> images{px};
    for (int tries = 0; tries < 40 && images.size() < 9; ++tries) {
      PointCoord p = random_point(fc, x.copy, rng);
      if (!fc.lies_in(p, x.copy) || in_copy_distance(fc, x.copy, x, p) > r) continue;
      images.push_back(ps_projection(fc, p, a));
    }
    for (std::size_t u = 0; u < images.size(); ++u)
      for (std::size_t v = u + 1; v < images.size(); ++v)
        if (!(images[u] == images[v]))
          o.diameter = std::max(o.diameter, approx_distance(fc, images[u], images[v], far_oracle()));
    if (o.diameter > params.C) o.ok = false;
  });
  for (const auto& o : out) {
    rep.k_needed = std::max(rep.k_needed, o.k);
    rep.max_projection_diameter = std::max(rep.max_projection_diameter, o.diameter);
    if (o.skipped) ++rep.skipped;
    if (!o.ok) rep.passed = false;
  }
  return rep;
}

QuasiconvexityReport quasiconvexity_radius(const FlipComplex& fc, const SubsetModel& a, double lambda,
                                           const ContractionParams& params, std::size_t samples,
                                           std::uint64_t seed) {
  if (lambda < 1) throw std::invalid_argument("quasiconvexity_radius: lambda must be >= 1");
  ContractionParams p = params;
  p.cbar = std::max(params.k, lambda);
  QuasiconvexityReport rep;
  rep.bound = 4 * p.cbar * p.cbar * (p.R() + 2);

  struct Outcome {
    bool certified = false;
    double measured = 0;
  };
  std::vector<Outcome> out(samples);
  Rational cap = Rational(static_cast<std::int64_t>(std::floor(lambda * a.delta * 64)), 64);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, a.slices.size() - 1);
    const Slice& s1 = a.slices[pick(rng)];
    const Slice& s2 = a.slices[pick(rng)];
    std::uniform_int_distribution<std::size_t> p1(0, s1.points.size() - 1), p2(0, s2.points.size() - 1);
    SpecialPath path = special_path(fc, s1.points[p1(rng)], s2.points[p2(rng)]);
    std::vector<PointCoord> pts = path.breakpoints;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
      if (coin(rng) < 0.5) continue;
      PointCoord q = fc.express_in(pts[j], path.copies[j - 1]);
      std::get<LinePos>(q.base).s += random_rational(rng, -cap, cap);
      q.fiber += random_rational(rng, -cap, cap);
      pts[j] = fc.canonical(q);
    }
    std::vector<double> prefix{0};
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
      prefix.push_back(prefix.back() + in_copy_distance(fc, path.copies[j], pts[j], pts[j + 1]));
    for (std::size_t u = 0; u < pts.size(); ++u)
      for (std::size_t v = u + 1; v < pts.size(); ++v) {
        double d = approx_distance(fc, pts[u], pts[v], far_oracle());
        if (prefix[v] - prefix[u] > lambda * d + lambda) return;
      }
    Outcome& o = out[i];
    o.certified = true;
    for (const auto& q : pts) o.measured = std::max(o.measured, distance_to_subset(fc, q, a));
  });
  for (const auto& o : out) {
    if (!o.certified) {
      ++rep.discarded;
      continue;
    }
    ++rep.certified;
    rep.measured = std::max(rep.measured, o.measured);
  }
  return rep;
}

}  // namespace qclab
