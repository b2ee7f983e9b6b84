// Discretized distance oracle across a chain of walls.
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qclab/special_paths.hpp"

namespace qclab {

double PointLineGap::operator()(double s) const { return c0 + std::abs(s - foot); }

double LineLineGap::operator()(double u, double v) const {
  double cu = std::clamp(u, a_lo, a_hi);
  double cv = std::clamp(v, b_lo, b_hi);
  double back = a_lo + sigma * (cv - b_at_lo);
  return base + std::abs(u - cu) + std::abs(v - cv) + std::abs(cu - back);
}

PointLineGap point_line_gap(const FlipComplex& fc, int piece, const BasePos& p, const WallRef& line) {
  Projection pr = fc.project_to_line(piece, p, line);
  return {pr.dist.to_double(), pr.foot.s.to_double()};
}

LineLineGap line_line_gap(const FlipComplex& fc, int piece, const WallRef& e, const WallRef& x) {
  const auto& ps = fc.piece(piece);
  LineLineGap g;
  if (auto ov = fc.axis_overlap(piece, e, x)) {
    Rational lo = Rational(ov->first) * ps.base_scale;
    Rational hi = Rational(ov->second) * ps.base_scale;
    auto at = [&](const Rational& s) {
      auto c = fc.axis_coordinate(piece, fc.axis_point(piece, e, s), x);
      if (!c) throw ConsistencyError("overlap endpoint is off the second axis");
      return c->to_double();
    };
    double blo = at(lo), bhi = at(hi);
    g.base = (ps.collar_width * Rational(2)).to_double();
    g.a_lo = lo.to_double();
    g.a_hi = hi.to_double();
    g.b_at_lo = blo;
    g.b_lo = std::min(blo, bhi);
    g.b_hi = std::max(blo, bhi);
    g.sigma = bhi >= blo ? 1 : -1;
    return g;
  }
  Bridge b = fc.line_to_line_bridge(piece, e, x);
  g.base = b.length.to_double();
  g.a_lo = g.a_hi = b.p.s.to_double();
  g.b_at_lo = g.b_lo = g.b_hi = b.q.s.to_double();
  return g;
}

namespace {

// Wall i carries coordinates z_i = (s_i, t_i) in the frame of the copy it
// leaves. Crossing maps them to (t_i + alpha_i, s_i + beta_i).
struct Chain {
  std::size_t n = 0;
  PointLineGap first;
  double fx = 0;
  std::vector<LineLineGap> mid;  // mid[i] for segment i, 1 <= i < n
  PointLineGap last;
  double fy = 0;
  std::vector<double> alpha, beta;

  static double len(double db, double df) { return std::hypot(db, df); }

  double seg_first(double s, double t) const { return len(first(s), t - fx); }
  double seg_mid(std::size_t i, double sp, double tp, double s, double t) const {
    return len(mid[i](tp + alpha[i - 1], s), sp + beta[i - 1] - t);
  }
  double seg_last(double sp, double tp) const { return len(last(tp + alpha[n - 1]), sp + beta[n - 1] - fy); }

  double local(const std::vector<double>& z, std::size_t i, double s, double t) const {
    double c = i == 0 ? seg_first(s, t) : seg_mid(i, z[2 * i - 2], z[2 * i - 1], s, t);
    c += i + 1 == n ? seg_last(s, t) : seg_mid(i + 1, s, t, z[2 * i + 2], z[2 * i + 3]);
    return c;
  }

  double total(const std::vector<double>& z) const {
    double c = seg_first(z[0], z[1]);
    for (std::size_t i = 1; i < n; ++i) c += seg_mid(i, z[2 * i - 2], z[2 * i - 1], z[2 * i], z[2 * i + 1]);
    return c + seg_last(z[2 * n - 2], z[2 * n - 1]);
  }
};

template <class F>
double golden(F&& f, double lo, double hi, int iters) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int k = 0; k < iters; ++k) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return fa <= fb ? a : b;
}

void descend(const Chain& ch, std::vector<double>& z) {
  constexpr int kIters = 48;
  Rng rng(0x5eed);
  std::normal_distribution<double> normal;
  double cur = ch.total(z);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double start = cur;
    double span = 2 * cur + 1;
    for (std::size_t i = 0; i < ch.n; ++i) {
      double s0 = z[2 * i], t0 = z[2 * i + 1];
      auto best_t = [&](double s) {
        return golden([&](double t) { return ch.local(z, i, s, t); }, t0 - span, t0 + span, kIters);
      };
      double s = golden([&](double s) { return ch.local(z, i, s, best_t(s)); }, s0 - span, s0 + span, kIters);
      double t = best_t(s);
      if (ch.local(z, i, s, t) < ch.local(z, i, s0, t0)) {
        z[2 * i] = s;
        z[2 * i + 1] = t;
      }
    }
    // Joint moves escape the kinks where single-wall moves stall.
    std::vector<double> dir(z.size()), trial(z.size());
    for (std::size_t r = 0; r < 2 * ch.n; ++r) {
      for (auto& d : dir) d = normal(rng);
      auto along = [&](double h) {
        for (std::size_t k = 0; k < z.size(); ++k) trial[k] = z[k] + h * dir[k];
        return ch.total(trial);
      };
      double h = golden(along, -span / 4, span / 4, kIters);
      if (along(h) < ch.total(z)) z = trial;
    }
    cur = ch.total(z);
    if (start - cur < 1e-12) break;
  }
}

std::vector<double> grid(double centre, double window, double r) {
  std::vector<double> out;
  long long lo = static_cast<long long>(std::ceil((centre - window) / r));
  long long hi = static_cast<long long>(std::floor((centre + window) / r));
  for (long long k = lo; k <= hi; ++k) out.push_back(static_cast<double>(k) * r);
  out.push_back(centre);
  return out;
}

}  // namespace

double approx_distance(const FlipComplex& fc, const PointCoord& x0, const PointCoord& y0, const OracleOptions& opt) {
  if (!(opt.resolution > 0)) throw std::invalid_argument("resolution must be positive");
  PointCoord x = fc.canonical(x0), y = fc.canonical(y0);
  SpecialPath path = special_path(fc, x, y);
  const std::size_t n = path.walls.size();
  if (n == 0) return path_length(fc, path, Metric::L2);
  if (static_cast<int>(n) > opt.max_walls)
    throw OracleBudgetError("oracle budget exceeded: " + std::to_string(n) + " walls > " +
                            std::to_string(opt.max_walls));

  Chain ch;
  ch.n = n;
  PointCoord tmp;
  const PieceCopy& m0 = path.copies.front();
  tmp = fc.express_in(x, m0);
  ch.first = point_line_gap(fc, m0.piece, tmp.base, path.walls[0].wall_from);
  ch.fx = tmp.fiber.to_double();
  const PieceCopy& mn = path.copies.back();
  tmp = fc.express_in(y, mn);
  ch.last = point_line_gap(fc, mn.piece, tmp.base, path.walls[n - 1].wall_to);
  ch.fy = tmp.fiber.to_double();
  ch.mid.resize(n);
  for (std::size_t i = 1; i < n; ++i)
    ch.mid[i] = line_line_gap(fc, path.copies[i].piece, path.walls[i - 1].wall_to, path.walls[i].wall_from);
  std::vector<double> z(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const GluingEnd& end = fc.gluing_end(path.copies[i].piece, path.walls[i].wall_from.cycle);
    ch.alpha.push_back(end.alpha.to_double());
    ch.beta.push_back(end.beta.to_double());
    PointCoord b = fc.express_in(path.breakpoints[i + 1], path.copies[i]);
    z[2 * i] = std::get<LinePos>(b.base).s.to_double();
    z[2 * i + 1] = b.fiber.to_double();
  }
  descend(ch, z);

  struct Node {
    double s, t;
  };
  std::vector<std::vector<Node>> layers(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ss = grid(z[2 * i], opt.window, opt.resolution);
    auto ts = grid(z[2 * i + 1], opt.window, opt.resolution);
    if (ss.size() * ts.size() > opt.max_nodes_per_wall)
      throw OracleBudgetError("oracle budget exceeded: " + std::to_string(ss.size() * ts.size()) +
                              " grid nodes on one wall");
    for (double s : ss)
      for (double t : ts) layers[i].push_back({s, t});
  }
  std::vector<double> dist(layers[0].size());
  for (std::size_t a = 0; a < dist.size(); ++a) dist[a] = ch.seg_first(layers[0][a].s, layers[0][a].t);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<double> next(layers[i].size(), std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b < next.size(); ++b) {
      const Node& nb = layers[i][b];
      for (std::size_t a = 0; a < dist.size(); ++a) {
        const Node& na = layers[i - 1][a];
        next[b] = std::min(next[b], dist[a] + ch.seg_mid(i, na.s, na.t, nb.s, nb.t));
      }
    }
    dist.swap(next);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dist.size(); ++a)
    best = std::min(best, dist[a] + ch.seg_last(layers[n - 1][a].s, layers[n - 1][a].t));
  return best;
}

}  // namespace qclab
