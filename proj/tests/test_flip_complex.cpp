#include <doctest.h>

#include <cmath>
#include <set>

#include "qclab/flip_complex.hpp"
#include "qclab/sampling.hpp"
#include "test_support.hpp"

using namespace qclab;
using qclab::test::load;
using qclab::test::wedge_spec;

namespace {

// Free-group distance |u^-1 v| after reduction.
long oracle_distance(const Walk& u, const Walk& v) {
  Walk w = inverse(u);
  w.insert(w.end(), v.begin(), v.end());
  return static_cast<long>(reduce(w).size());
}

// Axis vertices rep·c^j·(prefix of c), |j| <= span.
std::vector<Walk> oracle_axis(const Walk& rep, const Walk& c, int span) {
  std::vector<Walk> out;
  for (int j = -span; j <= span; ++j) {
    Walk base = rep;
    for (int k = 0; k < std::abs(j); ++k) {
      Walk step = j > 0 ? c : inverse(c);
      base.insert(base.end(), step.begin(), step.end());
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      Walk w = base;
      w.insert(w.end(), c.begin(), c.begin() + static_cast<long>(i));
      out.push_back(reduce(w));
    }
  }
  return out;
}

std::string message_of(const std::string& text) {
  try {
    load_spec(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("load_spec accepts the two-wedge reference spec") {
  auto spec = load_spec_file(test::data_path("two_wedge.json"));
  REQUIRE(spec.pieces.size() == 2);
  CHECK(spec.pieces[0].spine.betti_number() == 2);
  // cycle length 4 * 1/4 equals partner fiber period 1
  CHECK(spec.pieces[0].base_scale * Rational(4) == spec.pieces[1].fiber_period);
  CHECK(load_spec(dump_spec(spec)).pieces.size() == 2);
}

TEST_CASE("load_spec diagnostics") {
  auto bad = message_of(R"({"pieces": [{"spine": {"vertices": 1, "edges": [[0,0,"a"]]},
      "boundary_cycles": [["a"]], "base_scale": "1", "fiber_period": "1"},
      {"spine": {"vertices": 1, "edges": [[0,0,"c"],[0,0,"d"]]},
      "boundary_cycles": [["c","d","c^-1","d^-1"]], "base_scale": "1/4", "fiber_period": "1"}],
      "gluings": [{"from": [0,0], "to": [1,0]}]})");
  CHECK(bad.find("Betti number < 2") != std::string::npos);

  auto unmatched = message_of(R"({"pieces": [{"spine": {"vertices": 1, "edges": [[0,0,"a"],[0,0,"b"]]},
      "boundary_cycles": [["a","b","a^-1","b^-1"]], "base_scale": "1/4", "fiber_period": "1"}],
      "gluings": []})");
  CHECK(unmatched.find("unmatched cycle") != std::string::npos);

  auto flip = message_of(wedge_spec("1/4", "2", "1/16"));
  CHECK(flip.find("flip-compatibility violation in gluing 0") != std::string::npos);
  CHECK(flip.find("1 != partner fiber period 2") != std::string::npos);

  CHECK(message_of("{not json").find("parse error") != std::string::npos);
  // commutator axes share edges, so lines need a collar
  CHECK(message_of(wedge_spec("1/4", "1", "0")).find("collar_width") != std::string::npos);
}

TEST_CASE("base_distance examples") {
  FlipComplex unit(load_spec(wedge_spec("1", "4", "1/4")));
  const auto& sp = unit.piece(0).spine;
  TreePos ab{sp.parse_walk("a b"), {}, Rational(0)};
  TreePos binv{sp.parse_walk("b^-1"), {}, Rational(0)};
  CHECK(unit.base_distance(0, ab, binv) == Rational(oracle_distance(ab.walk, binv.walk)));
  CHECK(unit.base_distance(0, ab, binv) == Rational(3));
  CHECK(unit.base_distance(0, ab, ab) == Rational(0));

  auto fc = load("two_wedge.json");
  TreePos o{{}, {}, Rational(0)};
  TreePos a{sp.parse_walk("a"), {}, Rational(0)};
  CHECK(fc.base_distance(0, o, a) == Rational(1, 4));
}

TEST_CASE("tree metric axioms on sampled triples") {
  auto fc = load("two_wedge.json");
  Rng rng = make_rng(11, 0);
  for (int i = 0; i < 400; ++i) {
    auto x = random_point(fc, fc.root(), rng, 4, 0.3);
    auto y = random_point(fc, fc.root(), rng, 4, 0.3);
    auto z = random_point(fc, fc.root(), rng, 4, 0.3);
    if (!(x.copy == fc.root() && y.copy == fc.root() && z.copy == fc.root())) continue;
    Rational dxy = fc.base_distance(0, x.base, y.base), dyx = fc.base_distance(0, y.base, x.base);
    CHECK(dxy == dyx);
    CHECK((dxy.is_zero()) == (x.base == y.base));
    CHECK(fc.base_distance(0, x.base, z.base) <= dxy + fc.base_distance(0, y.base, z.base));
  }
}

TEST_CASE("project_to_line: nearest point and exactness identity") {
  FlipComplex unit(load_spec(wedge_spec("1", "4", "1/4")));
  const auto& sp = unit.piece(0).spine;
  const Walk& c = unit.piece(0).boundary_cycles[0];
  WallRef w = unit.entry_rep(0, 0);
  const Rational eps = unit.piece(0).collar_width;

  // one edge off the axis: foot is an axis vertex, distance one edge plus the collar
  TreePos off{sp.parse_walk("b^-1"), {}, Rational(0)};
  auto pr = unit.project_to_line(0, off, w);
  CHECK(pr.dist == Rational(1) + eps);
  long best = 1000;
  for (const auto& v : oracle_axis(w.rep, c, 3)) best = std::min(best, oracle_distance(off.walk, v));
  CHECK(pr.dist == Rational(best) + eps);
  CHECK(unit.axis_coordinate(0, unit.axis_point(0, w, pr.foot.s), w).has_value());

  LinePos on{w, Rational(3, 2)};
  CHECK(unit.project_to_line(0, on, w).dist == Rational(0));

  auto fc = load("two_wedge.json");
  Rng rng = make_rng(5, 1);
  for (int i = 0; i < 300; ++i) {
    TreePos p{random_walk(fc.piece(0).spine, rng, 4), {}, Rational(0)};
    WallRef wall = random_exit_wall(fc, fc.root(), rng);
    auto f = fc.project_to_line(0, p, wall);
    LinePos q{wall, random_rational(rng, Rational(-3), Rational(3))};
    CHECK(fc.base_distance(0, p, q) == f.dist + fc.base_distance(0, f.foot, q));
    // deck translation commutes with projection
    Walk u = random_walk(fc.piece(0).spine, rng, 3);
    auto tp = std::get<TreePos>(fc.translate(0, u, p));
    auto tw = std::get<LinePos>(fc.translate(0, u, LinePos{wall, Rational(0)}));
    auto g = fc.project_to_line(0, tp, tw.wall);
    CHECK(g.dist == f.dist);
    CHECK(fc.translate(0, u, f.foot) == BasePos{g.foot});
  }
}

TEST_CASE("line_to_line_bridge matches exhaustive search") {
  FlipComplex unit(load_spec(wedge_spec("1", "4", "1/4")));
  const Walk& c = unit.piece(0).boundary_cycles[0];
  const auto& sp = unit.piece(0).spine;
  std::set<WallRef> walls;
  for (const auto& w : sp.reduced_walks(0, 3)) {
    auto r = unit.canonical_wall(0, 0, w);
    if (r.rep.size() <= 3) walls.insert(r);
  }
  std::vector<WallRef> ws(walls.begin(), walls.end());
  bool saw_two = false;
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      auto br = unit.line_to_line_bridge(0, ws[i], ws[j]);
      long best = 1000;
      auto ai = oracle_axis(ws[i].rep, c, 4), aj = oracle_axis(ws[j].rep, c, 4);
      for (const auto& u : ai)
        for (const auto& v : aj) best = std::min(best, oracle_distance(u, v));
      CHECK(br.length == Rational(best) + Rational(1, 2));
      saw_two = saw_two || best == 2;
      CHECK(unit.base_distance(0, br.p, br.q) == br.length);
      auto rev = unit.line_to_line_bridge(0, ws[j], ws[i]);
      CHECK(rev.length == br.length);
    }
  CHECK(saw_two);
}

TEST_CASE("wall coordinates and flip involution") {
  auto fc = load("two_wedge.json");
  WallId w{fc.root(), fc.entry_rep(0, 0)};
  auto origin = fc.wall_point(w, Rational(0), Rational(0));
  CHECK(fc.wall_coords(w, origin) == std::make_pair(Rational(0), Rational(0)));
  auto x = fc.wall_point(w, Rational(1, 4), Rational(5, 2));
  CHECK(fc.wall_coords(w, x) == std::make_pair(Rational(1, 4), Rational(5, 2)));
  CHECK(fc.axis_point(0, w.ref, Rational(1, 4)).walk.size() == 1);

  auto self = load("self_glued.json");
  Rng rng = make_rng(3, 3);
  for (int i = 0; i < 1000; ++i) {
    const FlipComplex& m = (i % 2) ? fc : self;
    PieceCopy copy = random_copy(m, rng, i % 4, m.root());
    WallId wall{copy, random_exit_wall(m, copy, rng)};
    auto p = random_wall_point(m, wall, rng);
    PieceCopy other = m.neighbor_copy(wall);
    auto there = m.express_in(p, other);
    auto back = m.express_in(there, wall.owner);
    CHECK(m.canonical(back) == p);
    CHECK(m.wall_coords(wall, back) == m.wall_coords(wall, p));
  }
}

TEST_CASE("dual tree navigation") {
  auto fc = load("self_glued.json");
  Rng rng = make_rng(9, 0);
  WallRef w = random_exit_wall(fc, fc.root(), rng);
  PieceCopy n = fc.neighbor_copy(WallId{fc.root(), w});
  CHECK(n.address == std::vector<WallRef>{w});
  CHECK(fc.cross(n, *fc.entry_wall(n)).to == fc.root());
  CHECK(fc.neighbor_copy(WallId{fc.root(), w}) == n);
  for (int i = 0; i < 200; ++i) {
    PieceCopy a = random_copy(fc, rng, 3, fc.root());
    PieceCopy b = random_copy(fc, rng, 3, a);
    PieceCopy c = random_copy(fc, rng, 2, fc.root());
    CHECK(fc.dual_tree_geodesic(a, a).empty());
    auto g = fc.dual_tree_geodesic(a, b);
    CHECK(static_cast<int>(g.size()) == fc.dual_distance(a, b));
    for (std::size_t k = 0; k + 1 < g.size(); ++k) CHECK(g[k].wall_to != g[k + 1].wall_from);
    if (!g.empty()) {
      CHECK(g.front().from == a);
      CHECK(g.back().to == b);
    }
    CHECK(fc.dual_distance(a, c) <= fc.dual_distance(a, b) + fc.dual_distance(b, c));
  }
}

TEST_CASE("estimate_rho is positive and monotone") {
  auto fc = load("two_wedge.json");
  FlipComplex unit(load_spec(wedge_spec("1", "4", "1/4")));
  double r1 = unit.estimate_rho(1), r2 = unit.estimate_rho(2), r3 = unit.estimate_rho(3);
  CHECK(r3 > 0);
  CHECK(r1 >= r2);
  CHECK(r2 >= r3);
  CHECK(fc.estimate_rho(4) == doctest::Approx(0.125));
  CHECK(fc.max_axis_overlap(3) > Rational(0));
}
