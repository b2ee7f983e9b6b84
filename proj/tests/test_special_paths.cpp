#include <doctest.h>

#include <cmath>

#include "qclab/special_paths.hpp"
#include "test_support.hpp"

using namespace qclab;

namespace {

PointCoord tree_point(const PieceCopy& copy, const Walk& w, const Rational& fiber) {
  return PointCoord{copy, TreePos{w, DirEdge{}, Rational(0)}, fiber};
}

}  // namespace

TEST_CASE("closed-form gaps agree with exact base distances") {
  for (const char* name : {"two_wedge.json", "self_glued.json"}) {
    FlipComplex fc = test::load(name);
    Rng rng = make_rng(11, 0);
    PieceCopy root = fc.root();
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      WallRef e = random_exit_wall(fc, root, rng, 3);
      WallRef x = random_exit_wall(fc, root, rng, 3);
      if (e == x) continue;
      LineLineGap g = line_line_gap(fc, 0, e, x);
      PointCoord p = random_point(fc, root, rng, 3, 0.0);
      PointLineGap pg = point_line_gap(fc, 0, p.base, x);
      for (int k = 0; k < 5; ++k) {
        Rational u = random_rational(rng, Rational(-3), Rational(3));
        Rational v = random_rational(rng, Rational(-3), Rational(3));
        double exact = fc.base_distance(0, LinePos{e, u}, LinePos{x, v}).to_double();
        CHECK(g(u.to_double(), v.to_double()) == doctest::Approx(exact).epsilon(1e-12));
        double exact_p = fc.base_distance(0, p.base, LinePos{x, v}).to_double();
        CHECK(pg(v.to_double()) == doctest::Approx(exact_p).epsilon(1e-12));
        ++checked;
      }
    }
    CHECK(checked > 500);
  }
}

TEST_CASE("same-piece special path is the product geodesic") {
  FlipComplex fc(load_spec(test::wedge_spec("1", "4", "1/4")));
  const auto& sp = fc.piece(0).spine;
  PointCoord x = tree_point(fc.root(), {}, Rational(0));
  PointCoord y = tree_point(fc.root(), sp.parse_walk("a a a a"), Rational(3));
  SpecialPath path = special_path(fc, x, y);
  CHECK(path.breakpoints.size() == 2);
  CHECK(path.walls.empty());
  CHECK(path_length(fc, path, Metric::L2) == doctest::Approx(5.0));
  CHECK(path_length(fc, path, Metric::L1) == doctest::Approx(7.0));
  CHECK(approx_distance(fc, x, y) == doctest::Approx(5.0));
  CHECK(distance_lower_bound(fc, x, y, 0.25) == doctest::Approx(5.0));

  SpecialPath self = special_path(fc, x, x);
  CHECK(path_length(fc, self, Metric::L1) == 0.0);
}

TEST_CASE("special path across one wall of the two-wedge spec") {
  FlipComplex fc = test::load("two_wedge.json");
  PieceCopy root = fc.root();
  WallRef wall{0, {}};
  PieceCopy child = fc.cross(root, wall).to;
  PointCoord x = tree_point(root, {}, Rational(0));
  PointCoord y = tree_point(child, {}, Rational(1));
  SpecialPath path = special_path(fc, x, y);
  REQUIRE(path.breakpoints.size() == 3);
  // q0 = foot of the base vertex (s = 0); p1 = foot of y's base on the entry line (s = 0).
  auto [s, t] = fc.wall_coords(WallId{root, wall}, path.breakpoints[1]);
  CHECK(s == Rational(0));
  CHECK(t == Rational(0));
  double collar = 1.0 / 16;
  double expected = collar + std::hypot(collar, 1.0);
  CHECK(path_length(fc, path, Metric::L2) == doctest::Approx(expected));
  double oracle = approx_distance(fc, x, y, OracleOptions{0.01});
  CHECK(oracle <= expected + 1e-9);
  CHECK(oracle >= expected - 0.01);
  CHECK(distance_lower_bound(fc, x, y, 0.0) == doctest::Approx(2 * collar));
}

TEST_CASE("reversal and breakpoint restriction are coordinate-exact") {
  for (const char* name : {"two_wedge.json", "self_glued.json"}) {
    FlipComplex fc = test::load(name);
    for (std::uint64_t i = 0; i < 80; ++i) {
      Rng rng = make_rng(21, i);
      auto [x, y] = random_pair(fc, rng, 6);
      SpecialPath fwd = special_path(fc, x, y);
      SpecialPath rev = special_path(fc, y, x);
      std::vector<PointCoord> back(rev.breakpoints.rbegin(), rev.breakpoints.rend());
      CHECK(back == fwd.breakpoints);
      const auto& bp = fwd.breakpoints;
      for (std::size_t a = 0; a < bp.size(); ++a)
        for (std::size_t b = a + 1; b < bp.size(); ++b) {
          SpecialPath sub = special_path(fc, bp[a], bp[b]);
          std::vector<PointCoord> want(bp.begin() + a, bp.begin() + b + 1);
          CHECK(sub.breakpoints == want);
        }
    }
  }
}

TEST_CASE("oracle brackets: lower bound <= oracle <= special path, monotone in resolution") {
  FlipComplex fc = test::load("two_wedge.json");
  double rho = fc.estimate_rho(4);
  for (std::uint64_t i = 0; i < 40; ++i) {
    Rng rng = make_rng(31, i);
    auto [x, y] = random_pair(fc, rng, 4);
    SpecialPath path = special_path(fc, x, y);
    double l1 = path_length(fc, path, Metric::L1);
    double l2 = path_length(fc, path, Metric::L2);
    CHECK(l1 >= l2 - 1e-12);
    CHECK(l2 >= l1 / std::sqrt(2.0) - 1e-12);
    double coarse = approx_distance(fc, x, y, OracleOptions{0.1});
    double fine = approx_distance(fc, x, y, OracleOptions{0.05});
    CHECK(fine <= coarse + 1e-12);
    CHECK(coarse <= l2 + 1e-9);
    CHECK(fine >= distance_lower_bound(fc, x, y, rho) - 1e-9);
  }
}

TEST_CASE("lower bound grows with the number of pieces") {
  FlipComplex fc = test::load("two_wedge.json");
  Rng rng = make_rng(41, 0);
  PieceCopy far = random_copy(fc, rng, 4, fc.root());
  PointCoord x = tree_point(fc.root(), {}, Rational(0));
  PointCoord y = tree_point(far, {}, Rational(0));
  REQUIRE(separating_walls(fc, x, y).size() == 4);
  CHECK(distance_lower_bound(fc, x, y, 0.25) >= 0.75);
}

TEST_CASE("oracle budget") {
  FlipComplex fc = test::load("two_wedge.json");
  Rng rng = make_rng(51, 0);
  PieceCopy far = random_copy(fc, rng, 5, fc.root());
  PointCoord x = tree_point(fc.root(), {}, Rational(0));
  PointCoord y = tree_point(far, {}, Rational(0));
  OracleOptions opt;
  opt.max_walls = 3;
  CHECK_THROWS_AS(approx_distance(fc, x, y, opt), OracleBudgetError);
  opt.max_walls = 12;
  opt.resolution = 1e-4;
  CHECK_THROWS_AS(approx_distance(fc, x, y, opt), OracleBudgetError);
}

TEST_CASE("horizontal slide never lengthens the tree path") {
  for (const char* name : {"two_wedge.json", "self_glued.json"}) {
    FlipComplex fc = test::load(name);
    for (std::uint64_t i = 0; i < 400; ++i) {
      Rng rng = make_rng(61, i);
      PieceCopy a = random_copy(fc, rng, static_cast<int>(i % 3), fc.root());
      WallRef w = random_exit_wall(fc, a, rng, 3);
      PieceCopy b = fc.cross(a, w).to;
      PointCoord x = random_point(fc, a, rng);
      PointCoord y = random_wall_point(fc, WallId{a, w}, rng);
      PointCoord z = random_point(fc, b, rng);
      SlideResult r = horizontal_slide(fc, x, y, z);
      CHECK(r.defect <= Rational(0));
      SlideResult again = horizontal_slide(fc, x, r.w, z);
      CHECK(again.w == r.w);
      CHECK(again.defect == Rational(0));
    }
  }
  FlipComplex fc = test::load("two_wedge.json");
  PieceCopy root = fc.root();
  PieceCopy child = fc.cross(root, WallRef{0, {}}).to;
  PointCoord y = fc.wall_point(WallId{root, WallRef{0, {}}}, Rational(1), Rational(0));
  PointCoord x = tree_point(root, {}, Rational(0));
  CHECK_THROWS_AS(horizontal_slide(fc, x, y, x), std::invalid_argument);
  CHECK_NOTHROW(horizontal_slide(fc, x, y, tree_point(child, {}, Rational(0))));
}

TEST_CASE("qg_fit produces a finite kappa that only grows with more samples") {
  FlipComplex fc = test::load("two_wedge.json");
  QGReport rep = qg_fit(fc, 40, 4, 0.1, 7, fc.estimate_rho(4));
  CHECK(rep.kappa >= 1.0);
  CHECK(std::isfinite(rep.kappa));
  CHECK(fit_kappa(rep.rows, 20) <= rep.kappa);
  for (const auto& row : rep.rows) CHECK(row.length_l1 <= rep.kappa * row.oracle + rep.kappa + 1e-9);
}
