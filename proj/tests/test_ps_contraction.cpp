#include <doctest.h>

#include <cmath>

#include "qclab/ps_contraction.hpp"
#include "test_support.hpp"

using namespace qclab;

namespace {

struct AxisFixture {
  FlipComplex fc = test::load("two_wedge.json");
  GraphOfGroups g{fc};
  GroupWord w = g.parse("v0: a ; t0 ; v1: c ; t0^-1");
  PointCoord base{fc.root(), TreePos{}, Rational(0)};
};

}  // namespace

TEST_CASE("Morse axis subset structure") {
  AxisFixture f;
  SubsetModel a = subset_from_morse(f.g, f.w, f.base, 3);
  // Seven translates of a length-2 axis step span 2 * 7 walls.
  CHECK(a.subtree.size() == 15);
  for (std::size_t i = 0; i < a.subtree.size(); ++i) {
    CHECK(a.slices[i].diameter <= a.delta + 1e-12);
    CHECK(a.slices[i].radius <= a.slices[i].diameter + 1e-12);
    for (std::size_t j = 0; j < a.subtree.size(); ++j) {
      // Closed under dual geodesics: every copy between two members is a member.
      for (const auto& c : f.fc.dual_tree_geodesic(a.subtree[i], a.subtree[j])) CHECK(a.slice_index(c.to) >= 0);
    }
  }
  CHECK(a.delta > 0);
  CHECK(a.step > 0);
  CHECK(contraction_constant(a) == doctest::Approx(10 * a.delta + a.step));
  CHECK_FALSE(a.wall_discs.empty());

  CHECK_THROWS_AS(subset_from_morse(f.g, f.g.parse("v1: | f 1"), f.base, 3), std::invalid_argument);
  CHECK_THROWS_AS(subset_from_morse(f.g, f.w, f.base, 0), std::invalid_argument);
}

TEST_CASE("path-system projection") {
  AxisFixture f;
  SubsetModel a = subset_from_morse(f.g, f.w, f.base, 3);
  for (const auto& s : a.slices)
    for (const auto& p : s.points) {
      PointCoord q = ps_projection(f.fc, p, a);
      CHECK(approx_distance(f.fc, p, q) <= a.delta + 1e-9);
      PointCoord qq = ps_projection(f.fc, q, a);
      CHECK(approx_distance(f.fc, q, qq) <= a.delta + 1e-9);
    }
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng = make_rng(5, i);
    auto [x, y] = sample_pair_near(f.fc, a, rng);
    PointCoord x2 = random_point(f.fc, x.copy, rng, 3, 0.0);
    if (std::holds_alternative<TreePos>(x.base)) CHECK(ps_projection(f.fc, x, a) == ps_projection(f.fc, x2, a));
    double d = distance_to_subset(f.fc, x, a);
    CHECK(d >= 0);
    CHECK(std::isfinite(d));
  }
}

TEST_CASE("projection is equivariant up to the slice size") {
  AxisFixture f;
  SubsetModel a = subset_from_morse(f.g, f.w, f.base, 4);
  for (std::uint64_t i = 0; i < 30; ++i) {
    Rng rng = make_rng(6, i);
    PointCoord x = random_point(f.fc, f.fc.root(), rng);
    PointCoord gx = f.g.act_on_point(f.w, x);
    PointCoord g_px = f.g.act_on_point(f.w, ps_projection(f.fc, x, a));
    CHECK(approx_distance(f.fc, g_px, ps_projection(f.fc, gx, a)) <= 2 * a.delta + 1e-9);
  }
}

TEST_CASE("distance to a piece geodesic") {
  FlipComplex fc = test::load("two_wedge.json");
  PieceCopy root = fc.root();
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = make_rng(7, i);
    PointCoord a = random_point(fc, root, rng, 3, 0.0);
    PointCoord b = random_point(fc, root, rng, 3, 0.0);
    PointCoord p = random_point(fc, root, rng, 3, 0.0);
    double d = distance_to_segment(fc, root, p, a, b);
    CHECK(d <= fc.piece_distance(p, a, Metric::L2) + 1e-12);
    CHECK(d <= fc.piece_distance(p, b, Metric::L2) + 1e-12);
    CHECK(distance_to_segment(fc, root, a, a, b) == doctest::Approx(0.0));
    // The fiber gap is a lower bound.
    double lo = std::min(std::abs((p.fiber - a.fiber).to_double()), std::abs((p.fiber - b.fiber).to_double()));
    bool between = (p.fiber - a.fiber).sign() * (p.fiber - b.fiber).sign() <= 0;
    if (!between) CHECK(d >= lo - 1e-12);
  }
}

TEST_CASE("contraction: Morse axis passes, wall plane fails") {
  AxisFixture f;
  SubsetModel a = subset_from_morse(f.g, f.w, f.base, 3);
  double C = contraction_constant(a);
  ContractionReport rep = check_contracting(f.fc, a, C, 150, 9);
  CHECK(rep.passed);
  CHECK(rep.measuredC <= C);

  ContractionReport vac = check_contracting(f.fc, a, 1e6, 20, 9);
  CHECK(vac.passed);
  CHECK(vac.vacuous);

  SubsetModel plane = subset_wall_plane(f.fc, WallId{f.fc.root(), WallRef{0, {}}}, 2.0);
  CHECK(plane.delta == doctest::Approx(4 * std::sqrt(2.0)));
  for (double c : {0.5, 1.0, plane.delta / 2}) {
    ContractionReport neg = check_contracting(f.fc, plane, c, 300, 9);
    CHECK_FALSE(neg.passed);
    REQUIRE(neg.witness.has_value());
    CHECK(neg.witness->path_distance > c);
    // The witness replays under the recorded seed.
    Rng rng = make_rng(neg.seed, neg.witness->sample);
    std::uniform_int_distribution<std::size_t> pick(0, plane.slices.size() - 1);
    const Slice& s = plane.slices[pick(rng)];
    std::uniform_int_distribution<std::size_t> pp(0, s.points.size() - 1);
    (void)pp(rng);
    auto [x, y] = sample_pair_near(f.fc, plane, rng);
    CHECK(x == neg.witness->x);
    CHECK(y == neg.witness->y);
  }
}

TEST_CASE("ball projection and quasiconvexity on the Morse axis") {
  AxisFixture f;
  SubsetModel a = subset_from_morse(f.g, f.w, f.base, 3);
  ContractionParams params;
  params.C = contraction_constant(a);
  params.k = 1;
  params.cbar = 2;
  CHECK(params.R() == doctest::Approx(4 * (1 + 2 * params.C)));
  BallReport br = ball_projection_check(f.fc, a, params, 60, 10);
  CHECK(br.k_needed >= 0);
  params.k = std::max(1.0, br.k_needed);
  br = ball_projection_check(f.fc, a, params, 60, 10);
  CHECK(br.passed);
  CHECK(br.skipped <= br.samples);

  QuasiconvexityReport q = quasiconvexity_radius(f.fc, a, 2.0, params, 40, 11);
  CHECK(q.certified + q.discarded == 40);
  CHECK(q.certified > 0);
  CHECK(q.measured <= q.bound);
  QuasiconvexityReport more = quasiconvexity_radius(f.fc, a, 2.0, params, 80, 11);
  CHECK(more.measured >= q.measured);
}
