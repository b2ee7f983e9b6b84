#include <doctest.h>

#include "qclab/graph_of_groups.hpp"
#include "test_support.hpp"

using namespace qclab;
using qclab::test::load;

namespace {

// Translation length of an isometry of a simplicial tree:
// max(0, d(v, g^2 v) - d(v, g v)) for any vertex v.
int tree_translation_oracle(const GraphOfGroups& g, const GroupWord& w) {
  const FlipComplex& fc = g.complex();
  PointCoord v{fc.root(), TreePos{{}, DirEdge{0, false}, Rational(1, 3)}, Rational(0)};
  int d1 = fc.dual_distance(v.copy, g.act_on_point(w, v).copy);
  int d2 = fc.dual_distance(v.copy, g.act_on_point(g.power(w, 2), v).copy);
  return std::max(0, d2 - d1);
}

}  // namespace

TEST_CASE("britton_reduce examples") {
  auto fc = load("two_wedge.json");
  GraphOfGroups g(fc);
  CHECK(g.britton_reduce(GroupWord{}).reduced.empty());
  CHECK(g.britton_reduce(GroupWord{}).stable_count == 0);

  auto pinch = g.britton_reduce(g.parse("t0 ; v1: c d c^-1 d^-1 ; t0^-1"));
  CHECK(pinch.stable_count == 0);
  REQUIRE(pinch.reduced.syllables.size() == 1);
  CHECK(std::get<VertexElement>(pinch.reduced.syllables[0]) == VertexElement{0, {}, 1});

  // fiber of the far side becomes the boundary word
  auto fib = g.britton_reduce(g.parse("t0 ; v1: | f 2 ; t0^-1"));
  REQUIRE(fib.reduced.syllables.size() == 1);
  CHECK(std::get<VertexElement>(fib.reduced.syllables[0]) ==
        VertexElement{0, fc.piece(0).spine.parse_walk("a b a^-1 b^-1 a b a^-1 b^-1"), 0});

  auto plain = g.parse("t0 ; v1: c ; t0^-1");
  auto nf = g.britton_reduce(plain);
  CHECK(nf.stable_count == 2);
  CHECK(nf.reduced == plain);
}

TEST_CASE("word syntax round trip") {
  auto fc = load("self_glued.json");
  GraphOfGroups g(fc);
  auto w = g.parse("v0:a b a^-1 | f 2 ; t0 ; v0: b | f -1 ; t0^-1");
  CHECK(w.syllables.size() == 4);
  CHECK(g.parse(g.format(w)) == w);
  CHECK_THROWS(g.parse("t7"));
  CHECK_THROWS(g.parse("v0: q"));
  CHECK_THROWS(g.parse("x"));
}

TEST_CASE("translation length and Morse classification") {
  auto fc = load("self_glued.json");
  GraphOfGroups g(fc);
  CHECK(g.translation_length(g.parse("v0: a | f 3")) == 0);
  auto ta = g.parse("t0 ; v0: a");
  CHECK(g.translation_length(ta) == 1);
  CHECK(tree_translation_oracle(g, ta) == 1);
  CHECK(g.is_morse(ta));
  CHECK_FALSE(g.is_morse(g.parse("v0: | f 1")));
  CHECK(g.is_morse(g.power(ta, 3)) == g.is_morse(ta));
  CHECK_THROWS_AS(g.is_morse(g.parse("t0 ; t0^-1")), std::invalid_argument);

  auto two = load("two_wedge.json");
  GraphOfGroups h(two);
  CHECK_FALSE(h.is_morse(h.parse("v1: | f 1")));
  CHECK(h.translation_length(h.parse("v0: a ; t0 ; v1: c ; t0^-1")) == 2);

  Rng rng = make_rng(21, 0);
  for (int i = 0; i < 100; ++i) {
    GroupWord w = random_group_word(g, rng, 4);
    if (g.is_identity(w)) continue;
    int tau = g.translation_length(w);
    CHECK(tau == tree_translation_oracle(g, w));
    GroupWord c = random_group_word(g, rng, 3);
    CHECK(g.translation_length(g.multiply(g.multiply(c, w), g.inverse(c))) == tau);
    NormalForm cyc = g.cyclic_reduce(w);
    // conjugator witness: reduced = C w C^-1
    GroupWord lhs = g.multiply(g.multiply(cyc.conjugator, w), g.inverse(cyc.conjugator));
    CHECK(g.is_identity(g.multiply(lhs, g.inverse(cyc.reduced))));
    if (tau > 0)
      for (int n = 2; n <= 5; ++n) CHECK(g.translation_length(g.power(w, n)) == n * tau);
  }
}

TEST_CASE("reduction is idempotent and sound for the action") {
  for (const char* spec : {"self_glued.json", "two_wedge.json"}) {
    auto fc = load(spec);
    GraphOfGroups g(fc);
    Rng rng = make_rng(8, 0);
    for (int i = 0; i < 150; ++i) {
      GroupWord w = random_group_word(g, rng, 6);
      NormalForm nf = g.britton_reduce(w);
      CHECK(g.britton_reduce(nf.reduced).reduced == nf.reduced);
      PieceCopy copy = random_copy(fc, rng, i % 3, fc.root());
      PointCoord x = random_point(fc, copy, rng);
      CHECK(g.act_on_point(w, x) == g.act_on_point(nf.reduced, x));
    }
  }
}

TEST_CASE("action examples and axioms") {
  auto fc = load("two_wedge.json");
  GraphOfGroups g(fc);
  Rng rng = make_rng(4, 4);
  PointCoord x = random_point(fc, fc.root(), rng, 3, 0.0);
  CHECK(g.act_on_point(GroupWord{}, x) == x);
  PointCoord fx = g.act_on_point(g.parse("v0: | f 1"), x);
  CHECK(fx.base == x.base);
  CHECK(fx.fiber == x.fiber + Rational(1));

  for (int i = 0; i < 100; ++i) {
    GroupWord w = random_group_word(g, rng, 4), v = random_group_word(g, rng, 4);
    PieceCopy copy = random_copy(fc, rng, i % 3, fc.root());
    PointCoord p = random_point(fc, copy, rng), q = random_point(fc, copy, rng);
    CHECK(g.act_on_point(g.multiply(w, v), p) == g.act_on_point(w, g.act_on_point(v, p)));
    // isometry within a copy
    PointCoord gp = g.act_on_point(w, p), gq = g.act_on_point(w, q);
    if (fc.lies_in(q, p.copy) && fc.lies_in(p, q.copy)) continue;
    if (p.copy == q.copy && gp.copy == gq.copy) {
      CHECK(fc.base_distance(p.copy.piece, p.base, q.base) == fc.base_distance(gp.copy.piece, gp.base, gq.base));
      CHECK(p.fiber - q.fiber == gp.fiber - gq.fiber);
    }
  }
}

TEST_CASE("orbit_qi_test and free_basis_check") {
  auto fc = load("self_glued.json");
  GraphOfGroups g(fc);
  PointCoord x0{fc.root(), TreePos{{}, DirEdge{0, false}, Rational(1, 2)}, Rational(0)};
  GroupWord h = g.parse("t0 ; v0: a");
  auto rep = orbit_qi_test(g, {h}, 8, x0);
  CHECK(rep.L >= 1.0);
  CHECK(rep.L <= 2.0);
  CHECK(rep.max_upper_residual <= 1e-9);
  CHECK(rep.max_lower_residual <= 1e-9);
  auto zero = orbit_qi_test(g, {h}, 0, x0);
  CHECK(zero.L == 1.0);
  CHECK(zero.C == 0.0);
  CHECK_THROWS_AS(orbit_qi_test(g, {h, g.parse("v0: a | f 1")}, 4, x0), BoundedOrbitError);

  CHECK(free_basis_check(g, {h}, 6));
  CHECK_FALSE(free_basis_check(g, {h, h}, 3));
  GroupWord k = g.parse("t0 ; v0: b");
  CHECK(free_basis_check(g, {h, g.multiply(g.multiply(g.inverse(h), k), h)}, 4));
}
