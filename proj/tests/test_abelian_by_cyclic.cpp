#include <doctest.h>

#include "qclab/abelian_by_cyclic.hpp"

using namespace qclab;
using namespace qclab::abc;

namespace {

IntMatrix m2(long long a, long long b, long long c, long long d) { return IntMatrix({{a, b}, {c, d}}); }

const IntMatrix kCat = m2(2, 1, 1, 1);
const IntMatrix kRot = m2(0, -1, 1, 0);
const IntMatrix kShear = m2(1, 1, 0, 1);

IntVector rvec(Rng& rng, std::size_t k) {
  std::uniform_int_distribution<int> d(-5, 5);
  IntVector v(k);
  for (auto& x : v) x = d(rng);
  return v;
}

Element relem(Rng& rng, std::size_t k) {
  std::uniform_int_distribution<int> d(-3, 3);
  return Element{d(rng), rvec(rng, k)};
}

}  // namespace

TEST_CASE("matrix basics") {
  CHECK(kCat.determinant() == 1);
  CHECK(kRot.power(4) == IntMatrix::identity(2));
  CHECK(kRot.power(-1) == kRot.power(3));
  CHECK(kCat * kCat.inverse() == IntMatrix::identity(2));
  CHECK(kCat.characteristic_polynomial() == Poly{1, -3, 1});
  CHECK(IntMatrix::identity(3).characteristic_polynomial() == Poly{-1, 3, -3, 1});
  CHECK_THROWS_AS(m2(2, 0, 0, 1).inverse(), std::invalid_argument);
  CHECK(parse_matrix("[[2,1],[1,1]]") == kCat);
  CHECK(parse_matrix("[[\"-3\"]]") == IntMatrix(std::vector<std::vector<Int>>{{-3}}));
  CHECK_THROWS_AS(parse_matrix("[[1,2],[3]]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("[[1.5]]"), std::invalid_argument);
}

TEST_CASE("integer kernels and fixed lattices") {
  auto ker = integer_kernel(m2(1, 2, 2, 4));
  REQUIRE(ker.size() == 1);
  CHECK(ker[0] == IntVector{2, -1});

  CHECK(fixed_lattice(IntMatrix::identity(3), 1).size() == 3);
  CHECK(fixed_lattice(kCat, 1).empty());
  CHECK(fixed_lattice(kRot, 4).size() == 2);
  CHECK(fixed_lattice(kRot, 2).empty());
  auto sh = fixed_lattice(kShear, 1);
  REQUIRE(sh.size() == 1);
  CHECK(sh[0] == IntVector{1, 0});
  CHECK_THROWS_AS(fixed_lattice(kCat, 0), std::invalid_argument);

  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 300; ++i) {
    std::size_t k = 1 + static_cast<std::size_t>(i % 4);
    IntMatrix phi = random_unimodular(k, rng);
    for (long long l : {1LL, 2LL, -3LL, 6LL})
      for (const auto& v : fixed_lattice(phi, l)) CHECK(phi.power(l) * v == v);
  }
}

TEST_CASE("periodic order and cyclotomic factors") {
  CHECK(root_of_unity_orders(1) == std::vector<long long>{1, 2});
  CHECK(root_of_unity_orders(2) == std::vector<long long>{1, 2, 3, 4, 6});
  CHECK(root_of_unity_orders(4) == std::vector<long long>{1, 2, 3, 4, 5, 6, 8, 10, 12});
  CHECK(cyclotomic_polynomial(1) == Poly{-1, 1});
  CHECK(cyclotomic_polynomial(4) == Poly{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == Poly{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == Poly{1, 0, -1, 0, 1});
  CHECK_FALSE(divide_exact(Poly{1, -3, 1}, Poly{-1, 1}).has_value());

  CHECK(periodic_order(IntMatrix::identity(2)) == 1);
  CHECK(periodic_order(kRot) == 4);
  CHECK(periodic_order(m2(-1, 0, 0, -1)) == 2);
  CHECK(periodic_order(m2(0, -1, 1, -1)) == 3);
  CHECK_FALSE(periodic_order(kCat).has_value());
  CHECK(periodic_order(kShear) == 1);
  CHECK(exists_proper_finite_height(kCat));
  CHECK_FALSE(exists_proper_finite_height(IntMatrix::identity(2)));
  CHECK_FALSE(exists_proper_finite_height(kShear));

  Rng rng = make_rng(2, 0);
  for (int i = 0; i < 300; ++i) {
    std::size_t k = 1 + static_cast<std::size_t>(i % 4);
    IntMatrix phi = random_unimodular(k, rng);
    CHECK(periodic_order(phi) == periodic_order_cyclotomic(phi));
  }
  for (int i = 0; i < 50; ++i) {
    IntMatrix phi = random_anosov(rng);
    CHECK(phi.determinant() == 1);
    CHECK(abs(phi.trace()) > 2);
    CHECK(exists_proper_finite_height(phi));
    IntMatrix p = random_unimodular(2, rng);
    CHECK(exists_proper_finite_height(p * phi * p.inverse()));
  }
}

TEST_CASE("semidirect product law") {
  Rng rng = make_rng(3, 0);
  for (const IntMatrix& phi : {kCat, kRot, IntMatrix({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}})}) {
    Group g(phi);
    std::size_t k = g.rank();
    for (int i = 0; i < 300; ++i) {
      Element a = relem(rng, k), b = relem(rng, k), c = relem(rng, k);
      CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
      CHECK(g.multiply(a, g.inverse(a)) == g.identity());
      IntVector z = rvec(rng, k);
      CHECK(g.conjugate(g.t(), g.vec(z)) == g.vec(phi * z));
      CHECK(g.power(a, 3) == g.multiply(a, g.multiply(a, a)));
      CHECK(g.power(a, -2) == g.inverse(g.multiply(a, a)));
    }
  }
  CHECK_THROWS_AS(Group(m2(2, 0, 0, 1)), std::invalid_argument);
}

TEST_CASE("finite height classification") {
  Group g(kCat);
  Element t = g.t();
  Element e1 = g.vec({1, 0}), e2 = g.vec({0, 1});
  auto c = classify_finite_height_subgroup(g, {t});
  CHECK(c.kind == Classification::CandidateFiniteHeight);
  CHECK(c.height_bound == 1);
  CHECK(classify_finite_height_subgroup(g, {e1}).kind == Classification::NotFiniteHeight);
  CHECK(classify_finite_height_subgroup(g, {t, e1, e2}).kind == Classification::FiniteIndex);
  CHECK(classify_finite_height_subgroup(g, {g.identity()}).kind == Classification::Trivial);
  // t and e1 generate: the Z[phi]-orbit of e1 spans Z^2.
  CHECK(classify_finite_height_subgroup(g, {t, e1}).kind == Classification::FiniteIndex);
  auto t3 = classify_finite_height_subgroup(g, {g.power(g.multiply(t, e1), 3)});
  CHECK(t3.kind == Classification::CandidateFiniteHeight);
  CHECK(t3.height_bound == 3);
  auto t23 = classify_finite_height_subgroup(g, {g.power(t, 2), g.power(t, 3)});
  CHECK(t23.kind == Classification::CandidateFiniteHeight);
  CHECK(t23.height_bound == 1);
  CHECK(classify_finite_height_subgroup(g, {g.power(t, 2), e1}).kind == Classification::FiniteIndex);
  CHECK(classify_finite_height_subgroup(Group(kRot), {Group(kRot).t()}).kind == Classification::NotFiniteHeight);
  CHECK_THROWS_AS(classify_finite_height_subgroup(g, {Element{1, {1, 2, 3}}}), std::invalid_argument);
  CHECK_THROWS_AS(classify_finite_height_subgroup(g, {}), std::invalid_argument);

  Group id(IntMatrix::identity(2));
  IndexInfo info = subgroup_index(id, {id.t(), id.vec({2, 0}), id.vec({0, 1})});
  CHECK(info.finite);
  CHECK(info.lattice_index == 2);
  CHECK(info.t_index == 1);
  CHECK_FALSE(subgroup_index(id, {id.t(), id.vec({1, 0})}).finite);
  IndexInfo shifted = subgroup_index(id, {Element{2, {1, 0}}, Element{3, {0, 0}}, id.vec({0, 5})});
  CHECK(shifted.t_index == 1);
  CHECK(shifted.finite);
  CHECK(shifted.lattice_index == 15);

  CHECK(height_bound_cyclic(kCat, 1) == 1);
  CHECK(height_bound_cyclic(kCat, 3) == 3);
  CHECK_THROWS_AS(height_bound_cyclic(kRot, 1), std::domain_error);

  CHECK(sq_classification(g, {t}) == SqClass::NotStronglyQuasiconvex);
  CHECK(sq_classification(g, {g.identity()}) == SqClass::Trivial);
  CHECK(sq_classification(g, {t, e1, e2}) == SqClass::FiniteIndex);
  CHECK(to_string(SqClass::NotStronglyQuasiconvex) == "not-strongly-quasiconvex");
}

TEST_CASE("ball conjugate intersections") {
  Group g(kCat);
  Element t = g.t();
  CHECK(ball_conjugate_intersection(g, t, g.vec({1, 0}), 8).empty());
  CHECK(ball_conjugate_intersection(g, t, g.power(t, 2), 8).size() == 16);
  Rng rng = make_rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    Element x = relem(rng, 2);
    if (x.z == IntVector{0, 0}) continue;
    CHECK(ball_conjugate_intersection(g, t, x, 8).empty());
  }
  Group rot(kRot);
  auto hits = ball_conjugate_intersection(rot, rot.t(), rot.vec({1, 0}), 8);
  CHECK(hits == std::vector<long long>{-8, -4, 4, 8});
  CHECK_THROWS_AS(ball_conjugate_intersection(g, t, t, 0), std::invalid_argument);
}
