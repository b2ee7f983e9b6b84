#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qclab/sampling.hpp"

namespace qclab::abc {

using Int = boost::multiprecision::cpp_int;
using IntVector = std::vector<Int>;
using Poly = std::vector<Int>;  // coefficients, constant term first

/// Square integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t k);
  explicit IntMatrix(std::vector<std::vector<Int>> rows);
  static IntMatrix identity(std::size_t k);

  std::size_t size() const { return rows_.size(); }
  Int& at(std::size_t i, std::size_t j) { return rows_[i][j]; }
  const Int& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::vector<Int>>& rows() const { return rows_; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntVector operator*(const IntVector& v) const;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  Int determinant() const;
  Int trace() const;
  /// Inverse of a unimodular matrix; throws otherwise.
  IntMatrix inverse() const;
  /// Integer power; negative exponents need a unimodular matrix.
  IntMatrix power(long long n) const;
  /// det(xI - A), monic.
  Poly characteristic_polynomial() const;
  std::string str() const;

 private:
  std::vector<std::vector<Int>> rows_;
};

/// Hermite normal form of the row lattice (zero rows dropped).
std::vector<IntVector> hermite_rows(std::vector<IntVector> rows);
/// Basis of {v : A v = 0} over the integers.
std::vector<IntVector> integer_kernel(const IntMatrix& a);

/// Basis of the lattice fixed by phi^l.
std::vector<IntVector> fixed_lattice(const IntMatrix& phi, long long l);
/// Orders n with Euler phi(n) <= k, ascending.
std::vector<long long> root_of_unity_orders(std::size_t k);
Poly cyclotomic_polynomial(long long n);
/// Exact division by a monic polynomial; nullopt if it leaves a remainder.
std::optional<Poly> divide_exact(const Poly& p, const Poly& monic);

/// Least l > 0 with a nontrivial fixed vector of phi^l, by testing fixed lattices.
std::optional<long long> periodic_order(const IntMatrix& phi);
/// Same quantity from cyclotomic factors of the characteristic polynomial.
std::optional<long long> periodic_order_cyclotomic(const IntMatrix& phi);
bool exists_proper_finite_height(const IntMatrix& phi);

/// t^m z, with t^m z . t^n w = t^{m+n} (phi^{-n} z + w), so that t z t^-1 = phi(z).
struct Element {
  long long t = 0;
  IntVector z;
  friend bool operator==(const Element&, const Element&) = default;
};

class Group {
 public:
  explicit Group(IntMatrix phi);
  const IntMatrix& phi() const { return phi_; }
  std::size_t rank() const { return phi_.size(); }

  Element identity() const { return {0, IntVector(rank(), 0)}; }
  Element t() const { return {1, IntVector(rank(), 0)}; }
  Element vec(IntVector z) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, long long n) const;
  Element conjugate(const Element& g, const Element& h) const;  // g h g^-1
  /// phi^n applied to z (n may be negative).
  IntVector apply(long long n, const IntVector& z) const;
  /// Exponent q with gen^q = x, if any (gen nontrivial).
  std::optional<long long> cyclic_log(const Element& gen, const Element& x) const;

 private:
  IntMatrix phi_;
  IntMatrix phi_inv_;
};

enum class Classification { Trivial, FiniteIndex, CandidateFiniteHeight, NotFiniteHeight };
enum class SqClass { Trivial, FiniteIndex, NotStronglyQuasiconvex };

std::string to_string(Classification c);
std::string to_string(SqClass c);

struct IndexInfo {
  bool finite = false;
  Int t_index = 0;        // index of the image in Z (0 when trivial)
  Int lattice_index = 0;  // index of H ∩ Z^k in Z^k (0 when of lower rank)
  std::vector<IntVector> lattice;  // HNF basis of H ∩ Z^k
};

IndexInfo subgroup_index(const Group& g, const std::vector<Element>& gens);

struct FiniteHeightResult {
  Classification kind = Classification::NotFiniteHeight;
  std::optional<long long> height_bound;
};

FiniteHeightResult classify_finite_height_subgroup(const Group& g, const std::vector<Element>& gens);
/// The height bound m for <t^m z>; throws when phi is periodic.
long long height_bound_cyclic(const IntMatrix& phi, long long m);
/// Powers p, 0 < |p| <= radius, with g h^p g^-1 in <h>.
std::vector<long long> ball_conjugate_intersection(const Group& grp, const Element& h, const Element& g,
                                                   long long radius);
SqClass sq_classification(const Group& g, const std::vector<Element>& gens);

/// Product of up to `steps` random elementary matrices and sign changes.
IntMatrix random_unimodular(std::size_t k, Rng& rng, int steps = 10);
/// Random det-1 2x2 matrix with |trace| > 2.
IntMatrix random_anosov(Rng& rng);

IntMatrix parse_matrix(const std::string& text);

}  // namespace qclab::abc
