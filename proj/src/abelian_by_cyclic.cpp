#include "qclab/abelian_by_cyclic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qclab::abc {
namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

void axpy(IntVector& y, const Int& a, const IntVector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Unimodular row reduction of the first `cols` columns to echelon form.
// Returns the number of pivot rows, which come first.
std::size_t echelon(std::vector<IntVector>& rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    for (;;) {
      std::size_t piv = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (piv == rows.size() || abs(rows[i][c]) < abs(rows[piv][c]))) piv = i;
      if (piv == rows.size()) break;
      std::swap(rows[r], rows[piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        axpy(rows[i], -floor_div(rows[i][c], rows[r][c]), rows[r]);
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] != 0) ++r;
  }
  return r;
}

Int bareiss_det(std::vector<std::vector<Int>> m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[k], m[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

long long euler_phi(long long n) {
  long long out = n;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    out -= out / p;
  }
  if (n > 1) out -= out / n;
  return out;
}

void check_dim(const Group& g, const Element& e) {
  if (e.z.size() != g.rank())
    throw std::invalid_argument("inconsistent generator list: vector of length " + std::to_string(e.z.size()) +
                                " in rank " + std::to_string(g.rank()));
}

}  // namespace

// ---- matrices --------------------------------------------------------------

IntMatrix::IntMatrix(std::size_t k) : rows_(k, std::vector<Int>(k, 0)) {}

IntMatrix::IntMatrix(std::vector<std::vector<Int>> rows) : rows_(std::move(rows)) {
  for (const auto& r : rows_)
    if (r.size() != rows_.size()) throw std::invalid_argument("matrix must be square");
}

IntMatrix IntMatrix::identity(std::size_t k) {
  IntMatrix m(k);
  for (std::size_t i = 0; i < k; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  std::size_t n = size();
  IntMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (rows_[i][l] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out.rows_[i][j] += rows_[i][l] * o.rows_[l][j];
    }
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  IntMatrix out = *this;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out.rows_[i][j] -= o.rows_[i][j];
  return out;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  IntVector out(size(), 0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out[i] += rows_[i][j] * v[j];
  return out;
}

Int IntMatrix::determinant() const { return bareiss_det(rows_); }

Int IntMatrix::trace() const {
  Int t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += rows_[i][i];
  return t;
}

IntMatrix IntMatrix::inverse() const {
  Int det = determinant();
  if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular (det " + det.str() + ")");
  std::size_t n = size();
  IntMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<Int>> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Int> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(rows_[r][c]);
        minor.push_back(std::move(row));
      }
      Int cof = bareiss_det(std::move(minor));
      if ((i + j) % 2) cof = -cof;
      out.rows_[i][j] = cof * det;  // det = ±1 is its own inverse
    }
  return out;
}

IntMatrix IntMatrix::power(long long n) const {
  IntMatrix base = n < 0 ? inverse() : *this;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  IntMatrix out = identity(size());
  while (e) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

Poly IntMatrix::characteristic_polynomial() const {
  // Faddeev-LeVerrier; every division is exact.
  std::size_t n = size();
  Poly c(n + 1, 0);
  c[n] = 1;
  IntMatrix m(n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = *this * m;
    for (std::size_t i = 0; i < n; ++i) next.rows_[i][i] += c[n - k + 1];
    m = next;
    c[n - k] = -(*this * m).trace() / static_cast<long long>(k);
  }
  return c;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < size(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < size(); ++j) os << (j ? "," : "") << rows_[i][j];
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---- lattices --------------------------------------------------------------

std::vector<IntVector> hermite_rows(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  std::size_t cols = rows.front().size();
  std::size_t r = echelon(rows, cols);
  rows.resize(r);
  std::size_t c = 0;
  for (std::size_t i = 0; i < r; ++i) {
    while (rows[i][c] == 0) ++c;
    if (rows[i][c] < 0)
      for (auto& x : rows[i]) x = -x;
    for (std::size_t j = 0; j < i; ++j) axpy(rows[j], -floor_div(rows[j][c], rows[i][c]), rows[i]);
  }
  return rows;
}

std::vector<IntVector> integer_kernel(const IntMatrix& a) {
  std::size_t n = a.size();
  std::vector<IntVector> rows(n, IntVector(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a.at(j, i);
    rows[i][n + i] = 1;
  }
  std::size_t r = echelon(rows, n);
  std::vector<IntVector> kernel;
  for (std::size_t i = r; i < n; ++i) kernel.emplace_back(rows[i].begin() + static_cast<std::ptrdiff_t>(n), rows[i].end());
  return hermite_rows(std::move(kernel));
}

std::vector<IntVector> fixed_lattice(const IntMatrix& phi, long long l) {
  if (l == 0) throw std::invalid_argument("fixed_lattice: exponent must be nonzero");
  return integer_kernel(phi.power(l) - IntMatrix::identity(phi.size()));
}

std::vector<long long> root_of_unity_orders(std::size_t k) {
  // phi(n) >= sqrt(n / 2), so phi(n) <= k forces n <= 2 k^2.
  std::vector<long long> out;
  long long limit = std::max<long long>(2, 2 * static_cast<long long>(k * k));
  for (long long n = 1; n <= limit; ++n)
    if (euler_phi(n) <= static_cast<long long>(k)) out.push_back(n);
  return out;
}

Poly cyclotomic_polynomial(long long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  Poly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (long long d = 1; d < n; ++d)
    if (n % d == 0) p = *divide_exact(p, cyclotomic_polynomial(d));
  return p;
}

std::optional<Poly> divide_exact(const Poly& p, const Poly& monic) {
  if (monic.empty() || monic.back() != 1) throw std::invalid_argument("divide_exact: divisor must be monic");
  if (p.size() < monic.size()) {
    if (std::all_of(p.begin(), p.end(), [](const Int& x) { return x == 0; })) return Poly{0};
    return std::nullopt;
  }
  Poly rem = p;
  std::size_t dq = p.size() - monic.size();
  Poly q(dq + 1, 0);
  for (std::size_t i = dq + 1; i-- > 0;) {
    Int coef = rem[i + monic.size() - 1];
    q[i] = coef;
    for (std::size_t j = 0; j < monic.size(); ++j) rem[i + j] -= coef * monic[j];
  }
  for (const auto& r : rem)
    if (r != 0) return std::nullopt;
  return q;
}

std::optional<long long> periodic_order(const IntMatrix& phi) {
  for (long long n : root_of_unity_orders(phi.size()))
    if (!fixed_lattice(phi, n).empty()) return n;
  return std::nullopt;
}

std::optional<long long> periodic_order_cyclotomic(const IntMatrix& phi) {
  Poly chi = phi.characteristic_polynomial();
  for (long long n : root_of_unity_orders(phi.size()))
    if (divide_exact(chi, cyclotomic_polynomial(n))) return n;
  return std::nullopt;
}

bool exists_proper_finite_height(const IntMatrix& phi) { return !periodic_order(phi).has_value(); }

// ---- the group -------------------------------------------------------------

Group::Group(IntMatrix phi) : phi_(std::move(phi)) {
  if (phi_.size() == 0) throw std::invalid_argument("Group: empty matrix");
  phi_inv_ = phi_.inverse();
}

Element Group::vec(IntVector z) const {
  Element e{0, std::move(z)};
  check_dim(*this, e);
  return e;
}

IntVector Group::apply(long long n, const IntVector& z) const {
  return (n >= 0 ? phi_.power(n) : phi_inv_.power(-n)) * z;
}

Element Group::multiply(const Element& a, const Element& b) const {
  IntVector z = apply(-b.t, a.z);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += b.z[i];
  return {a.t + b.t, std::move(z)};
}

Element Group::inverse(const Element& a) const {
  IntVector z = apply(a.t, a.z);
  for (auto& x : z) x = -x;
  return {-a.t, std::move(z)};
}

Element Group::power(const Element& a, long long n) const {
  Element base = n < 0 ? inverse(a) : a;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  Element out = identity();
  while (e) {
    if (e & 1) out = multiply(out, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return out;
}

Element Group::conjugate(const Element& g, const Element& h) const { return multiply(multiply(g, h), inverse(g)); }

std::optional<long long> Group::cyclic_log(const Element& gen, const Element& x) const {
  if (gen.t != 0) {
    if (x.t % gen.t != 0) return std::nullopt;
    long long q = x.t / gen.t;
    if (power(gen, q) == x) return q;
    return std::nullopt;
  }
  if (x.t != 0) return std::nullopt;
  auto it = std::find_if(gen.z.begin(), gen.z.end(), [](const Int& v) { return v != 0; });
  if (it == gen.z.end()) return is_zero(x.z) ? std::optional<long long>(0) : std::nullopt;
  std::size_t i = static_cast<std::size_t>(it - gen.z.begin());
  if (x.z[i] % gen.z[i] != 0) return std::nullopt;
  Int q = x.z[i] / gen.z[i];
  for (std::size_t j = 0; j < gen.z.size(); ++j)
    if (x.z[j] != q * gen.z[j]) return std::nullopt;
  return q.convert_to<long long>();
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "trivial";
    case Classification::FiniteIndex: return "finite-index";
    case Classification::CandidateFiniteHeight: return "candidate-finite-height";
    case Classification::NotFiniteHeight: return "not-finite-height";
  }
  return "?";
}

std::string to_string(SqClass c) {
  switch (c) {
    case SqClass::Trivial: return "trivial";
    case SqClass::FiniteIndex: return "finite-index";
    case SqClass::NotStronglyQuasiconvex: return "not-strongly-quasiconvex";
  }
  return "?";
}

IndexInfo subgroup_index(const Group& g, const std::vector<Element>& gens) {
  for (const auto& e : gens) check_dim(g, e);
  const std::size_t k = g.rank();
  IndexInfo info;
  // d = gcd of the t-exponents with Bezout coefficients.
  long long d = 0;
  std::vector<long long> coef(gens.size(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    long long a = d, b = gens[i].t;
    long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
      long long q = a / b;
      std::tie(a, b) = std::make_pair(b, a - q * b);
      std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
      std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    if (a < 0) {
      a = -a;
      x0 = -x0;
      y0 = -y0;
    }
    for (std::size_t j = 0; j < i; ++j) coef[j] *= x0;
    coef[i] = y0;
    d = a;
  }
  info.t_index = d;

  std::vector<IntVector> span;
  if (d == 0) {
    for (const auto& e : gens) span.push_back(e.z);
  } else {
    Element g0 = g.identity();
    for (std::size_t i = 0; i < gens.size(); ++i) g0 = g.multiply(g0, g.power(gens[i], coef[i]));
    for (const auto& e : gens) {
      Element v = g.multiply(e, g.power(g0, -(e.t / d)));
      IntVector z = v.z;
      for (std::size_t j = 0; j < k; ++j) {
        span.push_back(z);
        z = g.apply(d, z);
      }
    }
  }
  info.lattice = hermite_rows(span);
  if (info.lattice.size() == k) {
    info.lattice_index = 1;
    for (std::size_t i = 0; i < k; ++i) info.lattice_index *= info.lattice[i][i];
  }
  info.finite = d != 0 && info.lattice.size() == k;
  return info;
}

FiniteHeightResult classify_finite_height_subgroup(const Group& g, const std::vector<Element>& gens) {
  if (gens.empty()) throw std::invalid_argument("inconsistent generator list: empty");
  for (const auto& e : gens) check_dim(g, e);
  std::vector<Element> live;
  for (const auto& e : gens)
    if (!(e == g.identity())) live.push_back(e);
  if (live.empty()) return {Classification::Trivial, std::nullopt};
  IndexInfo info = subgroup_index(g, live);
  if (info.finite) return {Classification::FiniteIndex, std::nullopt};
  // Trivial H ∩ Z^k with d != 0: H is infinite cyclic, generated by some t^d z.
  if (info.lattice.empty() && info.t_index != 0 && !periodic_order(g.phi()))
    return {Classification::CandidateFiniteHeight, height_bound_cyclic(g.phi(), info.t_index.convert_to<long long>())};
  return {Classification::NotFiniteHeight, std::nullopt};
}

long long height_bound_cyclic(const IntMatrix& phi, long long m) {
  if (m < 1) throw std::invalid_argument("height_bound_cyclic: m must be positive");
  if (auto n = periodic_order(phi))
    throw std::domain_error("phi is periodic (phi^" + std::to_string(*n) +
                            " fixes a nonzero vector): a finite height subgroup is trivial or of finite index");
  return m;
}

std::vector<long long> ball_conjugate_intersection(const Group& grp, const Element& h, const Element& g,
                                                   long long radius) {
  if (radius < 1) throw std::invalid_argument("ball_conjugate_intersection: radius must be >= 1");
  check_dim(grp, h);
  check_dim(grp, g);
  std::vector<long long> out;
  if (h == grp.identity()) return out;
  for (long long p = -radius; p <= radius; ++p) {
    if (p == 0) continue;
    if (grp.cyclic_log(h, grp.conjugate(g, grp.power(h, p)))) out.push_back(p);
  }
  return out;
}

SqClass sq_classification(const Group& g, const std::vector<Element>& gens) {
  auto c = classify_finite_height_subgroup(g, gens.empty() ? std::vector<Element>{g.identity()} : gens);
  if (c.kind == Classification::Trivial) return SqClass::Trivial;
  if (c.kind == Classification::FiniteIndex) return SqClass::FiniteIndex;
  return SqClass::NotStronglyQuasiconvex;
}

// ---- sampling --------------------------------------------------------------

IntMatrix random_unimodular(std::size_t k, Rng& rng, int steps) {
  IntMatrix m = IntMatrix::identity(k);
  std::uniform_int_distribution<int> count(0, steps), row(0, static_cast<int>(k) - 1), mult(1, 2), kind(0, 5);
  std::uniform_int_distribution<int> sign(0, 1);
  int n = count(rng);
  for (int s = 0; s < n; ++s) {
    int i = row(rng), j = row(rng);
    if (kind(rng) == 0 || i == j) {
      for (std::size_t c = 0; c < k; ++c) m.at(static_cast<std::size_t>(i), c) = -m.at(static_cast<std::size_t>(i), c);
      continue;
    }
    Int a = mult(rng) * (sign(rng) ? 1 : -1);
    for (std::size_t c = 0; c < k; ++c)
      m.at(static_cast<std::size_t>(i), c) += a * m.at(static_cast<std::size_t>(j), c);
  }
  return m;
}

IntMatrix random_anosov(Rng& rng) {
  std::uniform_int_distribution<int> len(1, 4), val(1, 3), sign(0, 1);
  for (;;) {
    IntMatrix m = IntMatrix::identity(2);
    int n = len(rng);
    for (int s = 0; s < n; ++s) {
      IntMatrix e = IntMatrix::identity(2);
      int a = val(rng) * (sign(rng) ? 1 : -1);
      if (s % 2) e.at(0, 1) = a;
      else e.at(1, 0) = a;
      m = m * e;
    }
    if (sign(rng))  // -m keeps det 1
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t c = 0; c < 2; ++c) m.at(i, c) = -m.at(i, c);
    if (abs(m.trace()) > 2) return m;
  }
}

IntMatrix parse_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("matrix parse error: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty list of rows");
  std::vector<std::vector<Int>> rows;
  for (const auto& jr : j) {
    if (!jr.is_array()) throw std::invalid_argument("matrix rows must be lists");
    std::vector<Int> row;
    for (const auto& x : jr) {
      if (x.is_number_integer()) row.emplace_back(x.get<long long>());
      else if (x.is_string()) row.emplace_back(x.get<std::string>().c_str());
      else throw std::invalid_argument("matrix entries must be integers");
    }
    rows.push_back(std::move(row));
  }
  return IntMatrix(std::move(rows));
}

}  // namespace qclab::abc
