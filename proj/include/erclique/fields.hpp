#pragma once

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "erclique/combinatorics.hpp"
#include "erclique/random.hpp"

namespace erclique {

using BigInt = boost::multiprecision::cpp_int;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// First primes above 12*C(k,s) whose product exceeds n^k.
inline std::vector<std::uint64_t> select_primes(int n, int k, int s) {
  if (!(s >= 2 && k >= s && n >= k)) {
    throw std::invalid_argument("select_primes requires n >= k >= s >= 2");
  }
  const std::uint64_t lower = 12 * binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s));
  const BigInt target = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
  BigInt product = 1;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t q = lower + 1; product <= target; ++q) {
    if (is_prime(q)) {
      primes.push_back(q);
      product *= q;
    }
  }
  return primes;
}

struct ResidueVector {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> residues;
};

inline void validate(const ResidueVector& rv) {
  if (rv.primes.size() != rv.residues.size()) {
    throw std::invalid_argument("residue vector: primes and residues differ in length");
  }
  for (std::size_t i = 0; i < rv.primes.size(); ++i) {
    if (!is_prime(rv.primes[i])) throw std::invalid_argument("residue vector: modulus is not prime");
    if (rv.residues[i] >= rv.primes[i]) throw std::invalid_argument("residue vector: residue out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (rv.primes[i] == rv.primes[j]) throw std::invalid_argument("residue vector: repeated prime");
    }
  }
}

// Unique x in [0, prod primes) with x = residues[i] mod primes[i].
inline BigInt crt_combine(const ResidueVector& rv) {
  validate(rv);
  BigInt x = 0;
  BigInt modulus = 1;
  for (std::size_t i = 0; i < rv.primes.size(); ++i) {
    const std::uint64_t p = rv.primes[i];
    const auto xm = static_cast<std::uint64_t>(x % p);
    const auto mm = static_cast<std::uint64_t>(modulus % p);
    const std::uint64_t diff = (rv.residues[i] + p - xm) % p;
    const std::uint64_t step = mul_mod(diff, pow_mod(mm, p - 2, p), p);
    x += modulus * step;
    modulus *= p;
  }
  return x;
}

class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not prime");
    if (p >= (1ULL << 62)) throw std::invalid_argument("PrimeField: modulus too large");
  }

  std::uint64_t characteristic() const { return p_; }
  std::uint64_t order() const { return p_; }
  int degree() const { return 1; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_uint(std::uint64_t v) const { return v % p_; }
  bool is_zero(value_type a) const { return a == 0; }

  value_type add(value_type a, value_type b) const {
    const value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return mul_mod(a, b, p_); }
  value_type pow(value_type a, std::uint64_t e) const { return pow_mod(a, e, p_); }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
    return pow_mod(a, p_ - 2, p_);
  }

  // Canonical enumeration: element i is the residue i.
  value_type element(std::uint64_t index) const {
    if (index >= p_) throw std::out_of_range("PrimeField: element index out of range");
    return index;
  }
  std::uint64_t index_of(value_type a) const { return a; }
  value_type random(Rng& rng) const { return rng.below(p_); }

 private:
  std::uint64_t p_;
};

template <class Field>
using Matrix = std::vector<std::vector<typename Field::value_type>>;

// Gauss-Jordan elimination on the first `pivot_cols` columns. Returns the
// pivot column of each pivot row, in order.
template <class Field>
std::vector<std::size_t> row_reduce(const Field& f, Matrix<Field>& a, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const std::size_t rows = a.size();
  for (std::size_t col = 0; col < pivot_cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && f.is_zero(a[sel][col])) ++sel;
    if (sel == rows) continue;
    std::swap(a[row], a[sel]);
    const auto scale = f.inv(a[row][col]);
    for (auto& v : a[row]) v = f.mul(v, scale);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || f.is_zero(a[r][col])) continue;
      const auto factor = a[r][col];
      for (std::size_t c = col; c < a[r].size(); ++c) {
        a[r][c] = f.sub(a[r][c], f.mul(factor, a[row][c]));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Some solution of A z = b (free variables set to zero), or nullopt if inconsistent.
template <class Field>
std::optional<std::vector<typename Field::value_type>> solve_linear(
    const Field& f, Matrix<Field> a, const std::vector<typename Field::value_type>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear: dimension mismatch");
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  const auto pivots = row_reduce(f, a, cols);
  for (std::size_t r = pivots.size(); r < a.size(); ++r) {
    if (!f.is_zero(a[r][cols])) return std::nullopt;
  }
  std::vector<typename Field::value_type> z(cols, f.zero());
  for (std::size_t r = 0; r < pivots.size(); ++r) z[pivots[r]] = a[r][cols];
  return z;
}

template <class Field>
std::optional<Matrix<Field>> invert_matrix(const Field& f, const Matrix<Field>& m) {
  const std::size_t n = m.size();
  Matrix<Field> a(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r].size() != n) throw std::invalid_argument("invert_matrix: matrix is not square");
    a[r] = m[r];
    a[r].resize(2 * n, f.zero());
    a[r][n + r] = f.one();
  }
  if (row_reduce(f, a, n).size() != n) return std::nullopt;
  Matrix<Field> inv(n);
  for (std::size_t r = 0; r < n; ++r) inv[r].assign(a[r].begin() + static_cast<std::ptrdiff_t>(n), a[r].end());
  return inv;
}

template <class Field>
Matrix<Field> multiply(const Field& f, const Matrix<Field>& a, const Matrix<Field>& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  Matrix<Field> out(a.size(), std::vector<typename Field::value_type>(cols, f.zero()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (f.is_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] = f.add(out[i][j], f.mul(a[i][k], b[k][j]));
    }
  }
  return out;
}

// F_{p^t} as F_p[x]/(m(x)). Elements are packed base-p digit strings: the
// value sum_i a_i p^i stands for sum_i a_i x^i. This packing is also the
// canonical enumeration order.
class ExtField {
 public:
  using value_type = std::uint64_t;
  static constexpr int kMaxDegree = 24;
  static constexpr std::uint64_t kMaxOrder = 1ULL << 24;

  ExtField(std::uint64_t p, int t) : base_(p), p_(p), t_(t) {
    if (t < 1) throw std::invalid_argument("ExtField: degree must be at least 1");
    unsigned __int128 q = 1;
    for (int i = 0; i < t; ++i) {
      q *= p;
      if (q > kMaxOrder) throw std::invalid_argument("ExtField: p^t exceeds 2^24");
    }
    order_ = static_cast<std::uint64_t>(q);
    modulus_ = find_modulus();
    find_normal_basis();
  }

  std::uint64_t characteristic() const { return p_; }
  std::uint64_t order() const { return order_; }
  int degree() const { return t_; }
  const PrimeField& base() const { return base_; }
  // Coefficients a_0..a_{t-1} of the monic modulus x^t + sum a_i x^i.
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_uint(std::uint64_t v) const { return v % p_; }
  value_type embed(PrimeField::value_type a) const { return a; }
  bool is_zero(value_type a) const { return a == 0; }
  bool in_base_field(value_type a) const { return a < p_; }

  value_type add(value_type a, value_type b) const {
    if (p_ == 2) return a ^ b;
    Digits da{}, db{};
    unpack(a, da);
    unpack(b, db);
    for (int i = 0; i < t_; ++i) da[i] = base_.add(da[i], db[i]);
    return pack(da);
  }
  value_type sub(value_type a, value_type b) const {
    if (p_ == 2) return a ^ b;
    Digits da{}, db{};
    unpack(a, da);
    unpack(b, db);
    for (int i = 0; i < t_; ++i) da[i] = base_.sub(da[i], db[i]);
    return pack(da);
  }
  value_type neg(value_type a) const { return sub(0, a); }

  value_type mul(value_type a, value_type b) const {
    if (a == 0 || b == 0) return 0;
    Digits da{}, db{};
    unpack(a, da);
    unpack(b, db);
    std::array<std::uint64_t, 2 * kMaxDegree> prod{};
    for (int i = 0; i < t_; ++i) {
      if (da[i] == 0) continue;
      for (int j = 0; j < t_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    }
    for (int deg = 2 * t_ - 2; deg >= t_; --deg) {
      const std::uint64_t lead = prod[deg];
      if (lead == 0) continue;
      prod[deg] = 0;
      for (int j = 0; j < t_; ++j) {
        prod[deg - t_ + j] = base_.sub(prod[deg - t_ + j], base_.mul(lead, modulus_[j]));
      }
    }
    Digits out{};
    for (int i = 0; i < t_; ++i) out[i] = prod[i];
    return pack(out);
  }

  value_type pow(value_type a, std::uint64_t e) const {
    value_type r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("ExtField: inverse of zero");
    return pow(a, order_ - 2);
  }
  value_type frobenius(value_type a) const { return pow(a, p_); }

  value_type element(std::uint64_t index) const {
    if (index >= order_) throw std::out_of_range("ExtField: element index out of range");
    return index;
  }
  std::uint64_t index_of(value_type a) const { return a; }
  value_type random(Rng& rng) const { return rng.below(order_); }

  std::vector<std::uint64_t> coefficients(value_type a) const {
    Digits d{};
    unpack(a, d);
    return {d.begin(), d.begin() + t_};
  }
  value_type from_coefficients(std::span<const std::uint64_t> c) const {
    if (static_cast<int>(c.size()) != t_) throw std::invalid_argument("ExtField: wrong coefficient count");
    Digits d{};
    for (int i = 0; i < t_; ++i) d[i] = c[static_cast<std::size_t>(i)] % p_;
    return pack(d);
  }

  value_type beta() const { return conjugates_[0]; }
  // beta^(p^i)
  value_type conjugate(int i) const { return conjugates_[static_cast<std::size_t>(i)]; }
  // Column i holds the power-basis coefficients of beta^(p^i).
  const Matrix<PrimeField>& basis_matrix() const { return basis_; }
  const Matrix<PrimeField>& inverse_matrix() const { return inverse_; }

  // Coordinates (x_0..x_{t-1}) with a = sum_i x_i beta^(p^i).
  std::vector<std::uint64_t> decompose(value_type a) const {
    const auto c = coefficients(a);
    std::vector<std::uint64_t> out(static_cast<std::size_t>(t_), 0);
    for (int r = 0; r < t_; ++r) {
      std::uint64_t acc = 0;
      for (int j = 0; j < t_; ++j) acc = base_.add(acc, base_.mul(inverse_[r][j], c[static_cast<std::size_t>(j)]));
      out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
  }

  value_type recompose(std::span<const std::uint64_t> coords) const {
    if (static_cast<int>(coords.size()) != t_) throw std::invalid_argument("ExtField: wrong coordinate count");
    std::vector<std::uint64_t> c(static_cast<std::size_t>(t_), 0);
    for (int r = 0; r < t_; ++r) {
      std::uint64_t acc = 0;
      for (int j = 0; j < t_; ++j) acc = base_.add(acc, base_.mul(basis_[r][j], coords[static_cast<std::size_t>(j)] % p_));
      c[static_cast<std::size_t>(r)] = acc;
    }
    return from_coefficients(c);
  }

 private:
  using Digits = std::array<std::uint64_t, kMaxDegree>;

  void unpack(value_type v, Digits& d) const {
    for (int i = 0; i < t_; ++i) {
      d[i] = v % p_;
      v /= p_;
    }
  }
  value_type pack(const Digits& d) const {
    value_type v = 0;
    for (int i = t_ - 1; i >= 0; --i) v = v * p_ + d[i];
    return v;
  }

  // Remainder of f modulo a monic g (coefficients low to high, g's leading 1 included).
  std::vector<std::uint64_t> poly_rem(std::vector<std::uint64_t> f, const std::vector<std::uint64_t>& g) const {
    const std::size_t dg = g.size() - 1;
    for (std::size_t deg = f.size(); deg-- > dg;) {
      const std::uint64_t lead = f[deg];
      if (lead == 0) continue;
      for (std::size_t j = 0; j <= dg; ++j) {
        f[deg - dg + j] = base_.sub(f[deg - dg + j], base_.mul(lead, g[j]));
      }
    }
    f.resize(dg);
    return f;
  }

  bool irreducible(const std::vector<std::uint64_t>& monic) const {
    const int deg = static_cast<int>(monic.size()) - 1;
    for (int d = 1; 2 * d <= deg; ++d) {
      const std::uint64_t count = ipow(p_, static_cast<unsigned>(d));
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<std::uint64_t> g(static_cast<std::size_t>(d) + 1, 0);
        std::uint64_t v = idx;
        for (int i = 0; i < d; ++i) {
          g[static_cast<std::size_t>(i)] = v % p_;
          v /= p_;
        }
        g[static_cast<std::size_t>(d)] = 1;
        const auto r = poly_rem(monic, g);
        if (std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; })) return false;
      }
    }
    return true;
  }

  // Smallest irreducible monic modulus, ordering candidates by (a_{t-1}, ..., a_0).
  std::vector<std::uint64_t> find_modulus() const {
    for (std::uint64_t idx = 0; idx < order_; ++idx) {
      std::vector<std::uint64_t> f(static_cast<std::size_t>(t_) + 1, 0);
      std::uint64_t v = idx;
      for (int i = 0; i < t_; ++i) {
        f[static_cast<std::size_t>(i)] = v % p_;
        v /= p_;
      }
      f[static_cast<std::size_t>(t_)] = 1;
      if (irreducible(f)) {
        f.pop_back();
        return f;
      }
    }
    throw std::logic_error("ExtField: no irreducible modulus found");
  }

  void find_normal_basis() {
    for (std::uint64_t idx = 1; idx < order_; ++idx) {
      std::vector<value_type> conj(static_cast<std::size_t>(t_));
      conj[0] = idx;
      for (int i = 1; i < t_; ++i) conj[static_cast<std::size_t>(i)] = frobenius(conj[static_cast<std::size_t>(i - 1)]);
      Matrix<PrimeField> m(static_cast<std::size_t>(t_), std::vector<std::uint64_t>(static_cast<std::size_t>(t_), 0));
      for (int col = 0; col < t_; ++col) {
        const auto c = coefficients(conj[static_cast<std::size_t>(col)]);
        for (int row = 0; row < t_; ++row) m[row][col] = c[static_cast<std::size_t>(row)];
      }
      auto inv = invert_matrix(base_, m);
      if (inv) {
        conjugates_ = std::move(conj);
        basis_ = std::move(m);
        inverse_ = std::move(*inv);
        return;
      }
    }
    throw std::logic_error("ExtField: no normal basis generator found");
  }

  PrimeField base_;
  std::uint64_t p_;
  int t_;
  std::uint64_t order_ = 0;
  std::vector<std::uint64_t> modulus_;
  std::vector<value_type> conjugates_;
  Matrix<PrimeField> basis_;
  Matrix<PrimeField> inverse_;
};

inline ExtField find_normal_basis(std::uint64_t p, int t) { return ExtField(p, t); }

inline std::vector<std::uint64_t> ext_decompose(ExtField::value_type x, const ExtField& ctx) {
  return ctx.decompose(x);
}

inline ExtField::value_type ext_recompose(std::span<const std::uint64_t> coords, const ExtField& ctx) {
  return ctx.recompose(coords);
}

template <class Field>
typename Field::value_type poly_eval(const Field& f, std::span<const typename Field::value_type> coeffs,
                                     typename Field::value_type x) {
  auto acc = f.zero();
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, x), coeffs[i]);
  return acc;
}

template <class Field>
using Point = std::pair<typename Field::value_type, typename Field::value_type>;

// Berlekamp-Welch: the polynomial h of degree <= deg_bound agreeing with all
// but at most floor((m - deg_bound - 1) / 2) points, or nullopt when no such
// h is found. Coefficients are returned low to high.
template <class Field>
std::optional<std::vector<typename Field::value_type>> berlekamp_welch(const Field& f,
                                                                        std::span<const Point<Field>> points,
                                                                        int deg_bound) {
  using V = typename Field::value_type;
  const int m = static_cast<int>(points.size());
  if (deg_bound < 0 || m < deg_bound + 1) throw std::invalid_argument("berlekamp_welch: too few points");
  {
    std::vector<std::uint64_t> xs;
    for (const auto& pt : points) {
      if (f.is_zero(pt.first)) throw std::invalid_argument("berlekamp_welch: evaluation point is zero");
      xs.push_back(f.index_of(pt.first));
    }
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
      throw std::invalid_argument("berlekamp_welch: evaluation points are not distinct");
    }
  }
  const int e = (m - deg_bound - 1) / 2;
  const int q_terms = e + deg_bound + 1;
  Matrix<Field> a(static_cast<std::size_t>(m), std::vector<V>(static_cast<std::size_t>(q_terms + e), f.zero()));
  std::vector<V> b(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto [x, y] = points[static_cast<std::size_t>(i)];
    auto& row = a[static_cast<std::size_t>(i)];
    V power = f.one();
    for (int j = 0; j < q_terms; ++j) {
      row[static_cast<std::size_t>(j)] = power;
      if (j < e) row[static_cast<std::size_t>(q_terms + j)] = f.neg(f.mul(y, power));
      if (j == e) b[static_cast<std::size_t>(i)] = f.mul(y, power);
      power = f.mul(power, x);
    }
  }
  const auto sol = solve_linear(f, std::move(a), b);
  if (!sol) return std::nullopt;

  std::vector<V> q(sol->begin(), sol->begin() + q_terms);
  std::vector<V> locator(sol->begin() + q_terms, sol->end());
  locator.push_back(f.one());

  // Divide q by the monic locator.
  std::vector<V> quotient(static_cast<std::size_t>(deg_bound + 1), f.zero());
  for (int deg = q_terms - 1; deg >= e; --deg) {
    const V lead = q[static_cast<std::size_t>(deg)];
    quotient[static_cast<std::size_t>(deg - e)] = lead;
    if (f.is_zero(lead)) continue;
    for (int j = 0; j <= e; ++j) {
      auto& slot = q[static_cast<std::size_t>(deg - e + j)];
      slot = f.sub(slot, f.mul(lead, locator[static_cast<std::size_t>(j)]));
    }
  }
  for (int j = 0; j < e; ++j) {
    if (!f.is_zero(q[static_cast<std::size_t>(j)])) return std::nullopt;
  }
  int disagreements = 0;
  for (const auto& [x, y] : points) {
    if (poly_eval<Field>(f, quotient, x) != y) ++disagreements;
  }
  if (disagreements > e) return std::nullopt;
  return quotient;
}

// h(0) for the decoded polynomial, or nullopt on decoding failure.
template <class Field>
std::optional<typename Field::value_type> berlekamp_welch_decode(const Field& f,
                                                                 std::span<const Point<Field>> points,
                                                                 int deg_bound) {
  const auto h = berlekamp_welch(f, points, deg_bound);
  if (!h) return std::nullopt;
  return (*h)[0];
}

}  // namespace erclique
