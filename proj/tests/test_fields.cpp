#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "erclique/fields.hpp"

using namespace erclique;

namespace {

// Independent prime-list oracle: trial division over consecutive integers.
std::vector<std::uint64_t> primes_above(std::uint64_t lower, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = lower + 1; out.size() < count; ++v) {
    bool prime = v >= 2;
    for (std::uint64_t d = 2; d * d <= v && prime; ++d) prime = v % d != 0;
    if (prime) out.push_back(v);
  }
  return out;
}

BigInt product(const std::vector<std::uint64_t>& xs) {
  BigInt p = 1;
  for (auto x : xs) p *= x;
  return p;
}

}  // namespace

TEST(SelectPrimes, SpecExamples) {
  EXPECT_EQ(select_primes(10, 4, 2), (std::vector<std::uint64_t>{73, 79, 83}));
  EXPECT_EQ(select_primes(2, 2, 2), (std::vector<std::uint64_t>{13}));
  EXPECT_EQ(select_primes(6, 3, 3), (std::vector<std::uint64_t>{13, 17}));
}

TEST(SelectPrimes, BoundProductAndMinimality) {
  for (int n = 2; n <= 12; ++n) {
    for (int k = 2; k <= std::min(n, 6); ++k) {
      for (int s = 2; s <= k; ++s) {
        const auto primes = select_primes(n, k, s);
        const std::uint64_t lower = 12 * binomial(k, s);
        ASSERT_FALSE(primes.empty());
        EXPECT_EQ(primes, primes_above(lower, primes.size()));
        const BigInt target = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
        EXPECT_GT(product(primes), target);
        std::vector<std::uint64_t> shorter(primes.begin(), primes.end() - 1);
        EXPECT_LE(product(shorter), target);
      }
    }
  }
}

TEST(SelectPrimes, RejectsInvalidParameters) {
  EXPECT_THROW(select_primes(3, 4, 2), std::invalid_argument);
  EXPECT_THROW(select_primes(5, 3, 1), std::invalid_argument);
}

TEST(Crt, SpecExamples) {
  EXPECT_EQ(crt_combine({{3, 5}, {2, 3}}), 8);
  EXPECT_EQ(crt_combine({{7}, {0}}), 0);
  const std::vector<std::uint64_t> primes{73, 79, 83};
  ResidueVector rv{primes, {}};
  for (auto p : primes) rv.residues.push_back(10000 % p);
  EXPECT_EQ(crt_combine(rv), 10000);
}

TEST(Crt, MatchesExhaustiveScan) {
  const std::vector<std::uint64_t> primes{3, 5, 7};
  for (std::uint64_t x = 0; x < 105; ++x) {
    ResidueVector rv{primes, {x % 3, x % 5, x % 7}};
    EXPECT_EQ(crt_combine(rv), x);
  }
}

TEST(Crt, RoundTripReducesToResidues) {
  Rng rng(11);
  const std::vector<std::uint64_t> primes{101, 103, 107, 109, 113, 127, 131, 137, 139, 149};
  for (int trial = 0; trial < 200; ++trial) {
    ResidueVector rv{primes, {}};
    for (auto p : primes) rv.residues.push_back(rng.below(p));
    const BigInt x = crt_combine(rv);
    EXPECT_LT(x, product(primes));
    for (std::size_t i = 0; i < primes.size(); ++i) EXPECT_EQ(x % primes[i], rv.residues[i]);
  }
}

TEST(Crt, RejectsMalformedVectors) {
  EXPECT_THROW(crt_combine({{3, 5}, {1}}), std::invalid_argument);
  EXPECT_THROW(crt_combine({{5, 5}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(crt_combine({{5}, {5}}), std::invalid_argument);
}

TEST(PrimeField, ArithmeticAgainstIntegers) {
  const PrimeField f(131);
  for (std::uint64_t a = 0; a < 131; a += 7) {
    for (std::uint64_t b = 0; b < 131; b += 5) {
      EXPECT_EQ(f.add(a, b), (a + b) % 131);
      EXPECT_EQ(f.sub(a, b), (a + 131 - b) % 131);
      EXPECT_EQ(f.mul(a, b), a * b % 131);
    }
    if (a != 0) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  }
  EXPECT_THROW(f.inv(0), std::domain_error);
  EXPECT_THROW(PrimeField(15), std::invalid_argument);
}

TEST(ExtField, DegreeOneIsBaseField) {
  const ExtField f(2, 1);
  EXPECT_EQ(f.order(), 2u);
  EXPECT_EQ(f.beta(), 1u);
  ASSERT_EQ(f.basis_matrix().size(), 1u);
  EXPECT_EQ(f.basis_matrix()[0][0], 1u);
}

TEST(ExtField, FourElementFieldMatchesTables) {
  // F_4 = {0, 1, g, g+1} with g^2 = g + 1; element index is the packed coefficient pair.
  const ExtField f(2, 2);
  const std::uint64_t g = 2;
  EXPECT_EQ(f.mul(g, g), 3u);
  EXPECT_EQ(f.mul(g, 3), 1u);
  EXPECT_EQ(f.add(g, 3), 1u);
  const auto b = f.beta();
  EXPECT_NE(b, 0u);
  // beta and beta^2 independent over F_2: distinct and both nonzero.
  EXPECT_NE(f.mul(b, b), b);
  EXPECT_NE(f.mul(b, b), 0u);
}

class ExtFieldProperties : public ::testing::TestWithParam<std::pair<std::uint64_t, int>> {};

TEST_P(ExtFieldProperties, FieldAxiomsAndNormalBasis) {
  const auto [p, t] = GetParam();
  const ExtField f(p, t);
  ASSERT_EQ(f.order(), ipow(p, static_cast<unsigned>(t)));
  Rng rng(p * 100 + static_cast<std::uint64_t>(t));
  for (int i = 0; i < 300; ++i) {
    const auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
    EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    EXPECT_EQ(f.add(f.sub(a, b), b), a);
    if (a != 0) EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
    // Frobenius is additive and multiplicative.
    EXPECT_EQ(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    EXPECT_EQ(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
    // a^(p^t) = a.
    EXPECT_EQ(f.pow(a, f.order()), a);
  }
  // Conjugates are successive Frobenius images of beta.
  for (int i = 0; i + 1 < t; ++i) EXPECT_EQ(f.conjugate(i + 1), f.frobenius(f.conjugate(i)));
  // basis_matrix * inverse_matrix = identity.
  const auto prod = multiply(f.base(), f.basis_matrix(), f.inverse_matrix());
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < t; ++c) EXPECT_EQ(prod[r][c], r == c ? 1u : 0u);
  }
  // Decompose/recompose round trip on 1000 random elements.
  for (int i = 0; i < 1000; ++i) {
    const auto x = f.random(rng);
    const auto coords = f.decompose(x);
    ASSERT_EQ(coords.size(), static_cast<std::size_t>(t));
    // Independent recomposition: sum of coords[i] * beta^(p^i) by repeated multiplication.
    std::uint64_t acc = 0;
    std::uint64_t conj = f.beta();
    for (int j = 0; j < t; ++j) {
      acc = f.add(acc, f.mul(f.embed(coords[static_cast<std::size_t>(j)]), conj));
      conj = f.pow(conj, p);
    }
    EXPECT_EQ(acc, x);
    EXPECT_EQ(ext_recompose(coords, f), x);
  }
  EXPECT_EQ(f.decompose(0), std::vector<std::uint64_t>(static_cast<std::size_t>(t), 0));
  auto unit = std::vector<std::uint64_t>(static_cast<std::size_t>(t), 0);
  unit[0] = 1;
  EXPECT_EQ(f.decompose(f.beta()), unit);
}

INSTANTIATE_TEST_SUITE_P(Fields, ExtFieldProperties,
                         ::testing::Values(std::make_pair(2ULL, 1), std::make_pair(2ULL, 2), std::make_pair(2ULL, 5),
                                           std::make_pair(2ULL, 6), std::make_pair(2ULL, 8), std::make_pair(3ULL, 2),
                                           std::make_pair(3ULL, 3), std::make_pair(5ULL, 2), std::make_pair(7ULL, 3)));

TEST(ExtField, CubicModulusHasNoRoots) {
  // Degree-3 modulus over F_3 is irreducible iff it has no root. Leading 1 is implicit.
  const ExtField f(3, 3);
  const auto& m = f.modulus();
  ASSERT_EQ(m.size(), 3u);
  for (std::uint64_t x = 0; x < 3; ++x) {
    std::uint64_t v = 1;
    for (std::size_t i = m.size(); i-- > 0;) v = (v * x + m[i]) % 3;
    EXPECT_NE(v, 0u);
  }
}

TEST(ExtField, DeterministicConstruction) {
  const ExtField a(3, 4), b(3, 4);
  EXPECT_EQ(a.beta(), b.beta());
  EXPECT_EQ(a.modulus(), b.modulus());
}

namespace {

std::vector<Point<PrimeField>> evaluate(const PrimeField& f, const std::vector<std::uint64_t>& h, int m) {
  std::vector<Point<PrimeField>> pts;
  for (int i = 1; i <= m; ++i) pts.emplace_back(f.element(static_cast<std::uint64_t>(i)), poly_eval(f, std::span<const std::uint64_t>(h), f.element(static_cast<std::uint64_t>(i))));
  return pts;
}

}  // namespace

TEST(BerlekampWelch, SpecExamples) {
  const PrimeField f(13);
  const std::vector<std::uint64_t> h{1, 1};
  auto pts = evaluate(f, h, 12);
  EXPECT_EQ(berlekamp_welch_decode(f, std::span<const Point<PrimeField>>(pts), 2), 1u);
  for (int i : {0, 3, 7, 10}) pts[static_cast<std::size_t>(i)].second = f.add(pts[static_cast<std::size_t>(i)].second, 5);
  EXPECT_EQ(berlekamp_welch_decode(f, std::span<const Point<PrimeField>>(pts), 2), 1u);
  const std::vector<std::uint64_t> constant{9};
  const auto cpts = evaluate(f, constant, 7);
  EXPECT_EQ(berlekamp_welch_decode(f, std::span<const Point<PrimeField>>(cpts), 2), 9u);
}

TEST(BerlekampWelch, RecoversWithMaximumCorruptions) {
  for (auto [p, d, m] : {std::tuple<std::uint64_t, int, int>{127, 3, 36}, {131, 6, 72}}) {
    const PrimeField f(p);
    Rng rng(p);
    const int deg = 2 * d;
    const int errors = (m - deg - 1) / 2;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::uint64_t> h(static_cast<std::size_t>(deg + 1));
      for (auto& c : h) c = f.random(rng);
      auto pts = evaluate(f, h, m);
      std::vector<int> idx(static_cast<std::size_t>(m));
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng.engine());
      for (int e = 0; e < errors; ++e) {
        auto& y = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(e)])].second;
        y = f.add(y, 1 + rng.below(p - 1));
      }
      const auto coeffs = berlekamp_welch(f, std::span<const Point<PrimeField>>(pts), deg);
      ASSERT_TRUE(coeffs.has_value());
      EXPECT_EQ(*coeffs, h);
    }
  }
}

TEST(BerlekampWelch, ReportsOverload) {
  // Two polynomials agreeing on half the points: beyond the radius, decode must not return the wrong one silently.
  const PrimeField f(131);
  const int deg = 4, m = 24;
  const std::vector<std::uint64_t> h{3, 1, 4, 1, 5};
  auto pts = evaluate(f, h, m);
  Rng rng(5);
  int failures = 0, wrong = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto bad = pts;
    for (int i = 0; i < 12; ++i) bad[static_cast<std::size_t>(i)].second = f.random(rng);
    const auto r = berlekamp_welch(f, std::span<const Point<PrimeField>>(bad), deg);
    if (!r) {
      ++failures;
    } else if (*r != h) {
      // Any returned polynomial must still be within the decoding radius of the data.
      int disagreements = 0;
      for (const auto& [t, y] : bad) disagreements += poly_eval(f, std::span<const std::uint64_t>(*r), t) != y;
      EXPECT_LE(disagreements, (m - deg - 1) / 2);
      ++wrong;
    }
  }
  EXPECT_GT(failures, 0);
}

TEST(BerlekampWelch, RejectsInvalidPoints) {
  const PrimeField f(13);
  std::vector<Point<PrimeField>> pts{{1, 2}, {1, 3}, {2, 4}};
  EXPECT_THROW(berlekamp_welch(f, std::span<const Point<PrimeField>>(pts), 1), std::invalid_argument);
  std::vector<Point<PrimeField>> zero{{0, 2}, {1, 3}, {2, 4}};
  EXPECT_THROW(berlekamp_welch(f, std::span<const Point<PrimeField>>(zero), 1), std::invalid_argument);
  std::vector<Point<PrimeField>> few{{1, 2}};
  EXPECT_THROW(berlekamp_welch(f, std::span<const Point<PrimeField>>(few), 1), std::invalid_argument);
}

TEST(BerlekampWelch, WorksOverExtensionField) {
  const ExtField f(2, 6);
  Rng rng(9);
  const int deg = 6, m = 36;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::uint64_t> h(deg + 1);
    for (auto& c : h) c = f.random(rng);
    std::vector<Point<ExtField>> pts;
    for (int i = 1; i <= m; ++i) pts.emplace_back(f.element(static_cast<std::uint64_t>(i)), poly_eval(f, std::span<const std::uint64_t>(h), f.element(static_cast<std::uint64_t>(i))));
    for (int e = 0; e < (m - deg - 1) / 2; ++e) pts[static_cast<std::size_t>(2 * e)].second ^= 1 + rng.below(63);
    EXPECT_EQ(berlekamp_welch_decode(f, std::span<const Point<ExtField>>(pts), deg), h[0]);
  }
}
