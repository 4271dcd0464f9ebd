#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "erclique/expansion.hpp"

using namespace erclique;

namespace {

// Law of the bit vector (packed little-endian) for independent Ber(qs[i]) bits.
std::vector<double> product_law(const std::vector<double>& qs) {
  const std::size_t bits = qs.size();
  std::vector<double> law(std::size_t{1} << bits, 1.0);
  for (std::size_t z = 0; z < law.size(); ++z) {
    for (std::size_t i = 0; i < bits; ++i) law[z] *= (z >> i) & 1 ? qs[i] : 1 - qs[i];
  }
  return law;
}

std::uint64_t residue_of(std::size_t z, std::size_t bits, std::uint64_t p) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < bits; ++i) {
    if ((z >> i) & 1) r = (r + (std::uint64_t{1} << i)) % p;
  }
  return r;
}

// Residue law by enumerating all 2^(t+1) bit vectors.
std::vector<double> enumerated_distribution(const ExpansionSpec& spec) {
  const auto law = product_law(spec.qs);
  std::vector<double> f(spec.p, 0.0);
  for (std::size_t z = 0; z < law.size(); ++z) f[residue_of(z, spec.qs.size(), spec.p)] += law[z];
  return f;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
  return d / 2;
}

}  // namespace

TEST(ExactDistribution, SpecExamples) {
  const auto f1 = exact_distribution(ExpansionSpec::uniform(3, 0.5, 0));
  ASSERT_EQ(f1.size(), 3u);
  EXPECT_DOUBLE_EQ(f1[0], 0.5);
  EXPECT_DOUBLE_EQ(f1[1], 0.5);
  EXPECT_DOUBLE_EQ(f1[2], 0.0);
  const auto f2 = exact_distribution(ExpansionSpec::uniform(5, 0.5, 3));
  const std::vector<double> expected{4 / 16.0, 3 / 16.0, 3 / 16.0, 3 / 16.0, 3 / 16.0};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(f2[static_cast<std::size_t>(i)], expected[static_cast<std::size_t>(i)], 1e-15);
  EXPECT_NEAR(tv_to_uniform(f2), 0.05, 1e-15);
  EXPECT_NEAR(closed_form_tv_half(5, 3), 0.05, 1e-15);
}

TEST(ExactDistribution, MatchesEnumeration) {
  Rng rng(3);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL, 31ULL}) {
    for (int t = 0; t < 12; ++t) {
      const double c = 0.05 + 0.45 * rng.uniform01();
      ExpansionSpec spec{p, c, t, {}};
      for (int i = 0; i <= t; ++i) spec.qs.push_back(c + (1 - 2 * c) * rng.uniform01());
      const auto dp = exact_distribution(spec);
      const auto en = enumerated_distribution(spec);
      for (std::size_t x = 0; x < p; ++x) EXPECT_NEAR(dp[x], en[x], 1e-13);
    }
  }
}

TEST(ExactDistribution, NormalizedAndTvNonIncreasing) {
  Rng rng(17);
  const std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 31, 73, 131};
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t p = primes[rng.below(primes.size())];
    const double c = 0.02 + 0.48 * rng.uniform01();
    ExpansionSpec spec{p, c, 0, {c + (1 - 2 * c) * rng.uniform01()}};
    double prev = tv_to_uniform(exact_distribution(spec));
    for (int t = 1; t < 40; ++t) {
      spec.t = t;
      spec.qs.push_back(c + (1 - 2 * c) * rng.uniform01());
      const auto f = exact_distribution(spec);
      EXPECT_NEAR(distribution_total(f), 1.0, 1e-12);
      for (double v : f) EXPECT_GE(v, 0.0);
      const double now = tv_to_uniform(f);
      EXPECT_LE(now, prev + 1e-15);
      prev = now;
    }
  }
}

TEST(ExactDistribution, ClosedFormForUnbiasedBits) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 13ULL, 31ULL, 73ULL, 127ULL}) {
    for (int t = 0; t < 60; ++t) {
      const auto f = exact_distribution(ExpansionSpec::uniform(p, 0.5, t));
      EXPECT_NEAR(tv_to_uniform(f), closed_form_tv_half(p, t), 1e-12) << p << " " << t;
    }
  }
}

TEST(RequiredLength, SpecExampleAndMonotonicity) {
  EXPECT_EQ(required_t_mod_p(5, 0.5, 0.01), 14);
  for (std::uint64_t p : {5ULL, 7ULL, 13ULL, 31ULL}) {
    for (double c : {0.1, 0.3, 0.5}) {
      EXPECT_GE(required_t_mod_p(p, c, 0.001), required_t_mod_p(p, c, 0.01));
      EXPECT_GE(required_t_mod_p(p, c / 2, 0.01), required_t_mod_p(p, c, 0.01));
    }
  }
  EXPECT_THROW(required_t_mod_p(2, 0.5, 0.01), std::invalid_argument);
  EXPECT_THROW(required_t_mod_p(9, 0.5, 0.01), std::invalid_argument);
  EXPECT_THROW(required_t_mod_p(5, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(required_t_mod_p(5, 0.6, 0.01), std::invalid_argument);
}

TEST(RequiredLength, CertifiesTvBound) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 13ULL, 31ULL, 73ULL}) {
    for (double c : {0.05, 0.1, 0.3, 0.5}) {
      for (double eps : {0.1, 0.01, 0.001}) {
        const int t = required_t_mod_p(p, c, eps);
        EXPECT_LE(tv_to_uniform(exact_distribution(ExpansionSpec::uniform(p, c, t))), eps);
        // Any per-bit biases inside [c, 1-c] are covered as well.
        ExpansionSpec mixed{p, c, t, {}};
        for (int i = 0; i <= t; ++i) mixed.qs.push_back(i % 2 ? c : 1 - c);
        EXPECT_LE(tv_to_uniform(exact_distribution(mixed)), eps);
      }
    }
  }
}

TEST(RequiredLength, ModTwoAndMinimal) {
  EXPECT_EQ(required_t_mod_2(0.5, 0.01), 0);
  EXPECT_EQ(required_t_mod_2(0.3, 0.05), static_cast<int>(std::ceil(std::log(0.025) / std::log(0.4))) + 1);
  for (std::uint64_t p : {5ULL, 13ULL, 73ULL}) {
    for (double q : {0.3, 0.5}) {
      const int t = minimal_t_mod_p(p, q);
      EXPECT_LT(tv_to_uniform(exact_distribution(ExpansionSpec::uniform(p, bias_bound(q), t, q))), 1.0 / static_cast<double>(p));
      if (t > 0) {
        EXPECT_GE(tv_to_uniform(exact_distribution(ExpansionSpec::uniform(p, bias_bound(q), t - 1, q))), 1.0 / static_cast<double>(p));
      }
    }
  }
}

TEST(ParityProbability, EnumerationIdentity) {
  const std::vector<double> qs(4, 0.3);
  const auto law = product_law(qs);
  double even = 0;
  for (std::size_t z = 0; z < law.size(); ++z) {
    if (std::popcount(z) % 2 == 0) even += law[z];
  }
  EXPECT_NEAR(even, 0.5128, 1e-12);
  EXPECT_NEAR(parity_probability(qs, 0), even, 1e-15);
  EXPECT_NEAR(parity_probability(qs, 1), 0.4872, 1e-12);
}

TEST(ModPSampler, HardCongruence) {
  const auto spec = ExpansionSpec::uniform(3, 0.5, required_t_mod_p(3, 0.5, 0.01));
  ModPExpansionSampler zero(spec, 1e-6);
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto bits = zero.sample(0, rng);
    ASSERT_TRUE(bits);
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < bits->size(); ++j) r = (r + (*bits)[j] * pow_mod(2, j, 3)) % 3;
    EXPECT_EQ(r, 0u);
  }
  // 10^5 samples over random residues and biases, zero violations.
  const auto spec13 = ExpansionSpec::uniform(13, 0.3, 40);
  ModPExpansionSampler sampler(spec13, 1e-9);
  int violations = 0;
  std::vector<std::uint8_t> out(41);
  for (int i = 0; i < 100000; ++i) {
    const std::uint64_t x = rng.below(13);
    if (!sampler.sample_into(x, rng, out)) continue;
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < out.size(); ++j) r = (r + out[j] * pow_mod(2, j, 13)) % 13;
    violations += r != x;
  }
  EXPECT_EQ(violations, 0);
}

TEST(ModPSampler, RejectsTooShortExpansions) {
  EXPECT_THROW(ModPExpansionSampler(ExpansionSpec::uniform(13, 0.5, 1), 0.01), std::invalid_argument);
  EXPECT_THROW(ModPExpansionSampler(ExpansionSpec::uniform(5, 0.5, 10), 0.0), std::invalid_argument);
  EXPECT_THROW(ModPExpansionSampler(ExpansionSpec::uniform(5, 0.5, 10), 0.5).sample(5, *std::make_unique<Rng>(1)),
               std::invalid_argument);
}

TEST(ModPSampler, ConditionalLaw) {
  const auto spec = ExpansionSpec::uniform(5, 0.3, 4);
  ModPExpansionSampler sampler(spec, 1e-9);
  const auto law = product_law(spec.qs);
  std::vector<double> cond(law.size(), 0.0);
  double mass = 0;
  for (std::size_t z = 0; z < law.size(); ++z) {
    if (residue_of(z, 5, 5) == 2) {
      cond[z] = law[z];
      mass += law[z];
    }
  }
  for (double& v : cond) v /= mass;
  std::vector<double> emp(law.size(), 0.0);
  Rng rng(23);
  int accepted = 0;
  std::vector<std::uint8_t> out(5);
  while (accepted < 100000) {
    if (!sampler.sample_into(2, rng, out)) continue;
    std::size_t z = 0;
    for (std::size_t i = 0; i < 5; ++i) z |= static_cast<std::size_t>(out[i]) << i;
    emp[z] += 1;
    ++accepted;
  }
  for (double& v : emp) v /= accepted;
  EXPECT_LT(tv(emp, cond), 0.02);
}

TEST(ModPSampler, UniformResidueCompositionNearProductLaw) {
  const auto spec = ExpansionSpec::uniform(5, 0.5, 4);
  ModPExpansionSampler sampler(spec, 1e-6);
  const auto law = product_law(spec.qs);
  std::vector<double> emp(law.size(), 0.0);
  Rng rng(29);
  const int draws = 100000;
  std::vector<std::uint8_t> out(5);
  int failures = 0;
  for (int i = 0; i < draws; ++i) {
    if (!sampler.sample_into(rng.below(5), rng, out)) {
      ++failures;
      continue;
    }
    std::size_t z = 0;
    for (std::size_t j = 0; j < 5; ++j) z |= static_cast<std::size_t>(out[j]) << j;
    emp[z] += 1;
  }
  for (double& v : emp) v /= draws - failures;
  // Exact composed law is at TV Delta from the product law; 0.015 covers sampling noise.
  EXPECT_LT(tv(emp, law), sampler.tv() + 1e-6 + 0.015);
}

TEST(Mod2Sampler, UnbiasedPairs) {
  Mod2ExpansionSampler sampler(0.5, 1, 0.01);
  Rng rng(2);
  int count10 = 0, failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto bits = sampler.sample(1, rng);
    if (!bits) {
      ++failures;
      continue;
    }
    EXPECT_EQ(((*bits)[0] + (*bits)[1]) % 2, 1);
    count10 += (*bits)[0];
  }
  // Failure budget is eps / 2 per draw; allow 3 sigma of binomial noise.
  EXPECT_LE(failures / 10000.0, 0.005 + 3 * std::sqrt(0.005 / 10000.0));
  EXPECT_NEAR(count10 / static_cast<double>(10000 - failures), 0.5, 0.02);
  EXPECT_THROW(Mod2ExpansionSampler(0.3, 1, 0.05), std::invalid_argument);
}

TEST(Mod2Sampler, ParityAlwaysMatches) {
  const int t = required_t_mod_2(0.2, 0.01);
  Mod2ExpansionSampler sampler(0.2, t, 0.01);
  Rng rng(4);
  int violations = 0;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i < 100000; ++i) {
    const int r = static_cast<int>(rng.below(2));
    if (!sampler.sample_into(r, rng, out)) continue;
    int parity = 0;
    for (auto b : out) parity ^= b;
    violations += parity != r;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Mod2Sampler, JointLawNearProductAtBiasedBits) {
  const double c = 0.3, eps = 0.05;
  const int t = required_t_mod_2(c, eps);
  Mod2ExpansionSampler sampler(c, t, eps);
  const auto law = product_law(std::vector<double>(static_cast<std::size_t>(t) + 1, c));
  std::vector<double> emp(law.size(), 0.0);
  Rng rng(31);
  int accepted = 0;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i < 200000; ++i) {
    if (!sampler.sample_into(static_cast<int>(rng.below(2)), rng, out)) continue;
    std::size_t z = 0;
    for (std::size_t j = 0; j < out.size(); ++j) z |= static_cast<std::size_t>(out[j]) << j;
    emp[z] += 1;
    ++accepted;
  }
  for (double& v : emp) v /= accepted;
  EXPECT_LT(tv(emp, law), eps);
}

TEST(KahanSum, CompensatesSmallTerms) {
  KahanSum k;
  k.add(1.0);
  for (int i = 0; i < 1000000; ++i) k.add(1e-16);
  EXPECT_NEAR(k.value(), 1.0 + 1e-10, 1e-15);
}
