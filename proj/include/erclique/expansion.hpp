#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "erclique/fields.hpp"
#include "erclique/random.hpp"

namespace erclique {

// Law of sum_i 2^i Z_i mod p for independent Z_i ~ Ber(qs[i]), i = 0..t.
struct ExpansionSpec {
  std::uint64_t p = 2;
  double c = 0.5;
  int t = 0;
  std::vector<double> qs;

  static ExpansionSpec uniform(std::uint64_t p, double c, int t, double q) {
    return ExpansionSpec{p, c, t, std::vector<double>(static_cast<std::size_t>(t) + 1, q)};
  }
  static ExpansionSpec uniform(std::uint64_t p, double c, int t) { return uniform(p, c, t, c); }

  int bit_count() const { return t + 1; }

  void validate() const {
    if (!is_prime(p)) throw std::invalid_argument("ExpansionSpec: modulus is not prime");
    if (!(c > 0.0 && c <= 0.5)) throw std::invalid_argument("ExpansionSpec: c must lie in (0, 1/2]");
    if (t < 0) throw std::invalid_argument("ExpansionSpec: t must be nonnegative");
    if (qs.size() != static_cast<std::size_t>(t) + 1) throw std::invalid_argument("ExpansionSpec: need t+1 biases");
    for (double q : qs) {
      if (!(q >= c - 1e-15 && q <= 1.0 - c + 1e-15)) throw std::invalid_argument("ExpansionSpec: bias outside [c, 1-c]");
    }
  }
};

// The bias bound in (0, 1/2] covering edge probability c.
inline double bias_bound(double c) { return std::min(c, 1.0 - c); }

class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

inline void append_bit(std::vector<double>& f, std::uint64_t shift, double q) {
  const std::size_t p = f.size();
  std::vector<double> next(p);
  for (std::size_t x = 0; x < p; ++x) {
    const std::size_t from = (x + p - shift) % p;
    KahanSum s;
    s.add((1.0 - q) * f[x]);
    s.add(q * f[from]);
    next[x] = s.value();
  }
  f.swap(next);
}

}  // namespace detail

// f[x] = P[sum_i 2^i Z_i = x mod p], one convolution step per bit.
inline std::vector<double> exact_distribution(const ExpansionSpec& spec) {
  spec.validate();
  std::vector<double> f(spec.p, 0.0);
  f[0] = 1.0;
  std::uint64_t shift = 1 % spec.p;
  for (int i = 0; i <= spec.t; ++i) {
    detail::append_bit(f, shift, spec.qs[static_cast<std::size_t>(i)]);
    shift = (2 * shift) % spec.p;
  }
  return f;
}

inline double tv_to_uniform(std::span<const double> f) {
  const double u = 1.0 / static_cast<double>(f.size());
  KahanSum s;
  for (double v : f) s.add(std::fabs(v - u));
  return 0.5 * s.value();
}

inline double distribution_total(std::span<const double> f) {
  KahanSum s;
  for (double v : f) s.add(v);
  return s.value();
}

// TV to uniform for unbiased bits: a(p-a) / (2^(t+1) p) with a = 2^(t+1) mod p.
inline double closed_form_tv_half(std::uint64_t p, int t) {
  const std::uint64_t a = pow_mod(2, static_cast<std::uint64_t>(t) + 1, p);
  return static_cast<double>(a) * static_cast<double>(p - a) / (std::ldexp(1.0, t + 1) * static_cast<double>(p));
}

// t = ceil(ln(4 eps^2 / p) / ln(1 - 3c(1-c))) * ceil(1 + log2(p / 3)), natural logs.
inline int required_t_mod_p(std::uint64_t p, double c, double eps) {
  if (p <= 2 || !is_prime(p)) throw std::invalid_argument("required_t_mod_p: p must be an odd prime");
  if (!(c > 0.0 && c <= 0.5)) throw std::invalid_argument("required_t_mod_p: c must lie in (0, 1/2]");
  if (!(eps > 0.0)) throw std::invalid_argument("required_t_mod_p: eps must be positive");
  const double pd = static_cast<double>(p);
  const double rounds = std::ceil(std::log(4.0 * eps * eps / pd) / std::log(1.0 - 3.0 * c * (1.0 - c)));
  const double width = std::ceil(1.0 + std::log2(pd / 3.0));
  return static_cast<int>(std::max(0.0, rounds * width));
}

// t = ceil(ln(eps/2) / ln|1 - 2c|) + 1; a single bit suffices when c = 1/2.
inline int required_t_mod_2(double c, double eps) {
  if (!(c > 0.0 && c <= 0.5)) throw std::invalid_argument("required_t_mod_2: c must lie in (0, 1/2]");
  if (!(eps > 0.0)) throw std::invalid_argument("required_t_mod_2: eps must be positive");
  if (c == 0.5) return 0;
  const double t = std::ceil(std::log(eps / 2.0) / std::log(std::fabs(1.0 - 2.0 * c))) + 1.0;
  return static_cast<int>(std::max(0.0, t));
}

// Smallest t whose exact distribution is within TV 1/p of uniform, all biases q.
inline int minimal_t_mod_p(std::uint64_t p, double q) {
  if (!is_prime(p)) throw std::invalid_argument("minimal_t_mod_p: p must be prime");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("minimal_t_mod_p: bias must lie in (0, 1)");
  std::vector<double> f(p, 0.0);
  f[0] = 1.0;
  std::uint64_t shift = 1 % p;
  const double target = 1.0 / static_cast<double>(p);
  for (int t = 0; t < 100000; ++t) {
    detail::append_bit(f, shift, q);
    shift = (2 * shift) % p;
    if (tv_to_uniform(f) < target) return t;
  }
  throw std::runtime_error("minimal_t_mod_p: no admissible length found");
}

// P[sum Z_i = r mod 2] = 1/2 + (-1)^r prod(1 - 2 q_i) / 2.
inline double parity_probability(std::span<const double> qs, int r) {
  double prod = 1.0;
  for (double q : qs) prod *= 1.0 - 2.0 * q;
  return r % 2 == 0 ? 0.5 + 0.5 * prod : 0.5 - 0.5 * prod;
}

// Rejection sampler for the bits conditioned on sum_i 2^i Z_i = x mod p.
class ModPExpansionSampler {
 public:
  ModPExpansionSampler(ExpansionSpec spec, double delta) : spec_(std::move(spec)), delta_(delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("expansion sampler: delta must lie in (0, 1)");
    dist_ = exact_distribution(spec_);
    tv_ = tv_to_uniform(dist_);
    const double slack = 1.0 / static_cast<double>(spec_.p) - tv_;
    if (!(slack > 0.0)) {
      throw std::invalid_argument("expansion sampler: distribution is not within 1/p of uniform");
    }
    const double rounds = std::ceil(std::log(delta) / std::log(1.0 - slack));
    max_rounds_ = static_cast<std::uint64_t>(std::max(1.0, rounds));
    shifts_.resize(static_cast<std::size_t>(spec_.t) + 1);
    std::uint64_t shift = 1 % spec_.p;
    for (auto& sft : shifts_) {
      sft = shift;
      shift = (2 * shift) % spec_.p;
    }
  }

  const ExpansionSpec& spec() const { return spec_; }
  double tv() const { return tv_; }
  const std::vector<double>& distribution() const { return dist_; }
  std::uint64_t max_rounds() const { return max_rounds_; }

  // Writes bits X_0..X_t into out; false after max_rounds rejections.
  bool sample_into(std::uint64_t x, Rng& rng, std::span<std::uint8_t> out) const {
    if (x >= spec_.p) throw std::invalid_argument("expansion sampler: residue out of range");
    const std::size_t nbits = shifts_.size();
    for (std::uint64_t round = 0; round < max_rounds_; ++round) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < nbits; ++i) {
        const bool z = rng.bernoulli(spec_.qs[i]);
        out[i] = z ? 1 : 0;
        if (z) {
          acc += shifts_[i];
          if (acc >= spec_.p) acc -= spec_.p;
        }
      }
      if (acc == x) return true;
    }
    return false;
  }

  std::optional<std::vector<std::uint8_t>> sample(std::uint64_t x, Rng& rng) const {
    std::vector<std::uint8_t> out(shifts_.size());
    if (!sample_into(x, rng, out)) return std::nullopt;
    return out;
  }

 private:
  ExpansionSpec spec_;
  double delta_;
  std::vector<double> dist_;
  double tv_ = 0;
  std::uint64_t max_rounds_ = 0;
  std::vector<std::uint64_t> shifts_;
};

inline std::optional<std::vector<std::uint8_t>> sample_expansion_mod_p(std::uint64_t x, const ExpansionSpec& spec,
                                                                      double delta, std::uint64_t seed) {
  ModPExpansionSampler sampler(spec, delta);
  Rng rng(seed);
  return sampler.sample(x, rng);
}

// Rejection sampler for t+1 Ber(q) bits conditioned on their parity.
class Mod2ExpansionSampler {
 public:
  Mod2ExpansionSampler(double c, int t, double eps, double q) : c_(c), t_(t), q_(q) {
    if (t < required_t_mod_2(c, eps)) throw std::invalid_argument("mod-2 sampler: t below the required length");
    if (!(q >= c - 1e-15 && q <= 1.0 - c + 1e-15)) throw std::invalid_argument("mod-2 sampler: bias outside [c, 1-c]");
    const std::vector<double> qs(static_cast<std::size_t>(t) + 1, q);
    const double worst = std::max(parity_probability(qs, 0), parity_probability(qs, 1));
    // A round is rejected with probability at most `worst`; failure budget eps / 2.
    const double rounds = worst >= 1.0 ? 1.0 : std::ceil(std::log(eps / 2.0) / std::log(worst));
    max_rounds_ = static_cast<std::uint64_t>(std::max(1.0, rounds));
  }
  Mod2ExpansionSampler(double c, int t, double eps) : Mod2ExpansionSampler(c, t, eps, c) {}

  int t() const { return t_; }
  std::uint64_t max_rounds() const { return max_rounds_; }

  bool sample_into(int r, Rng& rng, std::span<std::uint8_t> out) const {
    for (std::uint64_t round = 0; round < max_rounds_; ++round) {
      int parity = 0;
      for (int i = 0; i <= t_; ++i) {
        const bool z = rng.bernoulli(q_);
        out[static_cast<std::size_t>(i)] = z ? 1 : 0;
        parity ^= z ? 1 : 0;
      }
      if (parity == (r & 1)) return true;
    }
    return false;
  }

  std::optional<std::vector<std::uint8_t>> sample(int r, Rng& rng) const {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(t_) + 1);
    if (!sample_into(r, rng, out)) return std::nullopt;
    return out;
  }

 private:
  double c_;
  int t_;
  double q_;
  std::uint64_t max_rounds_ = 0;
};

inline std::optional<std::vector<std::uint8_t>> sample_expansion_mod_2(int r, double c, int t, double eps,
                                                                      std::uint64_t seed) {
  Mod2ExpansionSampler sampler(c, t, eps);
  Rng rng(seed);
  return sampler.sample(r, rng);
}

}  // namespace erclique
