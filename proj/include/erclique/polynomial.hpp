#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "erclique/combinatorics.hpp"
#include "erclique/expansion.hpp"
#include "erclique/fields.hpp"
#include "erclique/hypergraph.hpp"
#include "erclique/random.hpp"

namespace erclique {

// Plain 64-bit integers, for evaluating the clique polynomial on 0/1 inputs.
struct IntegerRing {
  using value_type = std::uint64_t;
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const { return a + b; }
  value_type mul(value_type a, value_type b) const { return a * b; }
};

// Field-valued weights on the label-respecting edges of [n] x [k].
template <class Field>
struct WeightedKPartiteInput {
  EdgeIndex index;
  std::vector<typename Field::value_type> values;

  void validate(const Field& f) const {
    if (values.size() != index.size()) throw std::invalid_argument("weighted input: length differs from N");
    for (const auto& v : values) {
      if (v >= f.order()) throw std::invalid_argument("weighted input: entry not reduced into the field");
    }
  }
};

template <class Field>
WeightedKPartiteInput<Field> embed_indicators(const Field& f, const KPartiteHypergraph& g) {
  WeightedKPartiteInput<Field> out{g.index(), {}};
  out.values.reserve(g.indicators().size());
  for (auto b : g.indicators()) out.values.push_back(b ? f.one() : f.zero());
  return out;
}

namespace detail {

// Sum over tuples (u_1..u_k), u_i in part i, of the product of the weights of
// all C(k,s) edges spanned by the tuple. Parts are filled in order; each edge
// weight is multiplied in once its highest label is placed.
template <class Ring>
class CliquePolyEvaluator {
 public:
  using V = typename Ring::value_type;

  CliquePolyEvaluator(const Ring& ring, const EdgeIndex& index, std::span<const V> x)
      : ring_(ring), index_(index), x_(x), tuple_(static_cast<std::size_t>(index.k())),
        closing_(static_cast<std::size_t>(index.k())) {
    for (std::size_t r = 0; r < index.label_set_count(); ++r) {
      const auto& labels = index.label_set(r);
      closing_[static_cast<std::size_t>(labels.back())].push_back(r);
    }
  }

  V run() { return rec(0, ring_.one()); }

 private:
  V rec(int part, V acc) {
    V total = ring_.zero();
    const int n = index_.n();
    for (int u = 0; u < n; ++u) {
      tuple_[static_cast<std::size_t>(part)] = u;
      V prod = acc;
      for (std::size_t r : closing_[static_cast<std::size_t>(part)]) {
        std::size_t off = 0;
        for (int l : index_.label_set(r)) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(tuple_[static_cast<std::size_t>(l)]);
        prod = ring_.mul(prod, x_[r * index_.block_size() + off]);
        if (ring_.is_zero(prod)) break;
      }
      if (ring_.is_zero(prod)) continue;
      total = ring_.add(total, part + 1 == index_.k() ? prod : rec(part + 1, prod));
    }
    return total;
  }

  const Ring& ring_;
  const EdgeIndex& index_;
  std::span<const V> x_;
  std::vector<int> tuple_;
  std::vector<std::vector<std::size_t>> closing_;
};

}  // namespace detail

template <class Ring>
typename Ring::value_type eval_clique_poly(const Ring& ring, const EdgeIndex& index,
                                           std::span<const typename Ring::value_type> x) {
  if (x.size() != index.size()) throw std::invalid_argument("eval_clique_poly: input length differs from N");
  detail::CliquePolyEvaluator<Ring> ev(ring, index, x);
  return ev.run();
}

template <class Field>
typename Field::value_type eval_clique_poly(const Field& f, const WeightedKPartiteInput<Field>& x) {
  return eval_clique_poly(f, x.index, std::span<const typename Field::value_type>(x.values));
}

// k-clique count of a k-partite hypergraph via the polynomial over the integers.
inline std::uint64_t kpartite_clique_count(const KPartiteHypergraph& g) {
  std::vector<std::uint64_t> x(g.indicators().begin(), g.indicators().end());
  return eval_clique_poly(IntegerRing{}, g.index(), std::span<const std::uint64_t>(x));
}

struct SelfReduceStats {
  std::size_t points = 0;
  bool decoded = false;
};

// Queries eval_at along g(t) = x + t y1 + t^2 y2 at the first 12D nonzero field
// elements and decodes the degree <= 2D restriction; returns its value at t = 0.
template <class Field, class EvalAt>
std::optional<typename Field::value_type> random_self_reduce(const Field& f, const WeightedKPartiteInput<Field>& x,
                                                             EvalAt&& eval_at, Rng& rng,
                                                             SelfReduceStats* stats = nullptr) {
  using V = typename Field::value_type;
  x.validate(f);
  const std::size_t d = x.index.label_set_count();
  const std::size_t m = 12 * d;
  if (f.order() <= m) throw std::invalid_argument("random_self_reduce: field must have more than 12D elements");
  const std::size_t n = x.values.size();
  std::vector<V> y1(n), y2(n);
  for (auto& v : y1) v = f.random(rng);
  for (auto& v : y2) v = f.random(rng);
  std::vector<Point<Field>> points;
  points.reserve(m);
  std::vector<V> g(n);
  for (std::size_t j = 1; j <= m; ++j) {
    const V t = f.element(j);
    const V t2 = f.mul(t, t);
    for (std::size_t i = 0; i < n; ++i) g[i] = f.add(x.values[i], f.add(f.mul(t, y1[i]), f.mul(t2, y2[i])));
    points.emplace_back(t, eval_at(std::span<const V>(g)));
  }
  auto result = berlekamp_welch_decode(f, std::span<const Point<Field>>(points), static_cast<int>(2 * d));
  if (stats) {
    stats->points = m;
    stats->decoded = result.has_value();
  }
  return result;
}

template <class Field, class EvalAt>
std::optional<typename Field::value_type> random_self_reduce(const Field& f, const WeightedKPartiteInput<Field>& x,
                                                             EvalAt&& eval_at, std::uint64_t seed) {
  Rng rng(seed);
  return random_self_reduce(f, x, std::forward<EvalAt>(eval_at), rng);
}

// Number of expansion bits minus one.
struct ExpansionLength {
  enum class Policy { certified, minimal, fixed };
  Policy policy = Policy::certified;
  int fixed_t = 0;
};

// certified: the explicit bound for per-edge slack eps. minimal: the shortest
// expansion the mod-p sampler accepts (TV below 1/p); for p = 2 it coincides
// with certified. fixed: fixed_t.
inline int choose_expansion_t(std::uint64_t p, double c, double eps, const ExpansionLength& len) {
  if (len.policy == ExpansionLength::Policy::fixed) {
    if (len.fixed_t < 0) throw std::invalid_argument("expansion length must be nonnegative");
    return len.fixed_t;
  }
  if (p == 2) return required_t_mod_2(bias_bound(c), eps);
  if (len.policy == ExpansionLength::Policy::minimal) return minimal_t_mod_p(p, c);
  return required_t_mod_p(p, bias_bound(c), eps);
}

// Per-edge expansion bits, stored plane by plane: planes[b * N + j] is bit b of edge j.
struct ExpansionPlanes {
  int bits = 0;
  std::size_t edges = 0;
  std::vector<std::uint8_t> planes;

  std::uint8_t bit(int b, std::size_t j) const { return planes[static_cast<std::size_t>(b) * edges + j]; }
};

struct WeightedStats {
  int bits = 0;
  std::uint64_t er_calls = 0;
  bool sampler_failed = false;
};

// Draws a conditioned expansion for every entry of x; nullopt if any edge's sampler gives up.
inline std::optional<ExpansionPlanes> sample_expansions(const PrimeField& f, std::span<const std::uint64_t> x, double c,
                                                        double eps, int t, Rng& rng) {
  check_probability(c);
  ExpansionPlanes out{t + 1, x.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(t + 1) * x.size())};
  std::vector<std::uint8_t> tmp(static_cast<std::size_t>(t + 1));
  const std::uint64_t p = f.characteristic();
  if (p == 2) {
    const Mod2ExpansionSampler sampler(bias_bound(c), t, eps, c);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!sampler.sample_into(static_cast<int>(x[j] & 1), rng, tmp)) return std::nullopt;
      for (int b = 0; b <= t; ++b) out.planes[static_cast<std::size_t>(b) * x.size() + j] = tmp[static_cast<std::size_t>(b)];
    }
  } else {
    const ModPExpansionSampler sampler(ExpansionSpec::uniform(p, bias_bound(c), t, c), eps);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!sampler.sample_into(x[j], rng, tmp)) return std::nullopt;
      for (int b = 0; b <= t; ++b) out.planes[static_cast<std::size_t>(b) * x.size() + j] = tmp[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

// Sum over colorings a of w(a) * er_eval(Y^(a)), where block S of Y^(a) is
// plane a(S) of the expansions. w(a) = 2^(sum_S a(S)) for odd p and 1 for p = 2.
template <class ErEval>
std::uint64_t recombine_over_colorings(const PrimeField& f, const EdgeIndex& index, const ExpansionPlanes& planes,
                                       ErEval&& er_eval, std::uint64_t* calls = nullptr) {
  const std::size_t n = index.size();
  if (planes.edges != n) throw std::invalid_argument("recombine_over_colorings: plane length differs from N");
  const std::size_t d = index.label_set_count();
  const std::size_t block = index.block_size();
  const int colors = planes.bits;
  const bool binary = f.characteristic() == 2;
  std::vector<std::uint64_t> pow2(d * static_cast<std::size_t>(colors) + 1);
  pow2[0] = 1 % f.characteristic();
  for (std::size_t i = 1; i < pow2.size(); ++i) pow2[i] = f.add(pow2[i - 1], pow2[i - 1]);

  std::vector<int> a(d, 0);
  std::vector<std::uint8_t> y(planes.planes.begin(), planes.planes.begin() + static_cast<std::ptrdiff_t>(n));
  auto load_block = [&](std::size_t r, int color) {
    const auto* src = planes.planes.data() + static_cast<std::size_t>(color) * n + r * block;
    std::copy(src, src + block, y.begin() + static_cast<std::ptrdiff_t>(r * block));
  };
  std::size_t weight = 0;
  std::uint64_t total = 0;
  std::uint64_t evaluations = 0;
  for (;;) {
    const std::uint64_t value = f.from_uint(er_eval(std::span<const std::uint8_t>(y)));
    ++evaluations;
    total = f.add(total, binary ? value : f.mul(pow2[weight], value));
    std::size_t r = 0;
    for (; r < d; ++r) {
      if (++a[r] < colors) {
        ++weight;
        load_block(r, a[r]);
        break;
      }
      weight -= static_cast<std::size_t>(colors - 1);
      a[r] = 0;
      load_block(r, 0);
    }
    if (r == d) break;
  }
  if (calls) *calls += evaluations;
  return total;
}

// P(x) over F_p from evaluations on 0/1 inputs: expand every entry into biased
// bits, then recombine over all (t+1)^D colorings. Per-edge slack eps = gamma / N.
template <class ErEval>
std::optional<std::uint64_t> weighted_to_unweighted(const PrimeField& f, const WeightedKPartiteInput<PrimeField>& x,
                                                    double c, double gamma, ErEval&& er_eval, Rng& rng,
                                                    const ExpansionLength& len = {}, WeightedStats* stats = nullptr) {
  x.validate(f);
  if (!(gamma > 0.0 && gamma < static_cast<double>(x.index.size()))) {
    throw std::invalid_argument("weighted_to_unweighted: gamma must lie in (0, N)");
  }
  const double eps = gamma / static_cast<double>(x.index.size());
  const int t = choose_expansion_t(f.characteristic(), c, eps, len);
  if (stats) stats->bits = t + 1;
  const auto planes = sample_expansions(f, x.values, c, eps, t, rng);
  if (!planes) {
    if (stats) stats->sampler_failed = true;
    return std::nullopt;
  }
  std::uint64_t calls = 0;
  const std::uint64_t value = recombine_over_colorings(f, x.index, *planes, std::forward<ErEval>(er_eval), &calls);
  if (stats) stats->er_calls += calls;
  return value;
}

template <class ErEval>
std::optional<std::uint64_t> weighted_to_unweighted(const PrimeField& f, const WeightedKPartiteInput<PrimeField>& x,
                                                    double c, double gamma, ErEval&& er_eval, std::uint64_t seed,
                                                    const ExpansionLength& len = {}) {
  Rng rng(seed);
  return weighted_to_unweighted(f, x, c, gamma, std::forward<ErEval>(er_eval), rng, len);
}

// P(x) over F_{p^t} from base-field evaluations: with x = sum_i x^(i) beta^(p^i),
// P(x) = sum over colorings a of prod_S beta^(p^a(S)) * P(x^(a)).
template <class BaseEval>
ExtField::value_type ext_to_base_reduce(const ExtField& ext, const WeightedKPartiteInput<ExtField>& x,
                                        BaseEval&& base_eval, std::uint64_t* calls = nullptr) {
  x.validate(ext);
  const std::size_t n = x.index.size();
  const std::size_t d = x.index.label_set_count();
  const std::size_t block = x.index.block_size();
  const int t = ext.degree();
  std::vector<std::uint64_t> planes(static_cast<std::size_t>(t) * n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto coords = ext.decompose(x.values[j]);
    for (int i = 0; i < t; ++i) planes[static_cast<std::size_t>(i) * n + j] = coords[static_cast<std::size_t>(i)];
  }
  std::vector<int> a(d, 0);
  std::vector<std::uint64_t> xa(planes.begin(), planes.begin() + static_cast<std::ptrdiff_t>(n));
  auto load_block = [&](std::size_t r, int color) {
    const auto* src = planes.data() + static_cast<std::size_t>(color) * n + r * block;
    std::copy(src, src + block, xa.begin() + static_cast<std::ptrdiff_t>(r * block));
  };
  ExtField::value_type total = ext.zero();
  std::uint64_t evaluations = 0;
  for (;;) {
    ExtField::value_type weight = ext.one();
    for (std::size_t r = 0; r < d; ++r) weight = ext.mul(weight, ext.conjugate(a[r]));
    const std::uint64_t base_value = ext.base().from_uint(base_eval(std::span<const std::uint64_t>(xa)));
    ++evaluations;
    total = ext.add(total, ext.mul(weight, ext.embed(base_value)));
    std::size_t r = 0;
    for (; r < d; ++r) {
      if (++a[r] < t) {
        load_block(r, a[r]);
        break;
      }
      a[r] = 0;
      load_block(r, 0);
    }
    if (r == d) break;
  }
  if (calls) *calls += evaluations;
  return total;
}

}  // namespace erclique
