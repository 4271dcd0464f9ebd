#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "erclique/cliques.hpp"
#include "erclique/combinatorics.hpp"
#include "erclique/expansion.hpp"
#include "erclique/fields.hpp"
#include "erclique/hypergraph.hpp"
#include "erclique/polynomial.hpp"
#include "erclique/random.hpp"

namespace erclique {

enum class ErrorModel { exact, random_flip, adversarial };

// Counting oracle for k-cliques with an injected error model. Call indices
// are assigned in invocation order; a faulty call returns answer + 1.
class AverageCaseOracle {
 public:
  using Counter = std::function<std::uint64_t(const Hypergraph&, int)>;

  explicit AverageCaseOracle(ErrorModel model = ErrorModel::exact, double delta = 0.0, std::uint64_t seed = 0,
                             std::vector<std::uint64_t> faulty_calls = {}, Counter counter = {})
      : model_(model), delta_(delta), seed_(seed), faulty_(faulty_calls.begin(), faulty_calls.end()),
        counter_(counter ? std::move(counter) : Counter(count_cliques)) {
    if (model == ErrorModel::random_flip && !(delta >= 0.0 && delta <= 1.0)) {
      throw std::invalid_argument("oracle: flip rate must lie in [0, 1]");
    }
  }

  static AverageCaseOracle exact(Counter counter = {}) {
    return AverageCaseOracle(ErrorModel::exact, 0.0, 0, {}, std::move(counter));
  }
  static AverageCaseOracle random_flip(double delta, std::uint64_t seed, Counter counter = {}) {
    return AverageCaseOracle(ErrorModel::random_flip, delta, seed, {}, std::move(counter));
  }
  static AverageCaseOracle adversarial(std::vector<std::uint64_t> faulty_calls, Counter counter = {}) {
    return AverageCaseOracle(ErrorModel::adversarial, 0.0, 0, std::move(faulty_calls), std::move(counter));
  }

  std::uint64_t count(const Hypergraph& g, int k) {
    const std::uint64_t call = calls_.fetch_add(1, std::memory_order_relaxed);
    std::uint64_t answer = counter_(g, k);
    if (faulty(call)) {
      errors_.fetch_add(1, std::memory_order_relaxed);
      ++answer;
    }
    return answer;
  }

  std::uint64_t calls() const { return calls_.load(); }
  std::uint64_t injected_errors() const { return errors_.load(); }
  void reset() {
    calls_ = 0;
    errors_ = 0;
  }
  ErrorModel model() const { return model_; }
  double delta() const { return delta_; }

 private:
  bool faulty(std::uint64_t call) const {
    switch (model_) {
      case ErrorModel::exact:
        return false;
      case ErrorModel::random_flip:
        return static_cast<double>(derive_seed(seed_, call) >> 11) * 0x1.0p-53 < delta_;
      case ErrorModel::adversarial:
        return faulty_.count(call) != 0;
    }
    return false;
  }

  ErrorModel model_;
  double delta_;
  std::uint64_t seed_;
  std::unordered_set<std::uint64_t> faulty_;
  Counter counter_;
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> errors_{0};
};

// t_{d+1} = sum_{|T|=d+1} a_T - sum_{i<=d} C(k-i, d+1-i) t_i with t_0 = 0,
// where a_T is the k-clique count of the sub-hypergraph on parts T. Returns t_k.
inline __int128 inclusion_exclusion(std::span<const std::int64_t> by_mask, int k) {
  if (by_mask.size() != (std::size_t{1} << k)) throw std::invalid_argument("inclusion_exclusion: need 2^k entries");
  std::vector<__int128> by_size(static_cast<std::size_t>(k) + 1, 0);
  for (std::size_t mask = 1; mask < by_mask.size(); ++mask) {
    by_size[static_cast<std::size_t>(std::popcount(mask))] += by_mask[mask];
  }
  std::vector<__int128> t(static_cast<std::size_t>(k) + 1, 0);
  for (int d = 0; d < k; ++d) {
    __int128 v = by_size[static_cast<std::size_t>(d + 1)];
    for (int i = 0; i <= d; ++i) {
      v -= static_cast<__int128>(binomial(static_cast<std::uint64_t>(k - i), static_cast<std::uint64_t>(d + 1 - i))) *
           t[static_cast<std::size_t>(i)];
    }
    t[static_cast<std::size_t>(d + 1)] = v;
  }
  return t[static_cast<std::size_t>(k)];
}

// Lifts a k-partite input to a general hypergraph H on nk vertices by adding
// every non-label-distinct s-subset with probability c, then queries the
// oracle once per nonempty part set S on the sub-hypergraph over parts S.
class KPartiteReducer {
 public:
  KPartiteReducer(const EdgeIndex& index, double c) : index_(index), c_(c) {
    check_probability(c);
    const int n = index.n();
    const int k = index.k();
    const int s = index.s();
    edge_ids_.resize(index.size() * static_cast<std::size_t>(s));
    for (std::size_t i = 0; i < index.size(); ++i) {
      const auto e = index.edge(i);
      for (int j = 0; j < s; ++j) edge_ids_[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)] = index.global_id(e[static_cast<std::size_t>(j)]);
    }
    for_each_combination(n * k, s, [&](std::span<const int> e) {
      std::uint64_t labels = 0;
      for (int v : e) labels |= 1ULL << (v / n);
      if (std::popcount(labels) == s) return;
      filler_.insert(filler_.end(), e.begin(), e.end());
    });
    part_vertices_.resize(std::size_t{1} << k);
    for (std::size_t mask = 1; mask < part_vertices_.size(); ++mask) {
      for (int part : mask_members(mask)) {
        for (int i = 0; i < n; ++i) part_vertices_[mask].push_back(part * n + i);
      }
    }
  }

  const EdgeIndex& index() const { return index_; }

  Hypergraph lift(std::span<const std::uint8_t> y, Rng& rng) const {
    if (y.size() != index_.size()) throw std::invalid_argument("KPartiteReducer: input length differs from N");
    const auto s = static_cast<std::size_t>(index_.s());
    Hypergraph h(index_.n() * index_.k(), index_.s());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i]) h.add_sorted_edge(std::span<const int>(edge_ids_.data() + i * s, s));
    }
    for (std::size_t off = 0; off < filler_.size(); off += s) {
      if (rng.bernoulli(c_)) h.add_sorted_edge(std::span<const int>(filler_.data() + off, s));
    }
    return h;
  }

  // Oracle answers indexed by part mask (entry 0 unused).
  std::vector<std::int64_t> query(std::span<const std::uint8_t> y, AverageCaseOracle& oracle, Rng& rng) const {
    const Hypergraph h = lift(y, rng);
    std::vector<std::int64_t> answers(part_vertices_.size(), 0);
    for (std::size_t mask = 1; mask < answers.size(); ++mask) {
      const Hypergraph sub = h.induced(part_vertices_[mask]);
      answers[mask] = static_cast<std::int64_t>(oracle.count(sub, index_.k()));
    }
    return answers;
  }

  std::int64_t count(std::span<const std::uint8_t> y, AverageCaseOracle& oracle, Rng& rng) const {
    return static_cast<std::int64_t>(inclusion_exclusion(query(y, oracle, rng), index_.k()));
  }

  // Same recursion over F_2, using only the parity of each answer.
  int parity(std::span<const std::uint8_t> y, AverageCaseOracle& oracle, Rng& rng) const {
    auto answers = query(y, oracle, rng);
    for (auto& a : answers) a &= 1;
    return static_cast<int>(inclusion_exclusion(answers, index_.k()) & 1);
  }

 private:
  EdgeIndex index_;
  double c_;
  std::vector<int> edge_ids_;
  std::vector<int> filler_;
  std::vector<std::vector<int>> part_vertices_;
};

inline BigInt kpartite_to_general_count(const KPartiteHypergraph& g, AverageCaseOracle& oracle, double c,
                                        std::uint64_t seed) {
  KPartiteReducer reducer(g.index(), c);
  Rng rng(seed);
  const std::int64_t v = reducer.count(g.indicators(), oracle, rng);
  return BigInt(v);
}

inline int kpartite_to_general_parity(const KPartiteHypergraph& g, AverageCaseOracle& oracle, double c,
                                      std::uint64_t seed) {
  KPartiteReducer reducer(g.index(), c);
  Rng rng(seed);
  return reducer.parity(g.indicators(), oracle, rng);
}

struct PipelineConfig {
  int repetitions = 5;
  double gamma = 0.5;
  ExpansionLength expansion{ExpansionLength::Policy::minimal, 0};

  void validate() const {
    if (repetitions < 1) throw std::invalid_argument("pipeline: repetitions must be at least 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("pipeline: gamma must lie in (0, 1]");
  }
};

struct PrimeOutcome {
  std::uint64_t prime = 0;
  int bits = 0;
  std::vector<std::optional<std::uint64_t>> votes;
  std::optional<std::uint64_t> residue;
  int vote_margin = 0;
  std::uint64_t sampler_failures = 0;
};

struct ReductionReport {
  int n = 0;
  int k = 0;
  int s = 0;
  double c = 0;
  std::uint64_t seed = 0;
  BigInt count = 0;
  ResidueVector residues;
  std::optional<BigInt> reference;
  std::vector<PrimeOutcome> per_prime;
  std::uint64_t oracle_calls = 0;
  std::uint64_t injected_errors = 0;
  bool decoded = false;
  bool succeeded = false;
  double seconds = 0;
};

namespace detail {

inline std::uint64_t reduce_signed(std::int64_t v, std::uint64_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

// Most frequent decoded value (smallest on ties) and its lead over the runner-up.
inline std::pair<std::optional<std::uint64_t>, int> plurality(const std::vector<std::optional<std::uint64_t>>& votes) {
  std::map<std::uint64_t, int> tally;
  for (const auto& v : votes) {
    if (v) ++tally[*v];
  }
  std::optional<std::uint64_t> best;
  int top = 0;
  int second = 0;
  for (const auto& [value, count] : tally) {
    if (count > top) {
      second = top;
      top = count;
      best = value;
    } else if (count > second) {
      second = count;
    }
  }
  return {best, top - second};
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// Worst-case k-clique count through average-case oracle calls: blow up to a
// k-partite input, then per prime self-reduce to random points, expand each
// point into 0/1 inputs, lift those to general hypergraphs, and recombine
// the residues by CRT.
inline ReductionReport to_er_count(const Hypergraph& g, int k, AverageCaseOracle& oracle, double c,
                                   const PipelineConfig& cfg, std::uint64_t seed,
                                   std::optional<BigInt> reference = std::nullopt) {
  cfg.validate();
  check_probability(c);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t calls_before = oracle.calls();
  const std::uint64_t errors_before = oracle.injected_errors();

  ReductionReport report;
  report.n = g.n();
  report.k = k;
  report.s = g.s();
  report.c = c;
  report.seed = seed;
  report.reference = reference;

  const KPartiteHypergraph blown = blow_up_k_partite(g, k);
  const EdgeIndex& index = blown.index();
  const KPartiteReducer reducer(index, c);
  const auto primes = select_primes(g.n(), k, g.s());
  const double eps = cfg.gamma / static_cast<double>(index.size());

  bool all_decoded = true;
  for (std::size_t pi = 0; pi < primes.size(); ++pi) {
    const PrimeField f(primes[pi]);
    const auto x = embed_indicators(f, blown);
    PrimeOutcome outcome;
    outcome.prime = primes[pi];
    outcome.bits = choose_expansion_t(primes[pi], c, eps, cfg.expansion) + 1;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      Rng rng(derive_seed(derive_seed(seed, pi), static_cast<std::uint64_t>(rep)));
      auto er_eval = [&](std::span<const std::uint8_t> y) -> std::uint64_t {
        return detail::reduce_signed(reducer.count(y, oracle, rng), f.characteristic());
      };
      WeightedKPartiteInput<PrimeField> point{index, {}};
      auto eval_at = [&](std::span<const std::uint64_t> w) -> std::uint64_t {
        point.values.assign(w.begin(), w.end());
        const auto v = weighted_to_unweighted(f, point, c, cfg.gamma, er_eval, rng, cfg.expansion);
        if (!v) {
          ++outcome.sampler_failures;
          return 0;
        }
        return *v;
      };
      outcome.votes.push_back(random_self_reduce(f, x, eval_at, rng));
    }
    const auto [winner, margin] = detail::plurality(outcome.votes);
    outcome.residue = winner;
    outcome.vote_margin = margin;
    if (winner) {
      report.residues.primes.push_back(outcome.prime);
      report.residues.residues.push_back(*winner);
    } else {
      all_decoded = false;
    }
    report.per_prime.push_back(std::move(outcome));
  }
  report.count = crt_combine(report.residues);
  report.decoded = all_decoded;
  report.succeeded = all_decoded && (!reference || report.count == *reference);
  report.oracle_calls = oracle.calls() - calls_before;
  report.injected_errors = oracle.injected_errors() - errors_before;
  report.seconds = detail::seconds_since(start);
  return report;
}

// Oracle calls to_er_count makes when no sampler gives up.
inline BigInt expected_count_oracle_calls(int n, int k, int s, double c, const PipelineConfig& cfg) {
  const EdgeIndex index(n, k, s);
  const double eps = cfg.gamma / static_cast<double>(index.size());
  BigInt total = 0;
  for (std::uint64_t p : select_primes(n, k, s)) {
    const int colors = choose_expansion_t(p, c, eps, cfg.expansion) + 1;
    BigInt per_point = boost::multiprecision::pow(BigInt(colors), static_cast<unsigned>(index.label_set_count()));
    total += BigInt(cfg.repetitions) * BigInt(12 * index.label_set_count()) * per_point * BigInt((1ULL << k) - 1);
  }
  return total;
}

struct ParityReport {
  int n = 0;
  int k = 0;
  int s = 0;
  double c = 0;
  std::uint64_t seed = 0;
  int bit = 0;
  std::optional<int> reference;
  bool unbiased_path = false;
  int extension_degree = 0;
  int expansion_bits = 0;
  int attempts = 0;
  std::uint64_t sampler_failures = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t injected_errors = 0;
  bool decoded = false;
  bool succeeded = false;
  double seconds = 0;
};

// Smallest kappa with 2^kappa >= 12 C(k,s), raised if needed so that
// F_{2^kappa} has more than 12 C(k,s) elements.
inline int parity_extension_degree(int k, int s) {
  const std::uint64_t m = 12 * binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s));
  int kappa = 0;
  while ((1ULL << kappa) < m) ++kappa;
  if ((1ULL << kappa) == m) ++kappa;
  return kappa;
}

// Parity of the worst-case k-clique count: self-reduction over F_{2^kappa},
// descent to F_2 through the normal basis, then (unless c = 1/2) mod-2
// expansion, and the k-partite lift with the parity recursion. Up to
// cfg.repetitions attempts, stopping at the first successful decode.
inline ParityReport to_er_parity(const Hypergraph& g, int k, AverageCaseOracle& oracle, double c,
                                 const PipelineConfig& cfg, std::uint64_t seed,
                                 std::optional<int> reference = std::nullopt) {
  cfg.validate();
  check_probability(c);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t calls_before = oracle.calls();
  const std::uint64_t errors_before = oracle.injected_errors();

  ParityReport report;
  report.n = g.n();
  report.k = k;
  report.s = g.s();
  report.c = c;
  report.seed = seed;
  report.reference = reference;
  report.unbiased_path = c == 0.5;

  const KPartiteHypergraph blown = blow_up_k_partite(g, k);
  const EdgeIndex& index = blown.index();
  const KPartiteReducer reducer(index, c);
  report.extension_degree = parity_extension_degree(k, g.s());
  const ExtField ext(2, report.extension_degree);
  const PrimeField f2(2);
  const auto x = embed_indicators(ext, blown);
  // Each extension-field point costs degree^D base evaluations and any sampler
  // failure among them spoils the point, so gamma is split across them.
  const double base_gamma =
      cfg.gamma / static_cast<double>(ipow(static_cast<std::uint64_t>(report.extension_degree),
                                           static_cast<unsigned>(index.label_set_count())));
  const double eps = base_gamma / static_cast<double>(index.size());
  report.expansion_bits = report.unbiased_path ? 0 : choose_expansion_t(2, c, eps, cfg.expansion) + 1;

  for (int attempt = 0; attempt < cfg.repetitions && !report.decoded; ++attempt) {
    ++report.attempts;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::uint8_t> y(index.size());
    WeightedKPartiteInput<PrimeField> base_point{index, {}};
    auto er_parity = [&](std::span<const std::uint8_t> bits) -> std::uint64_t {
      return static_cast<std::uint64_t>(reducer.parity(bits, oracle, rng));
    };
    auto base_eval = [&](std::span<const std::uint64_t> xa) -> std::uint64_t {
      if (report.unbiased_path) {
        for (std::size_t i = 0; i < xa.size(); ++i) y[i] = static_cast<std::uint8_t>(xa[i]);
        return er_parity(y);
      }
      base_point.values.assign(xa.begin(), xa.end());
      const auto v = weighted_to_unweighted(f2, base_point, c, base_gamma, er_parity, rng, cfg.expansion);
      if (!v) {
        ++report.sampler_failures;
        return 0;
      }
      return *v;
    };
    WeightedKPartiteInput<ExtField> point{index, {}};
    auto eval_at = [&](std::span<const ExtField::value_type> w) -> ExtField::value_type {
      point.values.assign(w.begin(), w.end());
      return ext_to_base_reduce(ext, point, base_eval);
    };
    const auto v = random_self_reduce(ext, x, eval_at, rng);
    if (v && ext.in_base_field(*v)) {
      report.bit = static_cast<int>(*v);
      report.decoded = true;
    }
  }
  report.succeeded = report.decoded && (!reference || report.bit == *reference);
  report.oracle_calls = oracle.calls() - calls_before;
  report.injected_errors = oracle.injected_errors() - errors_before;
  report.seconds = detail::seconds_since(start);
  return report;
}

using ParitySolver = std::function<int(const Hypergraph&, int)>;

// Tests whether the clique polynomial of g vanishes identically: evaluates it at
// c_const * 2^k random vertex subsets (each vertex kept with probability 1/2)
// and accepts if any evaluation is odd.
inline bool decide_via_parity(const Hypergraph& g, int k, const ParitySolver& solver, std::uint64_t seed,
                              int c_const = 8, std::uint64_t* evaluations = nullptr) {
  if (c_const < 1) throw std::invalid_argument("decide_via_parity: constant must be positive");
  Rng rng(seed);
  const std::uint64_t rounds = static_cast<std::uint64_t>(c_const) << k;
  std::vector<int> kept;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    kept.clear();
    for (int v = 0; v < g.n(); ++v) {
      if (rng.bernoulli(0.5)) kept.push_back(v);
    }
    if (evaluations) ++*evaluations;
    if (solver(g.induced(kept), k) & 1) return true;
  }
  return false;
}

struct SlowdownParams {
  double upsilon_sharp = 0;
  double upsilon_p1 = 0;
  double upsilon_p2 = 0;
};

namespace detail {
// ln ln x, clamped at zero where it would be negative or undefined.
inline double loglog(double x) { return x > std::exp(1.0) ? std::log(std::log(x)) : 0.0; }
}  // namespace detail

// Natural logarithms throughout; C is the unspecified absolute constant.
inline SlowdownParams compute_slowdowns(int n, double c, int k, int s, double c_const) {
  check_probability(c);
  if (!(s >= 2 && k >= s && n >= 2)) throw std::invalid_argument("compute_slowdowns: requires n >= 2, k >= s >= 2");
  if (!(c_const > 0)) throw std::invalid_argument("compute_slowdowns: constant must be positive");
  const double d = static_cast<double>(binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s)));
  const double bias = 1.0 / (c * (1.0 - c));
  const double ln_n = std::log(static_cast<double>(n));
  const double ln_k = std::log(static_cast<double>(k));
  SlowdownParams out;
  out.upsilon_sharp = std::pow(c_const * bias * (s * ln_k + s * detail::loglog(n)) * ln_n, d);
  out.upsilon_p1 = std::pow(c_const * bias * (s * ln_k) * (s * ln_n + d * detail::loglog(d)), d);
  out.upsilon_p2 = std::pow(c_const * s * ln_k, d);
  return out;
}

}  // namespace erclique
