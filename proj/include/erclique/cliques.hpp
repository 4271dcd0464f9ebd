#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "erclique/combinatorics.hpp"
#include "erclique/fields.hpp"
#include "erclique/hypergraph.hpp"
#include "erclique/random.hpp"

namespace erclique {

using Clique = std::vector<int>;

struct CliqueSet {
  int k = 0;
  std::set<Clique> members;

  std::size_t size() const { return members.size(); }
  bool contains(const Clique& c) const { return members.count(c) != 0; }
  friend bool operator==(const CliqueSet&, const CliqueSet&) = default;
};

// True if every s-subset of the sorted vertex set is an edge.
inline bool is_clique(const Hypergraph& g, std::span<const int> sorted) {
  bool ok = true;
  std::array<int, kMaxUniformity> e{};
  for_each_combination(static_cast<int>(sorted.size()), g.s(), [&](std::span<const int> pos) {
    if (!ok) return;
    for (int i = 0; i < g.s(); ++i) e[i] = sorted[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
    ok = g.has_edge(std::span<const int>(e.data(), static_cast<std::size_t>(g.s())));
  });
  return ok;
}

// Exhaustive: every k-subset, every one of its C(k,s) edges.
inline BigInt brute_force_count(const Hypergraph& g, int k) {
  if (k < 1) throw std::invalid_argument("brute_force_count: k must be positive");
  BigInt count = 0;
  std::uint64_t small = 0;
  for_each_combination(g.n(), k, [&](std::span<const int> c) {
    if (is_clique(g, c)) ++small;
  });
  count = small;
  return count;
}

namespace detail {

// Depth-first clique search over increasing vertex sequences. cand holds the
// vertices that extend the current prefix to a clique.
class CliqueSearch {
 public:
  CliqueSearch(const Hypergraph& g, int k)
      : g_(g), k_(k), s_(g.s()), w_(g.words()), stack_(static_cast<std::size_t>(k)),
        masks_(static_cast<std::size_t>(k + 1) * static_cast<std::size_t>(std::max(w_, 1)), 0) {}

  template <class OnClique>
  std::uint64_t run(bool count_only, OnClique&& on) {
    if (k_ < 1 || k_ > g_.n()) return 0;
    std::uint64_t* root = masks_.data();
    for (int v = 0; v < g_.n(); ++v) bits::set(root, v);
    std::uint64_t total = 0;
    rec(0, count_only, total, on);
    return total;
  }

 private:
  template <class OnClique>
  void rec(int d, bool count_only, std::uint64_t& total, OnClique& on) {
    const std::uint64_t* cand = masks_.data() + static_cast<std::size_t>(d) * static_cast<std::size_t>(w_);
    if (d + 1 == k_) {
      if (count_only) {
        total += bits::popcount(cand, w_);
        return;
      }
      for (int wi = 0; wi < w_; ++wi) {
        std::uint64_t x = cand[wi];
        while (x) {
          stack_[static_cast<std::size_t>(d)] = wi * 64 + std::countr_zero(x);
          x &= x - 1;
          on(std::span<const int>(stack_));
          ++total;
        }
      }
      return;
    }
    std::uint64_t* next = masks_.data() + static_cast<std::size_t>(d + 1) * static_cast<std::size_t>(w_);
    for (int wi = 0; wi < w_; ++wi) {
      std::uint64_t x = cand[wi];
      while (x) {
        const int v = wi * 64 + std::countr_zero(x);
        x &= x - 1;
        for (int j = 0; j < w_; ++j) next[j] = j < wi ? 0 : cand[j];
        next[wi] = x;
        stack_[static_cast<std::size_t>(d)] = v;
        if (d + 1 >= s_ - 1) restrict(d, v, next);
        rec(d + 1, count_only, total, on);
      }
    }
  }

  // Intersects next with link(C + {v}) for every (s-2)-subset C of the prefix.
  void restrict(int d, int v, std::uint64_t* next) {
    if (s_ == 2) {
      const std::uint64_t* l = g_.link_at(static_cast<std::size_t>(v));
      for (int j = 0; j < w_; ++j) next[j] &= l[j];
      return;
    }
    std::array<int, kMaxUniformity> b{};
    for_each_combination(d, s_ - 2, [&](std::span<const int> pos) {
      for (int i = 0; i < s_ - 2; ++i) b[i] = stack_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
      b[s_ - 2] = v;
      const std::uint64_t* l = g_.link(std::span<const int>(b.data(), static_cast<std::size_t>(s_ - 1)));
      for (int j = 0; j < w_; ++j) next[j] &= l[j];
    });
  }

  const Hypergraph& g_;
  int k_;
  int s_;
  int w_;
  std::vector<int> stack_;
  std::vector<std::uint64_t> masks_;
};

}  // namespace detail

namespace detail {

// Graphs on at most 64 vertices: candidates fit in one word.
inline std::uint64_t count_cliques_word(const Hypergraph& g, std::uint64_t cand, int remaining) {
  if (remaining == 1) return static_cast<std::uint64_t>(std::popcount(cand));
  std::uint64_t total = 0;
  while (cand) {
    const int v = std::countr_zero(cand);
    cand &= cand - 1;
    const std::uint64_t next = cand & *g.link_at(static_cast<std::size_t>(v));
    if (std::popcount(next) >= remaining - 1) total += count_cliques_word(g, next, remaining - 1);
  }
  return total;
}

}  // namespace detail

// Exact k-clique count by depth-first search with candidate bitsets.
inline std::uint64_t count_cliques(const Hypergraph& g, int k) {
  if (g.s() == 2 && g.n() <= 64 && k >= 1) {
    if (k > g.n()) return 0;
    const std::uint64_t all = g.n() == 64 ? ~0ULL : (1ULL << g.n()) - 1;
    return detail::count_cliques_word(g, all, k);
  }
  detail::CliqueSearch search(g, k);
  return search.run(true, [](std::span<const int>) {});
}

inline CliqueSet enumerate_cliques(const Hypergraph& g, int k) {
  CliqueSet out{k, {}};
  detail::CliqueSearch search(g, k);
  search.run(false, [&](std::span<const int> c) { out.members.emplace(c.begin(), c.end()); });
  return out;
}

inline int clique_number(const Hypergraph& g) {
  int k = 0;
  while (k < g.n() && count_cliques(g, k + 1) > 0) ++k;
  return k;
}

inline int parity_count(const Hypergraph& g, int k) {
  return static_cast<int>(brute_force_count(g, k) % 2);
}

inline double binomial_real(double n, double k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

inline double expected_clique_count(int n, double c, int k, int s) {
  const double edges_per_clique = static_cast<double>(binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s)));
  return static_cast<double>(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k))) *
         std::pow(c, edges_per_clique);
}

struct SparsityProfile {
  double alpha = 0;
  int tau = 0;
  int kappa = 0;
};

// alpha = -ln c / ln n; tau and kappa as the largest integers meeting their inequalities.
inline SparsityProfile sparsity_profile(int n, double c, int s) {
  if (n < 2) throw std::invalid_argument("sparsity_profile: requires n >= 2");
  check_probability(c);
  SparsityProfile prof;
  prof.alpha = -std::log(c) / std::log(static_cast<double>(n));
  if (!(prof.alpha > 0.0 && prof.alpha < 1.0)) {
    throw std::invalid_argument("sparsity_profile: c must lie in (1/n, 1)");
  }
  const double a = prof.alpha;
  int tau = 0;
  while (a * binomial_real(tau + 1, s - 1) < 1.0) ++tau;
  prof.tau = tau;
  int kappa = s;
  while (a * binomial_real(kappa + 1, s - 1) < static_cast<double>(s)) ++kappa;
  prof.kappa = kappa;
  return prof;
}

// Iteration count for greedy_random_sampling; natural logarithms throughout.
inline std::uint64_t required_iterations(int n, double c, int k, int s, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("required_iterations: eps must be positive");
  const SparsityProfile prof = sparsity_profile(n, c, s);
  const double ln_n = std::log(static_cast<double>(n));
  const double nn = static_cast<double>(n);
  double t = 0;
  if (k >= prof.tau + 1) {
    const int j = prof.tau + 1;
    t = 2.0 * std::pow(nn, j) * std::pow(c, binomial_real(j, s)) * std::pow(ln_n, 3.0 * (k - prof.tau) * (1 + eps));
  } else {
    t = 2.0 * std::pow(nn, k) * std::pow(c, binomial_real(k, s)) * std::pow(ln_n, 1 + eps);
  }
  t = std::ceil(t);
  if (!(t < 9.2e18)) throw std::overflow_error("required_iterations: iteration count exceeds 64 bits");
  return static_cast<std::uint64_t>(std::max(t, 1.0));
}

// T random greedy walks; each picks s-1 distinct vertices, then repeatedly a
// uniform common neighbour of the vertices chosen so far.
inline CliqueSet greedy_random_sampling(const Hypergraph& g, int k, std::uint64_t iterations, std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("greedy_random_sampling: T must be at least 1");
  if (k < g.s()) throw std::invalid_argument("greedy_random_sampling: requires k >= s");
  CliqueSet out{k, {}};
  if (g.n() < k) return out;
  Rng rng(seed);
  std::vector<int> chosen;
  std::vector<int> sorted;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < g.s() - 1) {
      const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n())));
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
    }
    bool alive = true;
    while (alive && static_cast<int>(chosen.size()) < k) {
      sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      const auto mask = g.common_neighbor_mask(sorted);
      const std::size_t count = bits::popcount(mask.data(), g.words());
      if (count == 0) {
        alive = false;
        break;
      }
      std::uint64_t r = rng.below(count);
      for (int wi = 0; wi < g.words(); ++wi) {
        const auto here = static_cast<std::uint64_t>(std::popcount(mask[static_cast<std::size_t>(wi)]));
        if (r >= here) {
          r -= here;
          continue;
        }
        std::uint64_t x = mask[static_cast<std::size_t>(wi)];
        for (std::uint64_t i = 0; i < r; ++i) x &= x - 1;
        chosen.push_back(wi * 64 + std::countr_zero(x));
        break;
      }
    }
    if (alive) {
      std::sort(chosen.begin(), chosen.end());
      out.members.insert(chosen);
    }
  }
  return out;
}

class CutoffExceeded : public std::runtime_error {
 public:
  CutoffExceeded(int level, std::size_t size, double cutoff)
      : std::runtime_error("cutoff exceeded at level " + std::to_string(level) + ": " + std::to_string(size) +
                           " sets >= cutoff " + std::to_string(cutoff)),
        level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

// cutoffs[j] bounds level s-1+j, for levels s-1..k.
inline CliqueSet it_gen_cliques(const Hypergraph& g, int k, std::span<const double> cutoffs) {
  const int s = g.s();
  if (k < s - 1) throw std::invalid_argument("it_gen_cliques: requires k >= s-1");
  if (static_cast<int>(cutoffs.size()) != k - s + 2) {
    throw std::invalid_argument("it_gen_cliques: expected one cutoff per level s-1..k");
  }
  for (double c : cutoffs) {
    if (!(c > 0)) throw std::invalid_argument("it_gen_cliques: cutoffs must be positive");
  }
  std::set<Clique> level;
  for_each_combination(g.n(), s - 1, [&](std::span<const int> b) { level.emplace(b.begin(), b.end()); });
  for (int i = s - 1; i < k; ++i) {
    std::set<Clique> next;
    const double cutoff = cutoffs[static_cast<std::size_t>(i + 1 - (s - 1))];
    for (const auto& a : level) {
      const auto mask = g.common_neighbor_mask(a);
      for (int v = a.back() + 1; v < g.n(); ++v) {
        if (!bits::test(mask.data(), v)) continue;
        Clique c = a;
        c.push_back(v);
        next.insert(std::move(c));
        if (static_cast<double>(next.size()) >= cutoff) throw CutoffExceeded(i + 1, next.size(), cutoff);
      }
    }
    level = std::move(next);
  }
  return CliqueSet{k, std::move(level)};
}

inline CliqueSet it_gen_cliques(const Hypergraph& g, int k) {
  const std::vector<double> unbounded(static_cast<std::size_t>(k - g.s() + 2), std::numeric_limits<double>::infinity());
  return it_gen_cliques(g, k, unbounded);
}

// C_t = 2 n^t c^C(t,s) for t = s-1..k.
inline std::vector<double> expected_size_cutoffs(int n, double c, int k, int s) {
  std::vector<double> out;
  for (int t = s - 1; t <= k; ++t) {
    out.push_back(2.0 * std::pow(static_cast<double>(n), t) * std::pow(c, binomial_real(t, s)));
  }
  return out;
}

// Graph case: k-cliques as triples of smaller cliques ordered by label,
// counted through one matrix product.
inline BigInt matrix_mult_count(const Hypergraph& g, int k) {
  if (g.s() != 2) throw std::invalid_argument("matrix_mult_count: requires s = 2");
  if (k <= 2) throw std::invalid_argument("matrix_mult_count: requires k > 2");
  const int lo = k / 3;
  const int hi = (k + 2) / 3;
  const auto s1set = it_gen_cliques(g, lo);
  const auto s2set = it_gen_cliques(g, hi);
  const std::vector<Clique> s1(s1set.members.begin(), s1set.members.end());
  const std::vector<Clique> s2(s2set.members.begin(), s2set.members.end());

  struct Dense {
    std::size_t rows, cols;
    std::vector<std::uint64_t> v;
    std::uint64_t& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  };
  auto joined = [&](const Clique& a, const Clique& b) {
    if (a.back() >= b.front()) return false;
    for (int u : a) {
      for (int w : b) {
        const int e[2] = {u, w};
        if (!g.has_edge(e)) return false;
      }
    }
    return true;
  };
  auto build = [&](const std::vector<Clique>& rows, const std::vector<Clique>& cols) {
    Dense m{rows.size(), cols.size(), std::vector<std::uint64_t>(rows.size() * cols.size(), 0)};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) m.at(i, j) = joined(rows[i], cols[j]) ? 1 : 0;
    }
    return m;
  };
  auto product = [](const Dense& a, const Dense& b) {
    Dense out{a.rows, b.cols, std::vector<std::uint64_t>(a.rows * b.cols, 0)};
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t l = 0; l < a.cols; ++l) {
        const std::uint64_t x = a.at(i, l);
        if (!x) continue;
        for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) += x * b.at(l, j);
      }
    }
    return out;
  };
  auto sum_over_support = [](const Dense& p, const Dense& support) {
    BigInt total = 0;
    for (std::size_t i = 0; i < p.v.size(); ++i) {
      if (support.v[i]) total += p.v[i];
    }
    return total;
  };

  switch (k % 3) {
    case 0: {
      const Dense m1 = build(s1, s1);
      return sum_over_support(product(m1, m1), m1);
    }
    case 1: {
      const Dense m1 = build(s1, s1);
      const Dense m2 = build(s1, s2);
      return sum_over_support(product(m1, m2), m2);
    }
    default: {
      const Dense m2 = build(s1, s2);
      const Dense m3 = build(s2, s2);
      return sum_over_support(product(m2, m3), m2);
    }
  }
}

}  // namespace erclique
