#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "erclique/combinatorics.hpp"
#include "erclique/random.hpp"

namespace erclique {

using Edge = std::vector<int>;

inline constexpr int kMaxUniformity = 8;

namespace bits {

inline int words_for(int n) { return (n + 63) / 64; }
inline bool test(const std::uint64_t* w, int i) { return (w[i >> 6] >> (i & 63)) & 1ULL; }
inline void set(std::uint64_t* w, int i) { w[i >> 6] |= 1ULL << (i & 63); }
inline void reset(std::uint64_t* w, int i) { w[i >> 6] &= ~(1ULL << (i & 63)); }

// len bits starting at bit off, 1 <= len <= 64.
inline std::uint64_t extract(const std::uint64_t* w, int off, int len) {
  const int wi = off >> 6;
  const int b = off & 63;
  std::uint64_t v = w[wi] >> b;
  if (b != 0 && b + len > 64) v |= w[wi + 1] << (64 - b);
  if (len < 64) v &= (1ULL << len) - 1;
  return v;
}

// ORs the low len bits of v into w at bit off.
inline void deposit(std::uint64_t* w, int off, int len, std::uint64_t v) {
  const int wi = off >> 6;
  const int b = off & 63;
  w[wi] |= v << b;
  if (b != 0 && b + len > 64) w[wi + 1] |= v >> (64 - b);
}

inline std::size_t popcount(const std::uint64_t* w, int words) {
  std::size_t c = 0;
  for (int i = 0; i < words; ++i) c += static_cast<std::size_t>(std::popcount(w[i]));
  return c;
}

inline std::vector<int> members(const std::uint64_t* w, int words) {
  std::vector<int> out;
  for (int i = 0; i < words; ++i) {
    std::uint64_t x = w[i];
    while (x) {
      out.push_back(i * 64 + std::countr_zero(x));
      x &= x - 1;
    }
  }
  return out;
}

}  // namespace bits

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// s-uniform hypergraph on vertices 0..n-1. For every (s-1)-subset B the
// vertices v with B + {v} an edge are kept as a bitset ("link" of B).
class Hypergraph {
 public:
  Hypergraph(int n, int s) : n_(n), s_(s), words_(bits::words_for(n)) {
    if (s < 2 || s > kMaxUniformity) throw std::invalid_argument("Hypergraph: uniformity must be in [2, 8]");
    if (n < 0) throw std::invalid_argument("Hypergraph: negative vertex count");
    build_binomials();
    links_.assign(static_cast<std::size_t>(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s - 1))) *
                      static_cast<std::size_t>(words_),
                  0);
  }

  int n() const { return n_; }
  int s() const { return s_; }
  int words() const { return words_; }
  std::size_t edge_count() const { return edges_; }

  // Adds the edge with the given vertices (any order); re-adding is a no-op.
  void add_edge(std::span<const int> e) {
    if (static_cast<int>(e.size()) != s_) throw std::invalid_argument("Hypergraph: edge has wrong size");
    std::array<int, kMaxUniformity> v{};
    std::copy(e.begin(), e.end(), v.begin());
    std::sort(v.begin(), v.begin() + s_);
    for (int i = 0; i < s_; ++i) {
      if (v[i] < 0 || v[i] >= n_) throw std::invalid_argument("Hypergraph: vertex out of range");
      if (i > 0 && v[i] == v[i - 1]) throw std::invalid_argument("Hypergraph: repeated vertex in edge");
    }
    const std::span<const int> sorted(v.data(), static_cast<std::size_t>(s_));
    if (!has_edge(sorted)) add_sorted_edge(sorted);
  }

  // Unchecked variant of add_edge: v must be strictly increasing, in range and not yet an edge.
  void add_sorted_edge(std::span<const int> v) {
    if (s_ == 2) {
      bits::set(mutable_link(static_cast<std::size_t>(v[0])), v[1]);
      bits::set(mutable_link(static_cast<std::size_t>(v[1])), v[0]);
      ++edges_;
      return;
    }
    std::array<int, kMaxUniformity> b{};
    for (int skip = 0; skip < s_; ++skip) {
      int j = 0;
      for (int i = 0; i < s_; ++i) {
        if (i != skip) b[j++] = v[i];
      }
      bits::set(mutable_link(rank(std::span<const int>(b.data(), static_cast<std::size_t>(s_ - 1)))), v[skip]);
    }
    ++edges_;
  }

  bool has_edge(std::span<const int> sorted) const {
    return bits::test(link_at(rank(sorted.first(static_cast<std::size_t>(s_ - 1)))), sorted[static_cast<std::size_t>(s_ - 1)]);
  }

  // Colex rank of a sorted (s-1)-subset.
  std::size_t rank(std::span<const int> sorted_b) const {
    if (s_ == 2) return static_cast<std::size_t>(sorted_b[0]);
    const std::uint64_t* table = own_binom_.empty() ? shared_binomials().data() : own_binom_.data();
    std::size_t r = 0;
    for (std::size_t i = 0; i < sorted_b.size(); ++i) {
      r += table[static_cast<std::size_t>(sorted_b[i]) * kStride + i + 1];
    }
    return r;
  }

  const std::uint64_t* link_at(std::size_t r) const { return links_.data() + r * static_cast<std::size_t>(words_); }
  const std::uint64_t* link(std::span<const int> sorted_b) const { return link_at(rank(sorted_b)); }

  // Edges in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for_each_combination(n_, s_ - 1, [&](std::span<const int> b) {
      const std::uint64_t* l = link(b);
      for (int v = b.back() + 1; v < n_; ++v) {
        if (bits::test(l, v)) {
          Edge e(b.begin(), b.end());
          e.push_back(v);
          out.push_back(std::move(e));
        }
      }
    });
    return out;
  }

  // {v not in A : B + {v} is an edge for every (s-1)-subset B of A}, as a bitset.
  std::vector<std::uint64_t> common_neighbor_mask(std::span<const int> sorted_a) const {
    if (static_cast<int>(sorted_a.size()) < s_ - 1) {
      throw std::invalid_argument("common_neighbors: vertex set smaller than s-1");
    }
    std::vector<std::uint64_t> mask(static_cast<std::size_t>(words_), ~0ULL);
    if (n_ % 64 != 0 && words_ > 0) mask.back() = (1ULL << (n_ % 64)) - 1;
    std::array<int, kMaxUniformity> b{};
    const int a = static_cast<int>(sorted_a.size());
    for_each_combination(a, s_ - 1, [&](std::span<const int> pos) {
      for (int i = 0; i < s_ - 1; ++i) b[i] = sorted_a[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
      const std::uint64_t* l = link(std::span<const int>(b.data(), static_cast<std::size_t>(s_ - 1)));
      for (int w = 0; w < words_; ++w) mask[static_cast<std::size_t>(w)] &= l[w];
    });
    for (int v : sorted_a) bits::reset(mask.data(), v);
    return mask;
  }

  std::vector<int> common_neighbors(std::span<const int> sorted_a) const {
    const auto mask = common_neighbor_mask(sorted_a);
    return bits::members(mask.data(), words_);
  }

  // Sub-hypergraph induced on the sorted vertex list, renumbered 0..|V|-1.
  Hypergraph induced(std::span<const int> vertices) const {
    const int m = static_cast<int>(vertices.size());
    for (int i = 0; i < m; ++i) {
      const int v = vertices[static_cast<std::size_t>(i)];
      if (v < 0 || v >= n_ || (i > 0 && v <= vertices[static_cast<std::size_t>(i - 1)])) {
        throw std::invalid_argument("induced: vertex list must be sorted, distinct and in range");
      }
    }
    struct Run {
      int src, dst, len;
    };
    std::array<Run, 16> inline_runs{};
    std::vector<Run> heap_runs;
    std::size_t run_count = 0;
    for (int i = 0; i < m;) {
      int j = i + 1;
      while (j < m && vertices[static_cast<std::size_t>(j)] == vertices[static_cast<std::size_t>(j - 1)] + 1) ++j;
      for (int off = 0; off < j - i; off += 64) {
        const Run r{vertices[static_cast<std::size_t>(i)] + off, i + off, std::min(64, j - i - off)};
        if (run_count < inline_runs.size()) {
          inline_runs[run_count] = r;
        } else {
          if (heap_runs.empty()) heap_runs.assign(inline_runs.begin(), inline_runs.end());
          heap_runs.push_back(r);
        }
        ++run_count;
      }
      i = j;
    }
    const std::span<const Run> runs = heap_runs.empty() ? std::span<const Run>(inline_runs.data(), run_count)
                                                        : std::span<const Run>(heap_runs);
    Hypergraph out(m, s_);
    std::size_t total = 0;
    if (s_ == 2) {
      for (int i = 0; i < m; ++i) {
        const std::uint64_t* src = link_at(static_cast<std::size_t>(vertices[static_cast<std::size_t>(i)]));
        std::uint64_t* dst = out.mutable_link(static_cast<std::size_t>(i));
        for (const Run& r : runs) bits::deposit(dst, r.dst, r.len, bits::extract(src, r.src, r.len));
        total += bits::popcount(dst, out.words_);
      }
      out.edges_ = total / 2;
      return out;
    }
    std::array<int, kMaxUniformity> b{};
    for_each_combination(m, s_ - 1, [&](std::span<const int> pos) {
      for (int i = 0; i < s_ - 1; ++i) b[i] = vertices[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
      const std::uint64_t* src = link(std::span<const int>(b.data(), static_cast<std::size_t>(s_ - 1)));
      std::uint64_t* dst = out.mutable_link(out.rank(pos));
      for (const Run& r : runs) bits::deposit(dst, r.dst, r.len, bits::extract(src, r.src, r.len));
      total += bits::popcount(dst, out.words_);
    });
    out.edges_ = total / static_cast<std::size_t>(s_);
    return out;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.s_ == b.s_ && a.links_ == b.links_;
  }

 private:
  static constexpr int kSharedRows = 512;
  static constexpr std::size_t kStride = kMaxUniformity + 1;

  static const std::vector<std::uint64_t>& shared_binomials() {
    static const std::vector<std::uint64_t> table = [] {
      std::vector<std::uint64_t> t(static_cast<std::size_t>(kSharedRows) * kStride, 0);
      for (int v = 0; v < kSharedRows; ++v) {
        for (std::size_t j = 0; j < kStride; ++j) t[static_cast<std::size_t>(v) * kStride + j] = binomial(static_cast<std::uint64_t>(v), j);
      }
      return t;
    }();
    return table;
  }

  void build_binomials() {
    if (n_ <= kSharedRows) return;
    own_binom_.assign(static_cast<std::size_t>(n_) * kStride, 0);
    for (int v = 0; v < n_; ++v) {
      for (int j = 0; j < s_; ++j) {
        own_binom_[static_cast<std::size_t>(v) * kStride + static_cast<std::size_t>(j)] =
            binomial(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(j));
      }
    }
  }

  std::uint64_t* mutable_link(std::size_t r) { return links_.data() + r * static_cast<std::size_t>(words_); }

  int n_;
  int s_;
  int words_;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> own_binom_;
  std::vector<std::uint64_t> links_;
};

inline Hypergraph complete_hypergraph(int n, int s) {
  Hypergraph g(n, s);
  for_each_combination(n, s, [&](std::span<const int> e) { g.add_edge(e); });
  return g;
}

// Vertex of [n] x [k]: index within its part and the part label, both 0-based.
struct PartVertex {
  int part;
  int index;
  friend bool operator==(const PartVertex&, const PartVertex&) = default;
};

// Bijection between [N], N = C(k,s) n^s, and label-respecting s-subsets of
// [n] x [k]. Order: by label set (lexicographic), then lexicographically by
// the within-part indices listed in label order.
class EdgeIndex {
 public:
  EdgeIndex(int n, int k, int s) : n_(n), k_(k), s_(s) {
    if (s < 2 || s > kMaxUniformity || k < s || k > 20 || n < 1) {
      throw std::invalid_argument("EdgeIndex: requires n >= 1 and 2 <= s <= k <= 20");
    }
    block_ = ipow(static_cast<std::uint64_t>(n), static_cast<unsigned>(s));
    rank_of_mask_.assign(std::size_t{1} << k, SIZE_MAX);
    for_each_combination(k, s, [&](std::span<const int> labels) {
      std::uint64_t mask = 0;
      for (int l : labels) mask |= 1ULL << l;
      rank_of_mask_[mask] = label_sets_.size();
      label_sets_.emplace_back(labels.begin(), labels.end());
    });
    size_ = block_ * label_sets_.size();
  }

  int n() const { return n_; }
  int k() const { return k_; }
  int s() const { return s_; }
  std::size_t size() const { return size_; }
  std::size_t label_set_count() const { return label_sets_.size(); }
  std::size_t block_size() const { return block_; }
  const std::vector<int>& label_set(std::size_t r) const { return label_sets_[r]; }
  std::size_t label_set_of(std::size_t i) const { return i / block_; }

  std::size_t label_set_rank(std::span<const int> labels) const {
    std::uint64_t mask = 0;
    for (int l : labels) {
      if (l < 0 || l >= k_ || (mask >> l) & 1ULL) throw std::invalid_argument("EdgeIndex: labels not distinct");
      mask |= 1ULL << l;
    }
    const std::size_t r = labels.size() == static_cast<std::size_t>(s_) ? rank_of_mask_[mask] : SIZE_MAX;
    if (r == SIZE_MAX) throw std::invalid_argument("EdgeIndex: wrong number of labels");
    return r;
  }

  // Position of the edge with label set `r` and within-part indices given in label order.
  std::size_t index_of(std::size_t r, std::span<const int> within) const {
    std::size_t off = 0;
    for (int w : within) {
      if (w < 0 || w >= n_) throw std::invalid_argument("EdgeIndex: index out of range");
      off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(w);
    }
    return r * block_ + off;
  }

  std::size_t index_of(std::span<const PartVertex> edge) const {
    if (static_cast<int>(edge.size()) != s_) throw std::invalid_argument("EdgeIndex: edge has wrong size");
    std::array<PartVertex, kMaxUniformity> v{};
    std::copy(edge.begin(), edge.end(), v.begin());
    std::sort(v.begin(), v.begin() + s_, [](const PartVertex& a, const PartVertex& b) { return a.part < b.part; });
    std::array<int, kMaxUniformity> labels{};
    std::array<int, kMaxUniformity> within{};
    for (int i = 0; i < s_; ++i) {
      labels[i] = v[i].part;
      within[i] = v[i].index;
    }
    const std::size_t r = label_set_rank(std::span<const int>(labels.data(), static_cast<std::size_t>(s_)));
    return index_of(r, std::span<const int>(within.data(), static_cast<std::size_t>(s_)));
  }

  std::vector<PartVertex> edge(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("EdgeIndex: position out of range");
    const auto& labels = label_sets_[i / block_];
    std::size_t off = i % block_;
    std::vector<PartVertex> out(static_cast<std::size_t>(s_));
    for (int j = s_ - 1; j >= 0; --j) {
      out[static_cast<std::size_t>(j)] = {labels[static_cast<std::size_t>(j)], static_cast<int>(off % static_cast<std::size_t>(n_))};
      off /= static_cast<std::size_t>(n_);
    }
    return out;
  }

  // Vertex id in the flattened nk-vertex hypergraph.
  int global_id(PartVertex v) const { return v.part * n_ + v.index; }

  friend bool operator==(const EdgeIndex& a, const EdgeIndex& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.s_ == b.s_;
  }

 private:
  int n_;
  int k_;
  int s_;
  std::size_t block_ = 0;
  std::size_t size_ = 0;
  std::vector<std::vector<int>> label_sets_;
  std::vector<std::size_t> rank_of_mask_;
};

// k-partite hypergraph stored as a 0/1 indicator vector over an EdgeIndex.
class KPartiteHypergraph {
 public:
  KPartiteHypergraph(int n, int k, int s) : index_(n, k, s), present_(index_.size(), 0) {}
  KPartiteHypergraph(EdgeIndex index, std::vector<std::uint8_t> indicators)
      : index_(std::move(index)), present_(std::move(indicators)) {
    if (present_.size() != index_.size()) throw std::invalid_argument("KPartiteHypergraph: indicator length mismatch");
    for (auto& b : present_) {
      if (b > 1) throw std::invalid_argument("KPartiteHypergraph: indicators must be 0 or 1");
    }
  }

  const EdgeIndex& index() const { return index_; }
  int n() const { return index_.n(); }
  int k() const { return index_.k(); }
  int s() const { return index_.s(); }
  const std::vector<std::uint8_t>& indicators() const { return present_; }

  void add_edge(std::span<const PartVertex> e) { present_[index_.index_of(e)] = 1; }
  bool has_edge(std::span<const PartVertex> e) const { return present_[index_.index_of(e)] != 0; }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), std::uint8_t{1}));
  }

  // Edges in canonical index order, vertices sorted by part.
  std::vector<std::vector<PartVertex>> edges() const {
    std::vector<std::vector<PartVertex>> out;
    for (std::size_t i = 0; i < present_.size(); ++i) {
      if (present_[i]) out.push_back(index_.edge(i));
    }
    return out;
  }

  // Flattened hypergraph on nk vertices; vertex (part, index) becomes part*n + index.
  Hypergraph to_hypergraph() const {
    Hypergraph g(n() * k(), s());
    std::array<int, kMaxUniformity> ids{};
    for (std::size_t i = 0; i < present_.size(); ++i) {
      if (!present_[i]) continue;
      const auto e = index_.edge(i);
      for (int j = 0; j < s(); ++j) ids[j] = index_.global_id(e[static_cast<std::size_t>(j)]);
      g.add_edge(std::span<const int>(ids.data(), static_cast<std::size_t>(s())));
    }
    return g;
  }

 private:
  EdgeIndex index_;
  std::vector<std::uint8_t> present_;
};

inline void check_probability(double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("edge probability must lie in (0, 1)");
}

// G(n, c, s): every s-subset, visited in lexicographic order, kept with probability c.
inline Hypergraph sample_er(int n, double c, int s, std::uint64_t seed) {
  check_probability(c);
  if (n < s) throw std::invalid_argument("sample_er: requires n >= s");
  Hypergraph g(n, s);
  Rng rng(seed);
  for_each_combination(n, s, [&](std::span<const int> e) {
    if (rng.bernoulli(c)) g.add_edge(e);
  });
  return g;
}

// Independent Ber(c) indicators in EdgeIndex order.
inline KPartiteHypergraph sample_er_kpartite(int n, int k, double c, int s, std::uint64_t seed) {
  check_probability(c);
  EdgeIndex index(n, k, s);
  std::vector<std::uint8_t> x(index.size());
  Rng rng(seed);
  for (auto& b : x) b = rng.bernoulli(c) ? 1 : 0;
  return KPartiteHypergraph(std::move(index), std::move(x));
}

// Each edge v_1 < ... < v_s becomes {(v_j, t_j)} for every t_1 < ... < t_s in [k].
inline KPartiteHypergraph blow_up_k_partite(const Hypergraph& g, int k) {
  if (k < g.s()) throw std::invalid_argument("blow_up_k_partite: requires k >= s");
  KPartiteHypergraph out(std::max(g.n(), 1), k, g.s());
  const int s = g.s();
  std::vector<PartVertex> e(static_cast<std::size_t>(s));
  for (const auto& edge : g.edges()) {
    for_each_combination(k, s, [&](std::span<const int> labels) {
      for (int j = 0; j < s; ++j) {
        e[static_cast<std::size_t>(j)] = {labels[static_cast<std::size_t>(j)], edge[static_cast<std::size_t>(j)]};
      }
      out.add_edge(e);
    });
  }
  return out;
}

inline std::vector<int> common_neighbors(const Hypergraph& g, std::span<const int> a) {
  std::vector<int> sorted(a.begin(), a.end());
  std::sort(sorted.begin(), sorted.end());
  return g.common_neighbors(sorted);
}

namespace detail {

inline bool parse_int(std::string_view tok, long long& out) {
  if (tok.empty()) return false;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct LineReader {
  std::istream& in;
  std::size_t number = 0;
  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++number;
    if (line.find('\r') != std::string::npos) throw ParseError(number, "carriage return found; LF line endings required");
    return true;
  }
  void expect_end() {
    std::string line;
    while (next(line)) {
      if (!line.empty()) throw ParseError(number, "unexpected content after the declared edges");
    }
  }
};

}  // namespace detail

inline void write_hypergraph(std::ostream& out, const Hypergraph& g) {
  const auto es = g.edges();
  out << g.s() << ' ' << g.n() << ' ' << es.size() << '\n';
  for (const auto& e : es) {
    for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j] + 1;
    out << '\n';
  }
}

inline Hypergraph read_hypergraph(std::istream& in) {
  detail::LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header line 's n m'");
  const auto head = detail::split_spaces(line);
  long long s = 0, n = 0, m = 0;
  if (head.size() != 3 || !detail::parse_int(head[0], s) || !detail::parse_int(head[1], n) ||
      !detail::parse_int(head[2], m)) {
    throw ParseError(reader.number, "header must be three integers 's n m'");
  }
  if (s < 2 || s > kMaxUniformity || n < s || n > 100000 || m < 0) {
    throw ParseError(reader.number, "header values out of range");
  }
  Hypergraph g(static_cast<int>(n), static_cast<int>(s));
  std::vector<int> e(static_cast<std::size_t>(s));
  for (long long i = 0; i < m; ++i) {
    if (!reader.next(line)) throw ParseError(reader.number + 1, "file ended before all declared edges");
    const auto toks = detail::split_spaces(line);
    if (static_cast<long long>(toks.size()) != s) {
      throw ParseError(reader.number, "expected " + std::to_string(s) + " vertex ids");
    }
    for (std::size_t j = 0; j < toks.size(); ++j) {
      long long v = 0;
      if (!detail::parse_int(toks[j], v)) throw ParseError(reader.number, "vertex id is not an integer");
      if (v < 1 || v > n) throw ParseError(reader.number, "vertex id out of range");
      e[j] = static_cast<int>(v - 1);
      if (j > 0 && e[j] <= e[j - 1]) throw ParseError(reader.number, "vertex ids must be strictly increasing");
    }
    if (g.has_edge(e)) throw ParseError(reader.number, "duplicate edge");
    g.add_edge(e);
  }
  reader.expect_end();
  return g;
}

inline void write_kpartite(std::ostream& out, const KPartiteHypergraph& g) {
  const auto es = g.edges();
  out << g.s() << ' ' << g.n() << ' ' << g.k() << ' ' << es.size() << '\n';
  for (const auto& e : es) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      out << (j ? " " : "") << e[j].part + 1 << ':' << e[j].index + 1;
    }
    out << '\n';
  }
}

inline KPartiteHypergraph read_kpartite(std::istream& in) {
  detail::LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header line 's n k m'");
  const auto head = detail::split_spaces(line);
  long long s = 0, n = 0, k = 0, m = 0;
  if (head.size() != 4 || !detail::parse_int(head[0], s) || !detail::parse_int(head[1], n) ||
      !detail::parse_int(head[2], k) || !detail::parse_int(head[3], m)) {
    throw ParseError(reader.number, "header must be four integers 's n k m'");
  }
  if (s < 2 || s > kMaxUniformity || k < s || k > 20 || n < 1 || n > 100000 || m < 0) {
    throw ParseError(reader.number, "header values out of range");
  }
  KPartiteHypergraph g(static_cast<int>(n), static_cast<int>(k), static_cast<int>(s));
  std::vector<PartVertex> e(static_cast<std::size_t>(s));
  for (long long i = 0; i < m; ++i) {
    if (!reader.next(line)) throw ParseError(reader.number + 1, "file ended before all declared edges");
    const auto toks = detail::split_spaces(line);
    if (static_cast<long long>(toks.size()) != s) {
      throw ParseError(reader.number, "expected " + std::to_string(s) + " vertices 'part:index'");
    }
    for (std::size_t j = 0; j < toks.size(); ++j) {
      const auto colon = toks[j].find(':');
      long long part = 0, idx = 0;
      if (colon == std::string_view::npos || !detail::parse_int(toks[j].substr(0, colon), part) ||
          !detail::parse_int(toks[j].substr(colon + 1), idx)) {
        throw ParseError(reader.number, "vertex must be written 'part:index'");
      }
      if (part < 1 || part > k || idx < 1 || idx > n) throw ParseError(reader.number, "vertex out of range");
      e[j] = {static_cast<int>(part - 1), static_cast<int>(idx - 1)};
      if (j > 0 && e[j].part <= e[j - 1].part) {
        throw ParseError(reader.number, "parts must be distinct and increasing within an edge");
      }
    }
    if (g.has_edge(e)) throw ParseError(reader.number, "duplicate edge");
    g.add_edge(e);
  }
  reader.expect_end();
  return g;
}

inline Hypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_hypergraph(in);
}

inline void save_hypergraph(const std::string& path, const Hypergraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_hypergraph(out, g);
}

struct NamedHypergraph {
  std::string name;
  Hypergraph graph;
};

// Structured inputs that stress edge cases of clique counting.
inline std::vector<NamedHypergraph> adversarial_suite(int n, int s, int k) {
  if (n < k || k < s) throw std::invalid_argument("adversarial_suite: requires n >= k >= s");
  std::vector<NamedHypergraph> out;
  out.push_back({"complete", complete_hypergraph(n, s)});
  out.push_back({"empty", Hypergraph(n, s)});

  Hypergraph minus_one(n, s);
  bool skipped = false;
  for_each_combination(n, s, [&](std::span<const int> e) {
    if (!skipped) {
      skipped = true;
      return;
    }
    minus_one.add_edge(e);
  });
  out.push_back({"complete-minus-one-edge", std::move(minus_one)});

  Hypergraph star(n, s);
  for_each_combination(n, s, [&](std::span<const int> e) {
    if (e[0] == 0) star.add_edge(e);
  });
  out.push_back({"star", std::move(star)});

  Hypergraph planted(n, s);
  for_each_combination(k, s, [&](std::span<const int> e) { planted.add_edge(e); });
  out.push_back({"single-planted-clique", std::move(planted)});

  // Drop every edge that contains a matched pair {2i, 2i+1}.
  Hypergraph matching(n, s);
  for_each_combination(n, s, [&](std::span<const int> e) {
    for (std::size_t j = 0; j + 1 < e.size(); ++j) {
      if (e[j] % 2 == 0 && e[j + 1] == e[j] + 1) return;
    }
    matching.add_edge(e);
  });
  out.push_back({"complete-minus-matching", std::move(matching)});
  return out;
}

// The adversarial suite followed by G(n, 1/2, s) samples, `count` inputs in total.
inline std::vector<NamedHypergraph> worst_case_inputs(int n, int s, int k, std::size_t count, std::uint64_t seed) {
  auto out = adversarial_suite(n, s, k);
  if (out.size() > count) out.erase(out.begin() + static_cast<std::ptrdiff_t>(count), out.end());
  for (std::size_t i = 0; out.size() < count; ++i) {
    out.push_back({"random-" + std::to_string(i), sample_er(n, 0.5, s, derive_seed(seed, i))});
  }
  return out;
}

}  // namespace erclique
