#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace erclique {

// Exact binomial coefficient; throws on 64-bit overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > UINT64_MAX) throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    r *= base;
    if (r > UINT64_MAX) throw std::overflow_error("integer power overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

// First combination {0, 1, ..., r-1}.
inline std::vector<int> first_combination(int r) {
  std::vector<int> c(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

// Advances a sorted r-subset of [0, n) to its lexicographic successor.
inline bool next_combination(std::vector<int>& c, int n) {
  const int r = static_cast<int>(c.size());
  int i = r - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - r + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < r; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// Calls fn(combination) for every sorted r-subset of [0, n) in lexicographic order.
template <class Fn>
void for_each_combination(int n, int r, Fn&& fn) {
  if (r < 0 || r > n) return;
  std::vector<int> c = first_combination(r);
  do {
    fn(std::span<const int>(c));
  } while (next_combination(c, n));
}

// Sorted list of set positions of a bitmask.
inline std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace erclique
