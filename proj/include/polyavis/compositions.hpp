#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace polyavis {

/// C(n + k - 1, k - 1), saturating at uint64 max.
inline std::uint64_t composition_count(std::uint64_t n, std::size_t k) {
  // C(n + j, j) built up for j = 1 .. k-1; each intermediate is an exact binomial.
  unsigned __int128 c = 1;
  for (std::uint64_t j = 1; j < k; ++j) {
    c = c * (n + j) / j;
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

/// Calls visit(u) for every u in N^k with u_1 + ... + u_k = n, in
/// lexicographically decreasing order starting from (n, 0, ..., 0).
template <typename Visit>
void for_each_composition(std::uint64_t n, std::size_t k, Visit&& visit) {
  std::vector<std::uint64_t> u(k, 0);
  u[0] = n;
  while (true) {
    visit(std::span<const std::uint64_t>(u));
    // Find the rightmost non-zero entry among the first k-1 and move one unit right.
    std::size_t i = k - 1;
    while (i > 0 && u[i - 1] == 0) --i;
    if (i == 0) return;
    --i;
    // u[i] > 0: decrement it and gather everything to its right into u[i+1].
    const std::uint64_t tail = u[k - 1];
    u[k - 1] = 0;
    --u[i];
    u[i + 1] = tail + 1;
  }
}

}  // namespace polyavis
