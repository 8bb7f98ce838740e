#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace polyavis {

/// Möbius function and divisor counts for 1..limit, built once by a linear sieve.
/// Immutable after construction; safe to share between threads.
class ArithmeticSieve {
 public:
  explicit ArithmeticSieve(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }

  /// mu(m) for 1 <= m <= limit.
  int mobius(std::uint32_t m) const;
  /// tau(m), the number of positive divisors of m, for 1 <= m <= limit.
  std::uint32_t divisor_count(std::uint32_t m) const;

  // Index 0 is unused padding so that m indexes directly.
  std::span<const std::int8_t> mobius_values() const { return mobius_; }
  std::span<const std::uint32_t> divisor_counts() const { return tau_; }

 private:
  std::uint32_t limit_;
  std::vector<std::int8_t> mobius_;
  std::vector<std::uint32_t> tau_;
};

ArithmeticSieve build_sieve(std::uint32_t limit);

/// mu(n) by trial division up to sqrt(n).
int mobius(std::uint64_t n);

/// Positive divisors of n in increasing order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Truncation point D used by zeta_reciprocal: the smallest D with
/// D^{1-k}/(k-1) < tail_tolerance.
std::uint64_t zeta_truncation_point(int k, double tail_tolerance);

/// Partial sum of mu(d)/d^k over d <= D, which is within tail_tolerance of 1/zeta(k).
double zeta_reciprocal(int k, double tail_tolerance = 1e-9);

/// Sum over d | n of mu(d)/d^{k-1}, accumulated as an exact fraction.
/// Equals prod_{p | n} (1 - p^{1-k}).
double mobius_divisor_sum(std::uint64_t n, int k);

/// G_{N,k} = sum_{1<=n<=N} sum_{d | n+s0} mu(d)/d^{k-1}.
double density_main_term(std::uint64_t N, int k, std::uint64_t s0);

}  // namespace polyavis
