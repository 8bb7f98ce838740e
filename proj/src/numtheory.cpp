#include "polyavis/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polyavis {

ArithmeticSieve::ArithmeticSieve(std::uint32_t limit) : limit_(limit) {
  if (limit == 0) throw std::invalid_argument("sieve limit must be >= 1");

  mobius_.assign(limit + 1, 0);
  tau_.assign(limit + 1, 0);
  // Exponent of the smallest prime factor, needed to update tau multiplicatively.
  std::vector<std::uint32_t> spf_exp(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(limit + 1, false);

  mobius_[1] = 1;
  tau_[1] = 1;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mobius_[i] = -1;
      tau_[i] = 2;
      spf_exp[i] = 1;
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = std::uint64_t{i} * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mobius_[ip] = 0;
        spf_exp[ip] = spf_exp[i] + 1;
        tau_[ip] = tau_[i] / (spf_exp[i] + 1) * (spf_exp[i] + 2);
        break;
      }
      mobius_[ip] = static_cast<std::int8_t>(-mobius_[i]);
      spf_exp[ip] = 1;
      tau_[ip] = tau_[i] * 2;
    }
  }
}

int ArithmeticSieve::mobius(std::uint32_t m) const {
  if (m == 0 || m > limit_) throw std::out_of_range("mobius index outside sieve range");
  return mobius_[m];
}

std::uint32_t ArithmeticSieve::divisor_count(std::uint32_t m) const {
  if (m == 0 || m > limit_) throw std::out_of_range("divisor index outside sieve range");
  return tau_[m];
}

ArithmeticSieve build_sieve(std::uint32_t limit) { return ArithmeticSieve(limit); }

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius(0) is undefined");
  int result = 1;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors(0) is undefined");
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d <= n / d; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

namespace {

// Distinct prime factors of n.
std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

void check_order(int k) {
  if (k < 2) throw std::invalid_argument("k must be >= 2 (got " + std::to_string(k) + ")");
}

}  // namespace

std::uint64_t zeta_truncation_point(int k, double tail_tolerance) {
  check_order(k);
  if (!(tail_tolerance > 0.0)) throw std::invalid_argument("tail_tolerance must be positive");
  // D^{1-k}/(k-1) < tol  <=>  D > ((k-1) tol)^{-1/(k-1)}
  const double bound = std::pow((k - 1) * tail_tolerance, -1.0 / (k - 1));
  auto d = static_cast<std::uint64_t>(std::floor(bound));
  if (d < 1) d = 1;
  auto tail = [k](std::uint64_t D) { return std::pow(static_cast<double>(D), 1 - k) / (k - 1); };
  while (d > 1 && tail(d - 1) < tail_tolerance) --d;
  while (!(tail(d) < tail_tolerance)) ++d;
  return d;
}

namespace {

// Calls visit(first, mu) for consecutive blocks of mu(first .. first + mu.size() - 1)
// covering [1, limit], using a segmented sieve with O(sqrt(limit) + block) memory.
template <typename Visit>
void for_each_mobius_block(std::uint64_t limit, Visit&& visit) {
  constexpr std::uint64_t kBlock = 1u << 18;
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<std::uint32_t> primes;
  {
    std::vector<bool> composite(root + 1, false);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (composite[i]) continue;
      primes.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= root; j += i) composite[j] = true;
    }
  }

  std::vector<std::int8_t> mu(kBlock);
  std::vector<std::uint64_t> radical(kBlock);
  for (std::uint64_t lo = 1; lo <= limit; lo += kBlock) {
    const std::uint64_t hi = std::min(limit, lo + kBlock - 1);
    const std::size_t len = hi - lo + 1;
    for (std::size_t i = 0; i < len; ++i) {
      mu[i] = 1;
      radical[i] = 1;
    }
    for (std::uint64_t p : primes) {
      if (p * p > hi) break;
      for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
        const std::size_t i = m - lo;
        mu[i] = static_cast<std::int8_t>(-mu[i]);
        radical[i] *= p;
      }
      const std::uint64_t sq = p * p;
      for (std::uint64_t m = (lo + sq - 1) / sq * sq; m <= hi; m += sq) mu[m - lo] = 0;
    }
    // At most one prime factor above sqrt(hi) remains.
    for (std::size_t i = 0; i < len; ++i) {
      if (mu[i] != 0 && radical[i] != lo + i) mu[i] = static_cast<std::int8_t>(-mu[i]);
    }
    visit(lo, std::span<const std::int8_t>(mu.data(), len));
  }
}

}  // namespace

double zeta_reciprocal(int k, double tail_tolerance) {
  const std::uint64_t D = zeta_truncation_point(k, tail_tolerance);
  // Per-block partial sums keep the rounding error of ~10^9 terms well below 1e-12.
  std::vector<double> partials;
  for_each_mobius_block(D, [&](std::uint64_t first, std::span<const std::int8_t> mu) {
    double block = 0.0;
    for (std::size_t i = mu.size(); i-- > 0;) {
      if (mu[i] == 0) continue;
      const auto d = static_cast<double>(first + i);
      block += mu[i] * (k == 2 ? 1.0 / (d * d) : std::pow(d, -k));
    }
    partials.push_back(block);
  });
  double sum = 0.0;
  for (auto it = partials.rbegin(); it != partials.rend(); ++it) sum += *it;
  return sum;
}

double mobius_divisor_sum(std::uint64_t n, int k) {
  if (n == 0) throw std::invalid_argument("mobius_divisor_sum: n must be >= 1");
  check_order(k);
  // Only squarefree divisors contribute, so the common denominator is
  // rad(n)^{k-1}. Numerator/denominator are kept as exact 128-bit integers
  // while they fit; otherwise the Euler product is used in floating point.
  const auto primes = prime_factors(n);
  unsigned __int128 num = 1, den = 1;
  bool exact = true;
  for (std::uint64_t p : primes) {
    unsigned __int128 pk = 1;
    for (int j = 0; j < k - 1 && exact; ++j) {
      if (pk > (~static_cast<unsigned __int128>(0)) / p) exact = false;
      else pk *= p;
    }
    if (!exact) break;
    // num/den * (pk - 1)/pk
    if (den > (~static_cast<unsigned __int128>(0)) / pk) { exact = false; break; }
    num *= (pk - 1);
    den *= pk;
  }
  if (exact) return static_cast<double>(num) / static_cast<double>(den);

  double product = 1.0;
  for (std::uint64_t p : primes) product *= 1.0 - std::pow(static_cast<double>(p), 1 - k);
  return product;
}

double density_main_term(std::uint64_t N, int k, std::uint64_t s0) {
  if (N == 0) throw std::invalid_argument("density_main_term: N must be >= 1");
  if (s0 == 0) throw std::invalid_argument("density_main_term: s0 must be >= 1");
  check_order(k);
  const std::uint64_t top = N + s0;
  if (top > 0xFFFFFFFFull) throw std::length_error("density_main_term: N + s0 too large");
  const ArithmeticSieve sieve(static_cast<std::uint32_t>(top));
  const auto mu = sieve.mobius_values();

  // Swap the order of summation: each d contributes mu(d)/d^{k-1} once for
  // every multiple of d in (s0, N + s0].
  double sum = 0.0;
  for (std::uint64_t d = top; d >= 1; --d) {
    if (mu[d] == 0) continue;
    const std::uint64_t multiples = top / d - s0 / d;
    if (multiples == 0) continue;
    sum += static_cast<double>(mu[d]) * static_cast<double>(multiples) *
           std::pow(static_cast<double>(d), 1 - k);
  }
  return sum;
}

}  // namespace polyavis
