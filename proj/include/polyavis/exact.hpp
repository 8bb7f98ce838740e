#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "polyavis/walks.hpp"

namespace polyavis {

/// Direction counts u = (u_1, ..., u_k) after n steps; p_n = p_0 + u.
using StepCountVector = std::vector<std::uint64_t>;

/// Law of p_n expressed over step-count vectors.
struct OccupancyTable {
  std::uint64_t n = 0;
  std::size_t k = 0;
  std::map<StepCountVector, double> entries;

  double total() const;
  /// Probability of u, or 0 when u is outside the support.
  double probability(const StepCountVector& u) const;
};

// Budgets; exceeding any of them throws SizeGuardError.
inline constexpr std::uint64_t kMaxTableEntries = 10'000'000;
inline constexpr std::uint64_t kMaxOracleStates = 200'000;

/// log Beta(b) = sum log Gamma(b_m) - log Gamma(sum b_m); every b_m must be positive.
double log_multivariate_beta(std::span<const double> b);

/// log of n! / (u_1! ... u_k!).
double log_multinomial(std::span<const std::uint64_t> u);

/// P(p_n = p_0 + u) = multinomial(n; u) Beta(p_0 + beta + u) / Beta(p_0 + beta),
/// evaluated in log space.
double occupancy_probability(std::uint64_t n, std::span<const std::uint64_t> u,
                             const PerturbedConfig& cfg);

OccupancyTable occupancy_table(std::uint64_t n, const PerturbedConfig& cfg);

/// P(p_n = p_0 + u, p_m = p_n + v) for m > n >= 1.
double pair_occupancy_probability(std::uint64_t n, std::uint64_t m,
                                  std::span<const std::uint64_t> u,
                                  std::span<const std::uint64_t> v, const PerturbedConfig& cfg);

/// Brute-force law of p_n: forward propagation of the literal step
/// probabilities over every reachable position. Independent of the closed form;
/// the only exact method for twisted walks.
OccupancyTable dp_oracle(std::uint64_t n, const WalkConfig& cfg);

struct VisibilityExpectation {
  double exact = 0.0;      // E(V_n) summed over visible outcomes
  double main_term = 0.0;  // sum_{d | n + s(p_0)} mu(d) / d^{k-1}
  double difference = 0.0; // exact - main_term
};

/// E(V_n) = P(p_n visible). The Möbius main term approximates it with error
/// O(n^{-1/2+eps}) when every start coordinate is >= 2.
VisibilityExpectation expected_visible(std::uint64_t n, const PerturbedConfig& cfg);

struct PairVisibilityExpectation {
  double exact = 0.0;              // E(V_n V_m)
  double main_term_product = 0.0;  // product of the two Möbius main terms
};

PairVisibilityExpectation pair_expected_visible(std::uint64_t n, std::uint64_t m,
                                                const PerturbedConfig& cfg);

}  // namespace polyavis
