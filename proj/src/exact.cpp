#include "polyavis/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "polyavis/compositions.hpp"
#include "polyavis/errors.hpp"
#include "polyavis/lattice.hpp"
#include "polyavis/numtheory.hpp"

namespace polyavis {

namespace {

void check_counts(std::span<const std::uint64_t> u, std::uint64_t n, std::size_t k, const char* what) {
  if (u.size() != k)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(k) +
                                " components, got " + std::to_string(u.size()));
  std::uint64_t total = 0;
  for (std::uint64_t x : u) total += x;
  if (total != n)
    throw std::invalid_argument(std::string(what) + ": components sum to " + std::to_string(total) +
                                ", expected " + std::to_string(n));
}

// Shifted Dirichlet parameters a_r = p_{0,r} + beta_r.
std::vector<double> dirichlet_parameters(const PerturbedConfig& cfg) {
  std::vector<double> a(cfg.dimension());
  for (std::size_t r = 0; r < a.size(); ++r) a[r] = static_cast<double>(cfg.p0[r]) + cfg.beta[r];
  return a;
}

// log Beta(a + u) - log Beta(a) = sum_r [lgamma(a_r + u_r) - lgamma(a_r)] - [lgamma(S + n) - lgamma(S)].
// Written per coordinate so that zero counts contribute exactly 0.
double log_beta_ratio(std::span<const double> a, std::span<const std::uint64_t> u) {
  double s = 0.0, sum_a = 0.0;
  std::uint64_t n = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    sum_a += a[r];
    n += u[r];
    if (u[r] != 0) s += std::lgamma(a[r] + static_cast<double>(u[r])) - std::lgamma(a[r]);
  }
  if (n != 0) s -= std::lgamma(sum_a + static_cast<double>(n)) - std::lgamma(sum_a);
  return s;
}

void check_table_budget(std::uint64_t n, std::size_t k) {
  if (composition_count(n, k) > kMaxTableEntries)
    throw SizeGuardError("occupancy table for n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                         " exceeds " + std::to_string(kMaxTableEntries) + " entries");
}

void check_oracle_budget(std::uint64_t n, std::size_t k) {
  const bool ok = k == 2   ? n <= 64
                  : k == 3 ? n <= 24
                           : composition_count(n, k) <= kMaxOracleStates;
  if (!ok)
    throw SizeGuardError("dp_oracle: n=" + std::to_string(n) + " too large for k=" + std::to_string(k));
}

bool outcome_visible(const PerturbedConfig& cfg, std::span<const std::uint64_t> u,
                     std::vector<std::uint64_t>& scratch) {
  for (std::size_t r = 0; r < u.size(); ++r) scratch[r] = cfg.p0[r] + u[r];
  return is_visible(scratch);
}

}  // namespace

double OccupancyTable::total() const {
  double sum = 0.0;
  for (const auto& [u, p] : entries) sum += p;
  return sum;
}

double OccupancyTable::probability(const StepCountVector& u) const {
  const auto it = entries.find(u);
  return it == entries.end() ? 0.0 : it->second;
}

double log_multivariate_beta(std::span<const double> b) {
  if (b.empty()) throw std::invalid_argument("log_multivariate_beta: empty argument");
  double s = 0.0, total = 0.0;
  for (double x : b) {
    if (!(x > 0.0)) throw std::invalid_argument("log_multivariate_beta: arguments must be positive");
    s += std::lgamma(x);
    total += x;
  }
  return s - std::lgamma(total);
}

double log_multinomial(std::span<const std::uint64_t> u) {
  std::uint64_t n = 0;
  double s = 0.0;
  for (std::uint64_t x : u) {
    n += x;
    s -= std::lgamma(static_cast<double>(x) + 1.0);
  }
  return s + std::lgamma(static_cast<double>(n) + 1.0);
}

double occupancy_probability(std::uint64_t n, std::span<const std::uint64_t> u,
                             const PerturbedConfig& cfg) {
  check_counts(u, n, cfg.dimension(), "occupancy_probability");
  const auto a = dirichlet_parameters(cfg);
  return std::exp(log_multinomial(u) + log_beta_ratio(a, u));
}

OccupancyTable occupancy_table(std::uint64_t n, const PerturbedConfig& cfg) {
  const std::size_t k = cfg.dimension();
  check_table_budget(n, k);
  const auto a = dirichlet_parameters(cfg);
  OccupancyTable table{n, k, {}};
  for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
    table.entries.emplace_hint(table.entries.end(), StepCountVector(u.begin(), u.end()),
                               std::exp(log_multinomial(u) + log_beta_ratio(a, u)));
  });
  return table;
}

double pair_occupancy_probability(std::uint64_t n, std::uint64_t m,
                                  std::span<const std::uint64_t> u,
                                  std::span<const std::uint64_t> v, const PerturbedConfig& cfg) {
  if (m <= n) throw std::invalid_argument("pair_occupancy_probability: requires m > n");
  const std::size_t k = cfg.dimension();
  check_counts(u, n, k, "pair_occupancy_probability(u)");
  check_counts(v, m - n, k, "pair_occupancy_probability(v)");
  const auto a = dirichlet_parameters(cfg);
  std::vector<std::uint64_t> cumulative(k);
  for (std::size_t r = 0; r < k; ++r) cumulative[r] = u[r] + v[r];
  return std::exp(log_multinomial(u) + log_multinomial(v) + log_beta_ratio(a, cumulative));
}

OccupancyTable dp_oracle(std::uint64_t n, const WalkConfig& cfg) {
  const LatticePoint& start = start_point(cfg);
  const std::size_t k = start.dimension();
  check_oracle_budget(n, k);

  std::map<StepCountVector, double> layer{{StepCountVector(k, 0), 1.0}};
  std::vector<std::uint64_t> position(k);
  std::vector<double> probs(k);
  for (std::uint64_t step = 0; step < n; ++step) {
    std::map<StepCountVector, double> next;
    for (const auto& [u, mass] : layer) {
      for (std::size_t r = 0; r < k; ++r) position[r] = start[r] + u[r];
      step_probabilities(position, cfg, probs);
      for (std::size_t r = 0; r < k; ++r) {
        if (probs[r] == 0.0) continue;
        StepCountVector moved = u;
        ++moved[r];
        next[moved] += mass * probs[r];
      }
    }
    layer = std::move(next);
  }
  return OccupancyTable{n, k, std::move(layer)};
}

VisibilityExpectation expected_visible(std::uint64_t n, const PerturbedConfig& cfg) {
  const std::size_t k = cfg.dimension();
  check_table_budget(n, k);
  const auto a = dirichlet_parameters(cfg);
  std::vector<std::uint64_t> scratch(k);
  double exact = 0.0;
  for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
    if (outcome_visible(cfg, u, scratch)) exact += std::exp(log_multinomial(u) + log_beta_ratio(a, u));
  });
  const double main = mobius_divisor_sum(n + component_sum(cfg.p0), static_cast<int>(k));
  return {exact, main, exact - main};
}

PairVisibilityExpectation pair_expected_visible(std::uint64_t n, std::uint64_t m,
                                                const PerturbedConfig& cfg) {
  if (m <= n || n == 0) throw std::invalid_argument("pair_expected_visible: requires m > n >= 1");
  const std::size_t k = cfg.dimension();
  const bool ok = k == 2 ? m <= 24 : k == 3 ? m <= 12 : false;
  if (!ok)
    throw SizeGuardError("pair_expected_visible: m=" + std::to_string(m) + " too large for k=" +
                         std::to_string(k));
  const auto a = dirichlet_parameters(cfg);
  std::vector<std::uint64_t> scratch(k), cumulative(k);
  double exact = 0.0;
  for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
    if (!outcome_visible(cfg, u, scratch)) return;
    const double log_u = log_multinomial(u);
    for_each_composition(m - n, k, [&](std::span<const std::uint64_t> v) {
      for (std::size_t r = 0; r < k; ++r) cumulative[r] = u[r] + v[r];
      if (!outcome_visible(cfg, cumulative, scratch)) return;
      exact += std::exp(log_u + log_multinomial(v) + log_beta_ratio(a, cumulative));
    });
  });
  const std::uint64_t s0 = component_sum(cfg.p0);
  const int kk = static_cast<int>(k);
  return {exact, mobius_divisor_sum(n + s0, kk) * mobius_divisor_sum(m + s0, kk)};
}

}  // namespace polyavis
