#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyavis/lattice.hpp"
#include "polyavis/rng.hpp"

namespace polyavis {

/// Perturbed walk: step r is taken with probability (p_r + beta_r) / s(p).
/// Validated on construction: sum(beta) = 0, |beta_r| < B, every start coordinate >= B.
struct PerturbedConfig {
  LatticePoint p0;
  std::vector<double> beta;
  double bound = 1.0;

  static PerturbedConfig make(LatticePoint p0, std::vector<double> beta, double bound);
  /// Unperturbed walk (beta = 0, B = 1).
  static PerturbedConfig standard(LatticePoint p0);

  std::size_t dimension() const { return p0.dimension(); }
};

/// Twisted walk: step r is taken with probability (gamma_r . q) / s(q).
/// Rows gamma_r are non-zero, entries lie in [0, 1], and the rows sum to (1, ..., 1).
struct TwistConfig {
  LatticePoint q0;
  std::vector<std::vector<double>> gamma;

  static TwistConfig make(LatticePoint q0, std::vector<std::vector<double>> gamma);

  std::size_t dimension() const { return q0.dimension(); }
};

using WalkConfig = std::variant<PerturbedConfig, TwistConfig>;

const LatticePoint& start_point(const WalkConfig& cfg);

/// Position, step counter and generator of one walker.
/// component_sum(position) == component_sum(start) + step_index always holds.
struct WalkState {
  LatticePoint position;
  std::uint64_t step_index = 0;
  Xoshiro256 rng;
};

WalkState initial_state(const WalkConfig& cfg, std::uint64_t seed);

// Span forms write k probabilities into `out` without allocating.
void step_probabilities(std::span<const std::uint64_t> position, const PerturbedConfig& cfg,
                        std::span<double> out);
void step_probabilities(std::span<const std::uint64_t> position, const TwistConfig& cfg,
                        std::span<double> out);
void step_probabilities(std::span<const std::uint64_t> position, const WalkConfig& cfg,
                        std::span<double> out);

std::vector<double> step_probabilities_perturbed(const WalkState& state, const PerturbedConfig& cfg);
std::vector<double> step_probabilities_twisted(const WalkState& state, const TwistConfig& cfg);

/// Inverse-CDF draw of a direction from `probabilities` using exactly one
/// generator output. Returns the chosen index.
std::size_t draw_direction(Xoshiro256& rng, std::span<const double> probabilities);

/// One jump: draws r, increments position[r] and step_index.
std::size_t take_step(WalkState& state, std::span<const double> probabilities);

struct DensityEstimate {
  std::uint64_t visible_count = 0;
  std::uint64_t total_steps = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
};

/// Runs N steps and counts visible positions p_1..p_N (the start is not counted).
DensityEstimate simulate(const WalkConfig& cfg, std::uint64_t steps, std::uint64_t seed);

struct BatchReport {
  double mean_density = 0.0;
  double std_err = 0.0;  // sample standard deviation / sqrt(runs); 0 for a single run
  std::vector<DensityEstimate> runs;
};

/// `runs` independent simulations seeded with derive_run_seed(base_seed, i).
/// The reduction is ordered by run index, so the result does not depend on `threads`.
/// threads == 0 selects std::thread::hardware_concurrency().
BatchReport batch_density(const WalkConfig& cfg, std::uint64_t steps, std::uint64_t runs,
                          std::uint64_t base_seed, unsigned threads = 1);

// Canonical textual descriptors, also used in harness output.
std::string mode_name(const WalkConfig& cfg);
std::string describe_start(const WalkConfig& cfg);
std::string describe_params(const WalkConfig& cfg);

/// FNV-1a 64 of the canonical descriptor.
std::uint64_t config_digest(const WalkConfig& cfg);

}  // namespace polyavis
