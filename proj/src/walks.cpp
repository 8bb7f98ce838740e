#include "polyavis/walks.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "polyavis/errors.hpp"

namespace polyavis {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr std::size_t kMaxInlineDimension = 16;

std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

PerturbedConfig PerturbedConfig::make(LatticePoint p0, std::vector<double> beta, double bound) {
  const std::size_t k = p0.dimension();
  if (beta.size() != k)
    throw ConfigError("beta", "expected " + std::to_string(k) + " components, got " +
                                  std::to_string(beta.size()));
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ConfigError("B", "must be a positive real");
  double sum = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    if (!std::isfinite(beta[r])) throw ConfigError("beta", "components must be finite");
    if (!(std::abs(beta[r]) < bound))
      throw ConfigError("beta", "|beta_" + std::to_string(r + 1) + "| = " +
                                    format_real(std::abs(beta[r])) + " is not < B = " +
                                    format_real(bound));
    sum += beta[r];
  }
  if (std::abs(sum) > kSumTolerance)
    throw ConfigError("beta", "components must sum to 0 (sum = " + format_real(sum) + ")");
  for (std::size_t r = 0; r < k; ++r) {
    if (static_cast<double>(p0[r]) < bound)
      throw ConfigError("start", "coordinate " + std::to_string(r + 1) + " = " +
                                     std::to_string(p0[r]) + " is below B = " + format_real(bound));
  }
  return PerturbedConfig{std::move(p0), std::move(beta), bound};
}

PerturbedConfig PerturbedConfig::standard(LatticePoint p0) {
  const std::size_t k = p0.dimension();
  return make(std::move(p0), std::vector<double>(k, 0.0), 1.0);
}

TwistConfig TwistConfig::make(LatticePoint q0, std::vector<std::vector<double>> gamma) {
  const std::size_t k = q0.dimension();
  for (std::size_t r = 0; r < k; ++r) {
    if (q0[r] < 1) throw ConfigError("start", "coordinates must be >= 1");
  }
  if (gamma.size() != k)
    throw ConfigError("gamma", "expected " + std::to_string(k) + " rows, got " +
                                   std::to_string(gamma.size()));
  std::vector<double> column(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    if (gamma[r].size() != k)
      throw ConfigError("gamma", "row " + std::to_string(r + 1) + " must have " +
                                     std::to_string(k) + " entries");
    bool nonzero = false;
    for (std::size_t j = 0; j < k; ++j) {
      const double g = gamma[r][j];
      if (!(g >= 0.0 && g <= 1.0))
        throw ConfigError("gamma", "entries must lie in [0, 1]");
      nonzero = nonzero || g > 0.0;
      column[j] += g;
    }
    if (!nonzero) throw ConfigError("gamma", "row " + std::to_string(r + 1) + " is the zero vector");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (std::abs(column[j] - 1.0) > kSumTolerance)
      throw ConfigError("gamma", "column " + std::to_string(j + 1) + " sums to " +
                                     format_real(column[j]) + ", expected 1");
  }
  return TwistConfig{std::move(q0), std::move(gamma)};
}

const LatticePoint& start_point(const WalkConfig& cfg) {
  return std::visit(Overloaded{[](const PerturbedConfig& c) -> const LatticePoint& { return c.p0; },
                               [](const TwistConfig& c) -> const LatticePoint& { return c.q0; }},
                    cfg);
}

WalkState initial_state(const WalkConfig& cfg, std::uint64_t seed) {
  return WalkState{start_point(cfg), 0, Xoshiro256(seed)};
}

void step_probabilities(std::span<const std::uint64_t> position, const PerturbedConfig& cfg,
                        std::span<double> out) {
  const auto total = static_cast<double>(component_sum(position));
  for (std::size_t r = 0; r < position.size(); ++r)
    out[r] = (static_cast<double>(position[r]) + cfg.beta[r]) / total;
}

void step_probabilities(std::span<const std::uint64_t> position, const TwistConfig& cfg,
                        std::span<double> out) {
  const auto total = static_cast<double>(component_sum(position));
  const std::size_t k = position.size();
  for (std::size_t r = 0; r < k; ++r) {
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += cfg.gamma[r][j] * static_cast<double>(position[j]);
    out[r] = dot / total;
  }
}

void step_probabilities(std::span<const std::uint64_t> position, const WalkConfig& cfg,
                        std::span<double> out) {
  std::visit([&](const auto& c) { step_probabilities(position, c, out); }, cfg);
}

std::vector<double> step_probabilities_perturbed(const WalkState& state, const PerturbedConfig& cfg) {
  std::vector<double> out(state.position.dimension());
  step_probabilities(state.position.coords(), cfg, out);
  return out;
}

std::vector<double> step_probabilities_twisted(const WalkState& state, const TwistConfig& cfg) {
  std::vector<double> out(state.position.dimension());
  step_probabilities(state.position.coords(), cfg, out);
  return out;
}

std::size_t draw_direction(Xoshiro256& rng, std::span<const double> probabilities) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t r = 0; r < probabilities.size(); ++r) {
    if (probabilities[r] <= 0.0) continue;
    last_positive = r;
    cumulative += probabilities[r];
    if (u < cumulative) return r;
  }
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

std::size_t take_step(WalkState& state, std::span<const double> probabilities) {
  const std::size_t r = draw_direction(state.rng, probabilities);
  state.position.increment(r);
  ++state.step_index;
  return r;
}

DensityEstimate simulate(const WalkConfig& cfg, std::uint64_t steps, std::uint64_t seed) {
  if (steps == 0) throw std::invalid_argument("simulate: N must be >= 1");
  WalkState state = initial_state(cfg, seed);
  const std::size_t k = state.position.dimension();
  if (k > kMaxInlineDimension) throw std::invalid_argument("simulate: dimension too large");
  // The largest reachable component sum must fit in 64 bits.
  const std::uint64_t s0 = component_sum(state.position);
  std::uint64_t top;
  if (__builtin_add_overflow(s0, steps, &top))
    throw std::overflow_error("simulate: coordinates would overflow 64 bits");

  std::array<double, kMaxInlineDimension> buffer{};
  const std::span<double> probs(buffer.data(), k);
  std::uint64_t visible = 0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    step_probabilities(state.position.coords(), cfg, probs);
    take_step(state, probs);
    if (is_visible(state.position)) ++visible;
  }
  return DensityEstimate{visible, steps,
                         static_cast<double>(visible) / static_cast<double>(steps), seed,
                         config_digest(cfg)};
}

BatchReport batch_density(const WalkConfig& cfg, std::uint64_t steps, std::uint64_t runs,
                          std::uint64_t base_seed, unsigned threads) {
  if (runs == 0) throw std::invalid_argument("batch_density: runs must be >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, runs));

  BatchReport report;
  report.runs.resize(runs);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < runs; i = next++)
      report.runs[i] = simulate(cfg, steps, derive_run_seed(base_seed, i));
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    // Exceptions inside workers would terminate; configs are validated up front,
    // and simulate only throws on overflow, which is checked here first.
    std::uint64_t top;
    if (__builtin_add_overflow(component_sum(start_point(cfg)), steps, &top))
      throw std::overflow_error("batch_density: coordinates would overflow 64 bits");
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  double sum = 0.0;
  for (const auto& run : report.runs) sum += run.density;
  report.mean_density = sum / static_cast<double>(runs);
  if (runs > 1) {
    double ss = 0.0;
    for (const auto& run : report.runs) {
      const double dev = run.density - report.mean_density;
      ss += dev * dev;
    }
    report.std_err = std::sqrt(ss / static_cast<double>(runs - 1)) / std::sqrt(static_cast<double>(runs));
  }
  return report;
}

std::string mode_name(const WalkConfig& cfg) {
  return std::holds_alternative<PerturbedConfig>(cfg) ? "perturbed" : "twisted";
}

std::string describe_start(const WalkConfig& cfg) {
  const auto coords = start_point(cfg).coords();
  std::string out;
  for (std::size_t r = 0; r < coords.size(); ++r) {
    if (r) out += ';';
    out += std::to_string(coords[r]);
  }
  return out;
}

std::string describe_params(const WalkConfig& cfg) {
  return std::visit(
      Overloaded{[](const PerturbedConfig& c) {
                   std::string out = "B=" + format_real(c.bound) + " beta=";
                   for (std::size_t r = 0; r < c.beta.size(); ++r) {
                     if (r) out += ';';
                     out += format_real(c.beta[r]);
                   }
                   return out;
                 },
                 [](const TwistConfig& c) {
                   std::string out = "gamma=";
                   for (std::size_t r = 0; r < c.gamma.size(); ++r) {
                     if (r) out += '/';
                     for (std::size_t j = 0; j < c.gamma[r].size(); ++j) {
                       if (j) out += ';';
                       out += format_real(c.gamma[r][j]);
                     }
                   }
                   return out;
                 }},
      cfg);
}

std::uint64_t config_digest(const WalkConfig& cfg) {
  const std::string text = mode_name(cfg) + '|' + describe_start(cfg) + '|' + describe_params(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace polyavis
