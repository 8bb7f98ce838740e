#include "polyavis/verify.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "polyavis/compositions.hpp"
#include "polyavis/exact.hpp"
#include "polyavis/lattice.hpp"
#include "polyavis/lemma_lab.hpp"
#include "polyavis/numtheory.hpp"
#include "polyavis/walks.hpp"

namespace polyavis {

ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square: need matching bins, at least two");
  ChiSquare out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
  out.p_value = boost::math::gamma_q(out.degrees_of_freedom / 2.0, out.statistic / 2.0);
  return out;
}

namespace {

using Check = std::function<CheckResult()>;

CheckResult at_most(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {{}, std::move(name), measured, tolerance, measured <= tolerance, std::move(detail)};
}

// --- numtheory -------------------------------------------------------------

std::vector<Check> numtheory_checks() {
  return {
      [] {
        const auto sieve = build_sieve(1'000'000);
        double mismatches = 0;
        for (std::uint32_t m = 1; m <= sieve.limit(); ++m)
          mismatches += sieve.mobius(m) != mobius(m);
        return at_most("sieve mu == trial-division mu, m <= 1e6", mismatches, 0, "mismatch count");
      },
      [] {
        const auto sieve = build_sieve(10'000);
        double worst = 0;
        for (std::uint64_t m = 1; m <= 10'000; ++m) {
          long sum = 0;
          for (auto d : divisors(m)) sum += sieve.mobius(static_cast<std::uint32_t>(d));
          worst = std::max(worst, std::abs(static_cast<double>(sum) - (m == 1 ? 1.0 : 0.0)));
        }
        return at_most("sum_{d|m} mu(d) == [m=1], m <= 1e4", worst, 0, "max deviation");
      },
      [] {
        const auto sieve = build_sieve(10'000);
        double mismatches = 0;
        for (std::uint32_t m = 1; m <= 10'000; ++m)
          mismatches += sieve.divisor_count(m) != divisors(m).size();
        return at_most("sieve tau == divisor enumeration, m <= 1e4", mismatches, 0, "mismatch count");
      },
      [] {
        const auto sieve = build_sieve(1'000'000);
        double worst = 0;
        for (std::uint32_t m = 1; m <= sieve.limit(); ++m)
          worst = std::max(worst, sieve.divisor_count(m) / std::pow(m, envelopes::kDivisorExponent));
        return at_most("tau(n) / n^0.3 over n <= 1e6 (empirical constant)", worst,
                       envelopes::kDivisorConstant);
      },
      [] {
        const double err = std::abs(zeta_reciprocal(2, 1e-9) - 6.0 / (std::numbers::pi * std::numbers::pi));
        return at_most("|zeta_reciprocal(2, 1e-9) - 6/pi^2|", err, 1e-9);
      },
      [] {
        const double err = std::abs(zeta_reciprocal(3, 1e-6) - 0.831907);
        return at_most("|zeta_reciprocal(3, 1e-6) - 0.831907|", err, 1e-6);
      },
      [] {
        const double ref = zeta_reciprocal(2, 1e-9);
        double prev = INFINITY;
        double violations = 0;
        for (std::uint64_t N : {100u, 1000u, 10000u}) {
          const double err = std::abs(density_main_term(N, 2, 2) / static_cast<double>(N) - ref);
          violations += !(err < prev);
          prev = err;
        }
        return at_most("G_{N,2}/N error strictly decreasing over N = 1e2, 1e3, 1e4", violations, 0,
                       "non-decreasing steps");
      },
  };
}

// --- exact -----------------------------------------------------------------

std::vector<PerturbedConfig> exact_grid_configs() {
  return {
      PerturbedConfig::standard({1, 1}),
      PerturbedConfig::make({1, 1}, {0.6, -0.6}, 1.0),
      PerturbedConfig::make({2, 4}, {-0.3, 0.3}, 1.0),
      PerturbedConfig::make({2, 4}, {-0.8, 0.8}, 1.0),
      PerturbedConfig::make({7, 9}, {2.5, -2.5}, 6.5),
      PerturbedConfig::make({10, 8}, {-5, 5}, 6.5),
      PerturbedConfig::standard({2, 3}),
      PerturbedConfig::standard({1, 1, 1}),
      PerturbedConfig::make({1, 1, 1}, {0.2, -0.3, 0.1}, 1.0),
      PerturbedConfig::make({2, 3, 6}, {-0.3, 0.5, -0.2}, 1.0),
      PerturbedConfig::make({7, 9, 7}, {2.5, 2, -4.5}, 6.5),
  };
}

std::vector<Check> exact_checks() {
  return {
      [] {
        double worst = 0;
        int cases = 0;
        for (const auto& cfg : exact_grid_configs()) {
          const std::vector<std::uint64_t> ns =
              cfg.dimension() == 2 ? std::vector<std::uint64_t>{1, 6, 17, 32}
                                   : std::vector<std::uint64_t>{2, 9, 24};
          for (auto n : ns) {
            const auto closed = occupancy_table(n, cfg);
            const auto oracle = dp_oracle(n, cfg);
            for (const auto& [u, p] : oracle.entries)
              worst = std::max(worst, std::abs(p - closed.probability(u)));
            if (oracle.entries.size() != closed.entries.size()) worst = INFINITY;
            ++cases;
          }
        }
        return at_most("occupancy_table == dp_oracle entrywise", worst, 1e-12,
                       std::to_string(cases) + " (config, n) cases");
      },
      [] {
        double worst = 0;
        for (const auto& cfg : exact_grid_configs()) {
          for (std::uint64_t n : {1u, 10u, 24u})
            worst = std::max(worst, std::abs(occupancy_table(n, cfg).total() - 1.0));
        }
        return at_most("occupancy tables sum to 1", worst, 1e-12);
      },
      [] {
        double worst = 0;
        for (const auto& cfg : exact_grid_configs()) {
          const std::size_t k = cfg.dimension();
          const std::uint64_t n = 3, m = k == 2 ? 8 : 6;
          for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
            double marginal = 0;
            for_each_composition(m - n, k, [&](std::span<const std::uint64_t> v) {
              marginal += pair_occupancy_probability(n, m, u, v, cfg);
            });
            worst = std::max(worst, std::abs(marginal - occupancy_probability(n, u, cfg)));
          });
        }
        return at_most("pair occupancy marginalizes to single-time occupancy", worst, 1e-12);
      },
      [] {
        double mismatches = 0;
        for (const auto& cfg : exact_grid_configs()) {
          const std::size_t k = cfg.dimension();
          const std::uint64_t s0 = component_sum(cfg.p0);
          std::vector<std::uint64_t> full(k), reduced(k);
          for (std::uint64_t n = 1; n <= 20; ++n) {
            for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
              for (std::size_t r = 0; r < k; ++r) full[r] = cfg.p0[r] + u[r];
              std::copy(full.begin(), full.end() - 1, reduced.begin());
              reduced[k - 1] = n + s0;
              mismatches += is_visible(full) != is_visible(reduced);
            });
          }
        }
        return at_most("gcd(p0+u) == 1 iff gcd(first k-1 coords, n + s(p0)) == 1", mismatches, 0);
      },
      [] {
        double worst = 0;
        const auto cfg = PerturbedConfig::standard({1, 1});
        for (std::uint64_t n = 1; n <= 64; ++n) {
          std::uint64_t visible = 0;
          for (std::uint64_t u = 0; u <= n; ++u) visible += gcd64(1 + u, 1 + n - u) == 1;
          const double expected = static_cast<double>(visible) / static_cast<double>(n + 1);
          worst = std::max(worst, std::abs(expected_visible(n, cfg).exact - expected));
        }
        return at_most("standard (1,1) walk: E(V_n) == #visible/(n+1)", worst, 1e-12);
      },
  };
}

// --- lemma -----------------------------------------------------------------

std::vector<AlphaVector> alpha_samples(std::size_t k) {
  if (k == 2) return {AlphaVector({0.5}), AlphaVector({0.1}), AlphaVector({0.3}), AlphaVector({0.77}), AlphaVector({0.93})};
  return {AlphaVector({0.3, 0.3}), AlphaVector({0.1, 0.2}), AlphaVector({0.5, 0.25}),
          AlphaVector({0.05, 0.9}), AlphaVector({0.6, 0.1})};
}

// Calls visit(rc) for every residue vector c in {0..d-1}^{k-1}.
template <typename Visit>
void for_each_residue(std::uint64_t d, std::size_t k, Visit&& visit) {
  std::vector<std::int64_t> c(k - 1, 0);
  while (true) {
    visit(ResidueConstraint(d, c));
    std::size_t r = 0;
    for (; r < c.size(); ++r) {
      if (static_cast<std::uint64_t>(++c[r]) < d) break;
      c[r] = 0;
    }
    if (r == c.size()) return;
  }
}

std::vector<Check> lemma_checks() {
  return {
      [] {
        double worst = 0;
        for (std::size_t k : {2u, 3u}) {
          for (const auto& alpha : alpha_samples(k)) {
            for (std::uint64_t d = 1; d <= 8; ++d) {
              for (std::uint64_t n : {1u, 2u, 7u, 20u, 40u}) {
                for_each_residue(d, k, [&](const ResidueConstraint& rc) {
                  worst = std::max(worst, std::abs(constrained_sum_direct(n, alpha, rc) -
                                                   constrained_sum_characters(n, alpha, rc)));
                });
              }
            }
          }
        }
        return at_most("constrained_sum_direct == constrained_sum_characters", worst, 1e-9);
      },
      [] {
        double worst = 0;
        for (std::size_t k : {2u, 3u}) {
          for (const auto& alpha : alpha_samples(k)) {
            for (std::uint64_t d : {2u, 3u, 5u, 8u}) {
              for (std::uint64_t n : {5u, 40u}) {
                double total = 0;
                for_each_residue(d, k, [&](const ResidueConstraint& rc) {
                  total += constrained_sum_direct(n, alpha, rc);
                });
                worst = std::max(worst, std::abs(total - 1.0));
              }
            }
          }
        }
        return at_most("residue classes partition the multinomial mass", worst, 1e-9);
      },
      [] {
        std::vector<std::uint64_t> grid;
        for (int e = 4; e <= 16; ++e) grid.push_back(std::uint64_t{1} << e);
        double worst_ratio = 0;
        for (const auto& alpha : alpha_samples(2)) {
          const double envelope = envelopes::kKeyLemmaProfile / std::sqrt(alpha[0] * alpha.last());
          for (std::uint64_t d : {2u, 3u, 5u, 7u}) {
            for (std::int64_t c = 0; c < static_cast<std::int64_t>(d); ++c) {
              for (auto [n, e] : key_lemma_error_profile(alpha, ResidueConstraint(d, {c}), grid))
                worst_ratio = std::max(worst_ratio, e / envelope);
            }
          }
        }
        return at_most("key-lemma normalized error / (10/sqrt(a_1 a_k)), n = 2^4..2^16", worst_ratio, 1.0);
      },
      [] {
        double worst = 0;
        for (double alpha : {0.1, 0.3, 0.5, 0.9})
          for (std::uint64_t m : {1u, 10u, 100u, 1000u, 10000u})
            worst = std::max(worst, binomial_max_check(m, alpha).ratio);
        return at_most("max binomial term * sqrt(m a (1-a))", worst, envelopes::kBinomialRatio);
      },
      [] {
        double worst = 0;
        for (std::uint64_t d : {3u, 7u, 10u, 100u, 1000u})
          for (std::uint64_t l : {1u, 2u, 10u, 100u, 1000u})
            worst = std::max(worst, cosine_power_sum(l, d).ratio);
        return at_most("I(l, d) * sqrt(l) / d", worst, envelopes::kCosineSum);
      },
      [] {
        double worst = 0;
        for (double delta : {0.05, 0.25, 0.5})
          for (std::uint64_t d : {2u, 3u, 5u, 16u, 101u})
            for (int e = 1; e <= 16; ++e)
              worst = std::max(worst, h_sum_normalized(std::uint64_t{1} << e, delta, d));
        return at_most("H_{n,delta}(d) normalized, dyadic n <= 2^16", worst, envelopes::kNormalizedSumBound);
      },
      [] {
        double worst = 0;
        const std::vector<std::vector<double>> lambda_sets = {{0.3}, {0.5}, {0.1, 0.2}, {0.25, 0.25}, {0.1, 0.1, 0.1}};
        for (const auto& lambdas : lambda_sets)
          for (std::uint64_t d : {2u, 3u, 7u})
            for (int e = 1; e <= 16; ++e)
              worst = std::max(worst, j_sum_normalized(std::uint64_t{1} << e, lambdas, d, lambdas.size() + 1));
        return at_most("J-sum normalized, dyadic n <= 2^16", worst, envelopes::kNormalizedSumBound);
      },
  };
}

// --- walks -----------------------------------------------------------------

std::vector<Check> walk_checks() {
  return {
      [] {
        Xoshiro256 rng(42);
        const double probs[] = {0.3, 0.7};
        const int draws = 100'000;
        int first = 0;
        for (int i = 0; i < draws; ++i) first += draw_direction(rng, probs) == 0;
        return at_most("|freq(direction 1) - 0.3| over 1e5 draws", std::abs(first / double(draws) - 0.3), 0.01);
      },
      [] {
        double violations = 0;
        double worst_sum = 0;
        const WalkConfig cfgs[] = {PerturbedConfig::make({2, 4}, {-0.8, 0.8}, 1.0),
                                   PerturbedConfig::make({7, 9, 7}, {2.5, 2, -4.5}, 6.5),
                                   TwistConfig::make({1, 1}, {{0.1, 0.2}, {0.9, 0.8}})};
        for (const auto& cfg : cfgs) {
          WalkState state = initial_state(cfg, 7);
          const std::uint64_t s0 = component_sum(state.position);
          std::vector<double> probs(state.position.dimension());
          for (int i = 0; i < 10'000; ++i) {
            step_probabilities(state.position.coords(), cfg, probs);
            double total = 0;
            for (double p : probs) {
              total += p;
              if (std::holds_alternative<PerturbedConfig>(cfg) && !(p > 0)) ++violations;
            }
            worst_sum = std::max(worst_sum, std::abs(total - 1.0));
            take_step(state, probs);
            if (component_sum(state.position) != s0 + state.step_index) ++violations;
          }
        }
        return at_most("s(p_n) = s(p_0) + n, positive probabilities summing to 1 (max |sum-1|)",
                       violations > 0 ? INFINITY : worst_sum, 1e-12);
      },
      [] {
        const WalkConfig cfg = PerturbedConfig::make({10, 8}, {-3.5, 3.5}, 6.5);
        const auto a = batch_density(cfg, 20'000, 8, 99, 1);
        const auto b = batch_density(cfg, 20'000, 8, 99, 4);
        double diffs = a.mean_density != b.mean_density;
        for (std::size_t i = 0; i < a.runs.size(); ++i)
          diffs += a.runs[i].visible_count != b.runs[i].visible_count || a.runs[i].seed != b.runs[i].seed;
        return at_most("batch results identical at 1 and 4 threads", diffs, 0, "differing fields");
      },
      [] {
        const WalkConfig standard = PerturbedConfig::standard({2, 3, 6});
        const WalkConfig twisted = TwistConfig::make({2, 3, 6}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
        WalkState a = initial_state(standard, 5), b = initial_state(twisted, 5);
        std::vector<double> pa(3), pb(3);
        double diffs = 0;
        for (int i = 0; i < 50'000; ++i) {
          step_probabilities(a.position.coords(), standard, pa);
          step_probabilities(b.position.coords(), twisted, pb);
          take_step(a, pa);
          take_step(b, pb);
          diffs += !(a.position == b.position);
        }
        return at_most("twisted walk with gamma_r = e_r tracks the standard walk", diffs, 0, "differing steps");
      },
      [] {
        const auto cfg = PerturbedConfig::make({2, 4}, {-0.3, 0.3}, 1.0);
        const std::uint64_t n = 6, trajectories = 1'000'000;
        std::vector<double> observed(n + 1, 0.0), expected(n + 1, 0.0);
        const WalkConfig walk = cfg;
        std::vector<double> probs(2);
        for (std::uint64_t t = 0; t < trajectories; ++t) {
          WalkState state = initial_state(walk, derive_run_seed(2024, t));
          for (std::uint64_t i = 0; i < n; ++i) {
            step_probabilities(state.position.coords(), walk, probs);
            take_step(state, probs);
          }
          observed[state.position[0] - cfg.p0[0]] += 1;
        }
        const auto table = occupancy_table(n, cfg);
        for (std::uint64_t u = 0; u <= n; ++u)
          expected[u] = table.probability({u, n - u}) * static_cast<double>(trajectories);
        const auto chi = chi_square(observed, expected);
        // Passing means p >= 0.001; reported as 0.001 - p <= 0.
        return at_most("Monte Carlo p_6 law vs closed form: 0.001 - chi-square p-value",
                       0.001 - chi.p_value, 0.0, "chi2 = " + std::to_string(chi.statistic));
      },
  };
}

}  // namespace

std::vector<CheckResult> run_verification(std::string_view suite) {
  const std::pair<std::string_view, std::vector<Check> (*)()> suites[] = {
      {"numtheory", numtheory_checks}, {"exact", exact_checks}, {"lemma", lemma_checks}, {"walks", walk_checks}};
  bool known = suite == "all";
  std::vector<CheckResult> results;
  for (const auto& [name, make] : suites) {
    if (suite != "all" && suite != name) continue;
    known = true;
    for (const auto& check : make()) {
      CheckResult r;
      try {
        r = check();
      } catch (const std::exception& e) {
        r = {{}, "(exception)", NAN, 0.0, false, e.what()};
      }
      r.suite = std::string(name);
      results.push_back(std::move(r));
    }
  }
  if (!known) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  return results;
}

}  // namespace polyavis
