#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include "polyavis/errors.hpp"
#include "polyavis/exact.hpp"
#include "polyavis/rng.hpp"
#include "polyavis/walks.hpp"

using namespace polyavis;

TEST_CASE("perturbed step probabilities") {
  const auto cfg = PerturbedConfig::make({2, 4}, {-0.3, 0.3}, 1.0);
  const auto st = initial_state(cfg, 1);
  const auto p = step_probabilities_perturbed(st, cfg);
  CHECK(p[0] == doctest::Approx(1.7 / 6.0).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(4.3 / 6.0).epsilon(1e-15));

  const auto std11 = PerturbedConfig::standard({1, 1});
  const auto q = step_probabilities_perturbed(initial_state(std11, 1), std11);
  CHECK(q[0] == 0.5);
  CHECK(q[1] == 0.5);
}

TEST_CASE("twisted step probabilities") {
  const auto cfg = TwistConfig::make({1, 1}, {{0.1, 0.2}, {0.9, 0.8}});
  const auto p = step_probabilities_twisted(initial_state(cfg, 1), cfg);
  CHECK(p[0] == doctest::Approx(0.15));
  CHECK(p[1] == doctest::Approx(0.85));
}

TEST_CASE("configuration validation names the field") {
  auto field_of = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "";
  };
  CHECK(field_of([] { PerturbedConfig::make({1, 1}, {0.6, -0.5}, 1.0); }) == "beta");
  CHECK(field_of([] { PerturbedConfig::make({2, 2}, {1.0, -1.0}, 1.0); }) == "beta");
  CHECK(field_of([] { PerturbedConfig::make({1, 2}, {0.0, 0.0}, 2.0); }) == "start");
  CHECK(field_of([] { PerturbedConfig::make({1, 1}, {0.0}, 1.0); }) == "beta");
  CHECK(field_of([] { PerturbedConfig::make({1, 1}, {0.0, 0.0}, 0.0); }) == "B");
  CHECK(field_of([] { TwistConfig::make({1, 1}, {{0.5, 0.5}, {0.6, 0.5}}); }) == "gamma");
  CHECK(field_of([] { TwistConfig::make({1, 1}, {{0.0, 0.0}, {1.0, 1.0}}); }) == "gamma");
  CHECK(field_of([] { TwistConfig::make({0, 1}, {{1.0, 0.0}, {0.0, 1.0}}); }) == "start");
  CHECK(field_of([] { TwistConfig::make({1, 1}, {{1.5, 0.0}, {-0.5, 1.0}}); }) == "gamma");
}

TEST_CASE("degenerate direction is always chosen") {
  Xoshiro256 rng(3);
  const double probs[] = {0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) CHECK(draw_direction(rng, probs) == 1);
}

TEST_CASE("direction frequencies") {
  Xoshiro256 rng(11);
  const double probs[] = {0.3, 0.7};
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += draw_direction(rng, probs) == 0;
  CHECK(std::abs(ones / double(n) - 0.3) < 0.01);
}

TEST_CASE("step invariant along a trajectory") {
  const WalkConfig cfg = TwistConfig::make({2, 3, 6}, {{0.2, 0.3, 0.1}, {0.3, 0.3, 0.4}, {0.5, 0.4, 0.5}});
  auto st = initial_state(cfg, 99);
  const auto s0 = component_sum(st.position);
  std::vector<double> probs(3);
  for (int i = 0; i < 5000; ++i) {
    step_probabilities(st.position.coords(), cfg, probs);
    double total = 0.0;
    for (double x : probs) {
      CHECK(x > 0.0);
      total += x;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    take_step(st, probs);
    CHECK(component_sum(st.position) == s0 + st.step_index);
  }
}

TEST_CASE("single step from (1,1) is always visible") {
  const WalkConfig cfg = PerturbedConfig::standard({1, 1});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto est = simulate(cfg, 1, seed);
    CHECK(est.visible_count == 1);
    CHECK(est.density == 1.0);
  }
}

TEST_CASE("run seeds are distinct and reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_run_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_run_seed(42, 5) == derive_run_seed(42, 5));

  const WalkConfig cfg = PerturbedConfig::make({2, 4}, {-0.3, 0.3}, 1.0);
  const auto a = simulate(cfg, 20000, 123);
  const auto b = simulate(cfg, 20000, 123);
  CHECK(a.visible_count == b.visible_count);
  CHECK(a.config_digest == config_digest(cfg));
}

TEST_CASE("batch results do not depend on thread count") {
  const WalkConfig cfg = PerturbedConfig::make({2, 2, 2}, {0.5, -0.25, -0.25}, 2.0);
  const auto one = batch_density(cfg, 5000, 12, 77, 1);
  for (unsigned t : {4u, 16u}) {
    const auto many = batch_density(cfg, 5000, 12, 77, t);
    CHECK(many.mean_density == one.mean_density);
    CHECK(many.std_err == one.std_err);
    REQUIRE(many.runs.size() == one.runs.size());
    for (std::size_t i = 0; i < one.runs.size(); ++i) {
      CHECK(many.runs[i].visible_count == one.runs[i].visible_count);
      CHECK(many.runs[i].seed == one.runs[i].seed);
    }
  }
  const auto single = batch_density(cfg, 5000, 1, 77, 1);
  CHECK(single.std_err == 0.0);
  CHECK(single.mean_density == simulate(cfg, 5000, derive_run_seed(77, 0)).density);
}

TEST_CASE("identity twist tracks the standard walk") {
  const WalkConfig tw = TwistConfig::make({1, 2}, {{1.0, 0.0}, {0.0, 1.0}});
  const WalkConfig st = PerturbedConfig::standard({1, 2});
  CHECK(simulate(tw, 10000, 5).visible_count == simulate(st, 10000, 5).visible_count);
}

TEST_CASE("Monte Carlo law of p_n matches the closed form") {
  const auto cfg = PerturbedConfig::make({2, 4}, {-0.3, 0.3}, 1.0);
  const WalkConfig wc = cfg;
  const std::uint64_t n = 6;
  const int trajectories = 1000000;
  std::map<std::uint64_t, int> counts;
  std::vector<double> probs(2);
  for (int t = 0; t < trajectories; ++t) {
    auto st = initial_state(wc, derive_run_seed(2024, t));
    for (std::uint64_t i = 0; i < n; ++i) {
      step_probabilities(st.position.coords(), wc, probs);
      take_step(st, probs);
    }
    ++counts[st.position[0] - 2];
  }
  for (std::uint64_t u1 = 0; u1 <= n; ++u1) {
    const std::uint64_t u[] = {u1, n - u1};
    const double p = occupancy_probability(n, u, cfg);
    const double sd = std::sqrt(p * (1 - p) / trajectories);
    CHECK(std::abs(counts[u1] / double(trajectories) - p) <= 4 * sd);
  }
}

TEST_CASE("density estimates near 1/zeta(k)") {
  const double inv_zeta2 = 6.0 / (std::numbers::pi * std::numbers::pi);
  const auto r2 = batch_density(PerturbedConfig::standard({1, 1}), 100000, 10, 1);
  CHECK(std::abs(r2.mean_density - inv_zeta2) < 0.006);
  const auto r3 = batch_density(PerturbedConfig::standard({1, 1, 1}), 100000, 10, 1);
  CHECK(std::abs(r3.mean_density - 0.831907) < 0.006);
}

TEST_CASE("descriptors") {
  const WalkConfig p = PerturbedConfig::make({1, 1}, {0.6, -0.6}, 1.0);
  CHECK(mode_name(p) == "perturbed");
  CHECK(describe_start(p) == "1;1");
  CHECK(describe_params(p) == "B=1 beta=0.6;-0.6");
  const WalkConfig t = TwistConfig::make({1, 1}, {{0.0, 1.0}, {1.0, 0.0}});
  CHECK(mode_name(t) == "twisted");
  CHECK(describe_params(t) == "gamma=0;1/1;0");
  CHECK(config_digest(p) != config_digest(t));
}
