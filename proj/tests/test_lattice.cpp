#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "polyavis/lattice.hpp"

using namespace polyavis;

TEST_CASE("component sum") {
  CHECK(component_sum(LatticePoint{1, 1}) == 2);
  CHECK(component_sum(LatticePoint{2, 3, 6}) == 11);
  CHECK(component_sum(LatticePoint{0, 0}) == 0);
  const auto big = std::uint64_t{1} << 63;
  CHECK_THROWS_AS(component_sum(LatticePoint{big, big}), std::overflow_error);
}

TEST_CASE("lattice point construction") {
  CHECK_THROWS_AS(LatticePoint{5}, std::invalid_argument);
  LatticePoint p{1, 2};
  p.increment(1);
  CHECK(p == LatticePoint{1, 3});
  CHECK(p.to_string() == "(1, 3)");
  LatticePoint edge{std::numeric_limits<std::uint64_t>::max(), 0};
  CHECK_THROWS_AS(edge.increment(0), std::overflow_error);
}

TEST_CASE("visibility examples") {
  CHECK(is_visible(LatticePoint{1, 1}));
  CHECK_FALSE(is_visible(LatticePoint{2, 4}));
  CHECK(is_visible(LatticePoint{2, 3, 6}));
  CHECK_FALSE(is_visible(LatticePoint{4, 6, 10}));
  CHECK(is_visible(LatticePoint{0, 1}));
  CHECK_FALSE(is_visible(LatticePoint{0, 5}));
  CHECK_THROWS_AS(is_visible(LatticePoint{0, 0}), std::invalid_argument);
}

TEST_CASE("gcd and visibility properties") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::uint64_t> dist(0, 1u << 30);
  for (int i = 0; i < 20000; ++i) {
    const auto a = dist(gen), b = dist(gen);
    CHECK(gcd64(a, b) == std::gcd(a, b));
  }
  std::uniform_int_distribution<std::uint64_t> small(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint64_t> v{small(gen), small(gen), small(gen)};
    const bool vis = is_visible(v);
    auto w = v;
    std::shuffle(w.begin(), w.end(), gen);
    CHECK(is_visible(w) == vis);
    for (std::uint64_t c : {2ull, 3ull, 7ull}) {
      auto m = v;
      for (auto& x : m) x *= c;
      CHECK_FALSE(is_visible(m));
    }
  }
}

TEST_CASE("visible fraction of uniform points approaches 6/pi^2") {
  std::mt19937_64 gen(20240601);
  std::uniform_int_distribution<std::uint64_t> dist(1, 1000);
  int visible = 0;
  const int total = 1000000;
  for (int i = 0; i < total; ++i)
    if (is_visible(LatticePoint{dist(gen), dist(gen)})) ++visible;
  CHECK(std::abs(static_cast<double>(visible) / total - 6.0 / (std::numbers::pi * std::numbers::pi)) < 0.01);
}
