#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polyavis/lemma_lab.hpp"

using namespace polyavis;

TEST_CASE("alpha vector and residue constraint") {
  const AlphaVector a({0.2, 0.3});
  CHECK(a.dimension() == 3);
  CHECK(a.last() == doctest::Approx(0.5));
  CHECK(a[2] == doctest::Approx(0.5));
  CHECK_THROWS(AlphaVector({0.6, 0.5}));
  CHECK_THROWS(AlphaVector({0.0}));
  CHECK_THROWS(AlphaVector({}));

  const ResidueConstraint rc(5, {-1, 12});
  CHECK(rc.residues()[0] == 4);
  CHECK(rc.residues()[1] == 2);
  CHECK_THROWS(ResidueConstraint(0, {0}));
}

TEST_CASE("constrained sum examples") {
  const AlphaVector half({0.5});
  CHECK(constrained_sum_direct(2, half, ResidueConstraint(2, {0})) == doctest::Approx(0.5));
  CHECK(constrained_sum_direct(2, half, ResidueConstraint(2, {1})) == doctest::Approx(0.5));
  CHECK(constrained_sum_characters(2, half, ResidueConstraint(2, {1})) == doctest::Approx(0.5));

  const AlphaVector a3({0.2, 0.45});
  CHECK(constrained_sum_direct(17, a3, ResidueConstraint(1, {0, 0})) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(constrained_sum_characters(17, a3, ResidueConstraint(1, {0, 0})) == 1.0);

  CHECK(std::abs(constrained_sum_characters(1000, AlphaVector({0.4}), ResidueConstraint(3, {1})) - 1.0 / 3.0) < 1e-9);
}

TEST_CASE("character form matches enumeration on a small grid") {
  double worst = 0.0;
  for (std::uint64_t n : {1ull, 5ull, 13ull, 40ull})
    for (std::uint64_t d = 1; d <= 8; ++d) {
      for (double a : {0.1, 0.5, 0.85})
        for (std::uint64_t c = 0; c < d; ++c) {
          const AlphaVector al({a});
          const ResidueConstraint rc(d, {static_cast<std::int64_t>(c)});
          worst = std::max(worst, std::abs(constrained_sum_direct(n, al, rc) - constrained_sum_characters(n, al, rc)));
        }
      const AlphaVector al({0.25, 0.35});
      for (std::uint64_t c1 = 0; c1 < d; ++c1)
        for (std::uint64_t c2 = 0; c2 < d; ++c2) {
          const ResidueConstraint rc(d, {static_cast<std::int64_t>(c1), static_cast<std::int64_t>(c2)});
          worst = std::max(worst, std::abs(constrained_sum_direct(n, al, rc) - constrained_sum_characters(n, al, rc)));
        }
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("key lemma error profile") {
  std::vector<std::uint64_t> grid;
  for (int e = 4; e <= 16; ++e) grid.push_back(std::uint64_t{1} << e);

  for (const auto& [n, v] : key_lemma_error_profile(AlphaVector({0.3}), ResidueConstraint(1, {0}), grid))
    CHECK(v == 0.0);

  const AlphaVector half({0.5});
  for (const auto& [n, v] : key_lemma_error_profile(half, ResidueConstraint(2, {0}), grid))
    CHECK(v <= envelopes::kKeyLemmaProfile / std::sqrt(0.5 * 0.5));

  const std::vector<std::uint64_t> small{4, 8, 16, 32};
  const AlphaVector sym({0.3, 0.3});
  const auto p = key_lemma_error_profile(sym, ResidueConstraint(3, {1, 2}), small);
  const auto q = key_lemma_error_profile(sym, ResidueConstraint(3, {2, 1}), small);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].second == doctest::Approx(q[i].second));
}

TEST_CASE("cosine power sum") {
  CHECK(cosine_power_sum(0, 7).value == 3.0);
  CHECK(cosine_power_sum(2, 4).value == doctest::Approx(0.5));
  const auto big = cosine_power_sum(100, 1000);
  CHECK(big.value <= envelopes::kCosineSum * 1000.0 / 10.0);
  CHECK(big.ratio <= envelopes::kCosineSum);
  CHECK_THROWS_AS(cosine_power_sum(3, 2), std::invalid_argument);
}

TEST_CASE("H sums") {
  for (std::uint64_t n : {1ull, 2ull, 9ull}) CHECK(h_sum(n, 0.5, 2) == doctest::Approx(0.0));
  CHECK(h_sum(4, 0.25, 2) == doctest::Approx(0.125));
  double prev = 2.0;
  for (std::uint64_t n : {2ull, 4ull, 8ull, 16ull}) {
    const double h = h_sum(n, 0.3, 5);
    CHECK(h < prev);
    prev = h;
  }
  CHECK_THROWS_AS(h_sum(4, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(h_sum(4, 0.6, 3), std::invalid_argument);
  CHECK_THROWS_AS(h_sum(4, 0.3, 1), std::invalid_argument);
}

TEST_CASE("J sums") {
  const double half[] = {0.5};
  for (std::uint64_t n : {1ull, 3ull, 8ull}) CHECK(j_sum(n, half, 2, 2) == doctest::Approx(0.0));
  const double l3[] = {0.3};
  CHECK(j_sum(2, l3, 2, 2) == doctest::Approx(0.08));
  const double two[] = {0.2, 0.3};
  double prev = 1e9;
  for (std::uint64_t n : {2ull, 4ull, 8ull, 16ull}) {
    const double j = j_sum(n, two, 5, 3);
    CHECK(j < prev);
    prev = j;
  }
  const double too_big[] = {0.6, 0.4};
  CHECK_THROWS_AS(j_sum(2, too_big, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(j_sum(2, two, 3, 2), std::invalid_argument);
}

TEST_CASE("binomial maximum") {
  const auto one = binomial_max_check(1, 0.5);
  CHECK(one.max_term == doctest::Approx(0.5));
  CHECK(one.ratio == doctest::Approx(0.25));

  // C(100, 50) / 2^100 by a running product.
  long double c = 1.0L;
  for (int i = 1; i <= 50; ++i) c = c * (50 + i) / i / 4.0L;
  const auto hundred = binomial_max_check(100, 0.5);
  CHECK(std::abs(hundred.max_term - static_cast<double>(c)) < 1e-13);
  CHECK(hundred.ratio <= envelopes::kBinomialRatio);

  const double limit = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double prev_gap = 1.0;
  for (std::uint64_t m : {10ull, 100ull, 1000ull, 10000ull}) {
    const double gap = std::abs(binomial_max_check(m, 0.3).ratio - limit);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.01);
}
