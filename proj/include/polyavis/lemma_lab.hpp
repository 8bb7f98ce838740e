#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace polyavis {

/// Empirical envelope constants for the trend checks below. They are test
/// parameters fitted by experiment, not constants with an analytic derivation.
namespace envelopes {
inline constexpr double kKeyLemmaProfile = 10.0;      // profile <= this / sqrt(alpha_1 alpha_k)
inline constexpr double kMedianFactor = 20.0;         // no profile term above this x median
inline constexpr double kCosineSum = 2.0;             // I(l, d) <= this * d / sqrt(l)
inline constexpr double kBinomialRatio = 1.0;         // max binomial term * sqrt(m a (1-a))
inline constexpr double kDivisorExponent = 0.3;       // tau(n) <= C n^0.3 for n <= 10^6
inline constexpr double kDivisorConstant = 6.0;
inline constexpr double kNormalizedSumBound = 10.0;   // H and J sums, normalized
}  // namespace envelopes

/// A point of the open simplex: 0 < alpha_r < 1 for r < k and sum alpha_r < 1.
/// alpha_k = 1 - sum is implied.
class AlphaVector {
 public:
  explicit AlphaVector(std::vector<double> alpha);

  std::size_t dimension() const { return alpha_.size() + 1; }  // k
  std::span<const double> free() const { return alpha_; }      // alpha_1 .. alpha_{k-1}
  double last() const { return last_; }                        // alpha_k
  double operator[](std::size_t r) const { return r + 1 < dimension() ? alpha_[r] : last_; }

 private:
  std::vector<double> alpha_;
  double last_;
};

/// u_r = c_r (mod d) for r = 1 .. k-1; residues are stored reduced into [0, d).
class ResidueConstraint {
 public:
  ResidueConstraint(std::uint64_t d, std::span<const std::int64_t> residues);
  ResidueConstraint(std::uint64_t d, std::initializer_list<std::int64_t> residues)
      : ResidueConstraint(d, std::span<const std::int64_t>(residues.begin(), residues.size())) {}

  std::uint64_t modulus() const { return d_; }
  std::span<const std::uint64_t> residues() const { return c_; }

 private:
  std::uint64_t d_;
  std::vector<std::uint64_t> c_;
};

inline constexpr std::uint64_t kMaxLabTerms = 10'000'000;

/// L = sum over compositions u of n with u_r = c_r (mod d), r < k, of
/// multinomial(n; u) prod alpha_r^{u_r}. Direct enumeration.
double constrained_sum_direct(std::uint64_t n, const AlphaVector& alpha, const ResidueConstraint& rc);

/// The same L via additive characters:
/// d^{1-k} sum_h prod_r e(-h_r c_r / d) (alpha_1 e(h_1/d) + ... + alpha_k)^n.
/// Throws std::runtime_error if the imaginary part exceeds 1e-9.
double constrained_sum_characters(std::uint64_t n, const AlphaVector& alpha,
                                  const ResidueConstraint& rc);

/// (n, |L - d^{1-k}| sqrt(n) / log n) for each n of an ascending grid with n >= 2.
std::vector<std::pair<std::uint64_t, double>> key_lemma_error_profile(
    const AlphaVector& alpha, const ResidueConstraint& rc, std::span<const std::uint64_t> n_grid);

struct CosineSum {
  double value = 0.0;
  double ratio = 0.0;  // value * sqrt(l) / d, the fitted constant; 0 when l = 0
};

/// I(l, d) = sum_{1 <= h < d/2} cos^l(pi h / d), for d > 2.
CosineSum cosine_power_sum(std::uint64_t l, std::uint64_t d);

/// H_{n,delta}(d) = (1/d) sum_{1<=h<=d-1} (1 - delta + delta cos(2 pi h / d))^{n/2},
/// 0 < delta <= 1/2, d > 1.
double h_sum(std::uint64_t n, double delta, std::uint64_t d);

/// H * sqrt(delta (1 - delta)) * sqrt(n) / log n.
double h_sum_normalized(std::uint64_t n, double delta, std::uint64_t d);

/// J = d^{1-l} sum_{h in {1..d-1}^i} |lambda_1 e(h_1/d) + ... + lambda_i e(h_i/d) + eta|^n,
/// eta = 1 - sum lambda, i = lambdas.size() with 1 <= i <= l-1.
double j_sum(std::uint64_t n, std::span<const double> lambdas, std::uint64_t d, std::uint64_t l);

/// J * sqrt(2 eta lambda_i (1 - 2 eta lambda_i)) * sqrt(n) / log n.
double j_sum_normalized(std::uint64_t n, std::span<const double> lambdas, std::uint64_t d,
                        std::uint64_t l);

struct BinomialMax {
  double max_term = 0.0;
  double ratio = 0.0;  // max_term * sqrt(m alpha (1 - alpha))
};

/// max over t of C(m, t) alpha^t (1 - alpha)^{m-t}.
BinomialMax binomial_max_check(std::uint64_t m, double alpha);

}  // namespace polyavis
