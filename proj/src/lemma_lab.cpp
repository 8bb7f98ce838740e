#include "polyavis/lemma_lab.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "polyavis/compositions.hpp"
#include "polyavis/errors.hpp"
#include "polyavis/exact.hpp"

namespace polyavis {

namespace {

using Complex = std::complex<double>;

// e(num / den) = exp(2 pi i num / den), exact at multiples of a quarter turn.
Complex unit_root(std::uint64_t num, std::uint64_t den) {
  num %= den;
  if ((4 * num) % den == 0) {
    switch ((4 * num) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // Use the representative in (-1/2, 1/2] for the smallest angle.
  const double frac = 2 * num > den ? -static_cast<double>(den - num) / static_cast<double>(den)
                                    : static_cast<double>(num) / static_cast<double>(den);
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

double cos_2pi(std::uint64_t num, std::uint64_t den) { return unit_root(num, den).real(); }

Complex complex_pow(Complex base, std::uint64_t n) {
  Complex result{1.0, 0.0};
  while (n != 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// Saturating integer power, for size guards.
std::uint64_t guarded_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > kMaxLabTerms / base + 1) return kMaxLabTerms + 1;
    out *= base;
  }
  return out;
}

void check_dimension(const AlphaVector& alpha, const ResidueConstraint& rc) {
  if (rc.residues().size() + 1 != alpha.dimension())
    throw std::invalid_argument("residue constraint needs k-1 = " +
                                std::to_string(alpha.dimension() - 1) + " residues");
}

}  // namespace

AlphaVector::AlphaVector(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw std::invalid_argument("alpha must have k-1 >= 1 components");
  double sum = 0.0;
  for (double a : alpha_) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha components must lie in (0, 1)");
    sum += a;
  }
  if (!(sum < 1.0)) throw std::invalid_argument("alpha components must sum to less than 1");
  last_ = 1.0 - sum;
}

ResidueConstraint::ResidueConstraint(std::uint64_t d, std::span<const std::int64_t> residues) : d_(d) {
  if (d == 0) throw std::invalid_argument("modulus d must be >= 1");
  const auto dd = static_cast<std::int64_t>(d);
  for (std::int64_t c : residues) c_.push_back(static_cast<std::uint64_t>(((c % dd) + dd) % dd));
}

double constrained_sum_direct(std::uint64_t n, const AlphaVector& alpha, const ResidueConstraint& rc) {
  check_dimension(alpha, rc);
  const std::size_t k = alpha.dimension();
  if (composition_count(n, k) > kMaxLabTerms)
    throw SizeGuardError("constrained_sum_direct: too many compositions");
  std::vector<double> log_alpha(k);
  for (std::size_t r = 0; r < k; ++r) log_alpha[r] = std::log(alpha[r]);
  const std::uint64_t d = rc.modulus();
  const auto c = rc.residues();

  double sum = 0.0;
  for_each_composition(n, k, [&](std::span<const std::uint64_t> u) {
    for (std::size_t r = 0; r + 1 < k; ++r) {
      if (u[r] % d != c[r]) return;
    }
    double log_term = log_multinomial(u);
    for (std::size_t r = 0; r < k; ++r) {
      if (u[r] != 0) log_term += static_cast<double>(u[r]) * log_alpha[r];
    }
    sum += std::exp(log_term);
  });
  return sum;
}

double constrained_sum_characters(std::uint64_t n, const AlphaVector& alpha,
                                  const ResidueConstraint& rc) {
  check_dimension(alpha, rc);
  const std::size_t free = alpha.dimension() - 1;
  const std::uint64_t d = rc.modulus();
  const auto c = rc.residues();
  const std::uint64_t terms = guarded_pow(d, free);
  if (terms > kMaxLabTerms) throw SizeGuardError("constrained_sum_characters: d^{k-1} too large");

  std::vector<std::uint64_t> h(free, 0);
  Complex total{0.0, 0.0};
  for (std::uint64_t index = 0; index < terms; ++index) {
    Complex base{alpha.last(), 0.0};
    std::uint64_t phase = 0;
    for (std::size_t r = 0; r < free; ++r) {
      base += alpha[r] * unit_root(h[r], d);
      phase = (phase + h[r] * c[r]) % d;
    }
    total += unit_root(d - phase, d) * complex_pow(base, n);
    for (std::size_t r = 0; r < free; ++r) {
      if (++h[r] < d) break;
      h[r] = 0;
    }
  }
  total /= static_cast<double>(terms);
  if (std::abs(total.imag()) > 1e-9)
    throw std::runtime_error("constrained_sum_characters: imaginary part " +
                             std::to_string(total.imag()) + " is not negligible");
  return total.real();
}

std::vector<std::pair<std::uint64_t, double>> key_lemma_error_profile(
    const AlphaVector& alpha, const ResidueConstraint& rc, std::span<const std::uint64_t> n_grid) {
  const double main = std::pow(static_cast<double>(rc.modulus()),
                               1.0 - static_cast<double>(alpha.dimension()));
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(n_grid.size());
  std::uint64_t previous = 0;
  for (std::uint64_t n : n_grid) {
    if (n < 2) throw std::invalid_argument("key_lemma_error_profile: grid entries must be >= 2");
    if (n < previous) throw std::invalid_argument("key_lemma_error_profile: grid must be ascending");
    previous = n;
    const double value = constrained_sum_characters(n, alpha, rc);
    const double nn = static_cast<double>(n);
    out.emplace_back(n, std::abs(value - main) * std::sqrt(nn) / std::log(nn));
  }
  return out;
}

CosineSum cosine_power_sum(std::uint64_t l, std::uint64_t d) {
  if (d <= 2) throw std::invalid_argument("cosine_power_sum: d must be > 2");
  CosineSum out;
  // cos(pi h / d) = cos(2 pi h / (2d))
  for (std::uint64_t h = 1; 2 * h < d; ++h)
    out.value += std::pow(cos_2pi(h, 2 * d), static_cast<double>(l));
  if (l >= 1) out.ratio = out.value * std::sqrt(static_cast<double>(l)) / static_cast<double>(d);
  return out;
}

double h_sum(std::uint64_t n, double delta, std::uint64_t d) {
  if (n == 0) throw std::invalid_argument("h_sum: n must be >= 1");
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("h_sum: delta must lie in (0, 1/2]");
  if (d <= 1) throw std::invalid_argument("h_sum: d must be > 1");
  double sum = 0.0;
  const double half_n = static_cast<double>(n) / 2.0;
  for (std::uint64_t h = 1; h < d; ++h) {
    const double base = 1.0 - delta + delta * cos_2pi(h, d);
    sum += std::pow(base, half_n);
  }
  return sum / static_cast<double>(d);
}

double h_sum_normalized(std::uint64_t n, double delta, std::uint64_t d) {
  if (n < 2) throw std::invalid_argument("h_sum_normalized: n must be >= 2");
  const double nn = static_cast<double>(n);
  return h_sum(n, delta, d) * std::sqrt(delta * (1.0 - delta)) * std::sqrt(nn) / std::log(nn);
}

double j_sum(std::uint64_t n, std::span<const double> lambdas, std::uint64_t d, std::uint64_t l) {
  const std::size_t i = lambdas.size();
  if (l < 2) throw std::invalid_argument("j_sum: l must be >= 2");
  if (i < 1 || i > l - 1) throw std::invalid_argument("j_sum: need 1 <= #lambdas <= l-1");
  if (d <= 1) throw std::invalid_argument("j_sum: d must be > 1");
  double sum_lambda = 0.0;
  for (double x : lambdas) {
    if (!(x > 0.0)) throw std::invalid_argument("j_sum: lambdas must be positive");
    sum_lambda += x;
  }
  if (!(sum_lambda < 1.0)) throw std::invalid_argument("j_sum: lambdas must sum to less than 1");
  const double eta = 1.0 - sum_lambda;
  const std::uint64_t terms = guarded_pow(d - 1, i);
  if (guarded_pow(d, i) > kMaxLabTerms) throw SizeGuardError("j_sum: d^i too large");

  std::vector<std::uint64_t> h(i, 1);
  double sum = 0.0;
  const double nn = static_cast<double>(n);
  for (std::uint64_t index = 0; index < terms; ++index) {
    Complex z{eta, 0.0};
    for (std::size_t a = 0; a < i; ++a) z += lambdas[a] * unit_root(h[a], d);
    sum += std::pow(std::abs(z), nn);
    for (std::size_t a = 0; a < i; ++a) {
      if (++h[a] < d) break;
      h[a] = 1;
    }
  }
  return sum * std::pow(static_cast<double>(d), 1.0 - static_cast<double>(l));
}

double j_sum_normalized(std::uint64_t n, std::span<const double> lambdas, std::uint64_t d,
                        std::uint64_t l) {
  if (n < 2) throw std::invalid_argument("j_sum_normalized: n must be >= 2");
  const double value = j_sum(n, lambdas, d, l);
  double sum_lambda = 0.0;
  for (double x : lambdas) sum_lambda += x;
  const double w = 2.0 * (1.0 - sum_lambda) * lambdas.back();
  const double nn = static_cast<double>(n);
  return value * std::sqrt(w * (1.0 - w)) * std::sqrt(nn) / std::log(nn);
}

BinomialMax binomial_max_check(std::uint64_t m, double alpha) {
  if (m == 0) throw std::invalid_argument("binomial_max_check: m must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("binomial_max_check: alpha in (0,1)");
  const double mm = static_cast<double>(m);
  const double la = std::log(alpha), lb = std::log1p(-alpha);
  const double lm = std::lgamma(mm + 1.0);
  double best = -INFINITY;
  for (std::uint64_t t = 0; t <= m; ++t) {
    const double tt = static_cast<double>(t);
    const double log_term =
        lm - std::lgamma(tt + 1.0) - std::lgamma(mm - tt + 1.0) + tt * la + (mm - tt) * lb;
    best = std::max(best, log_term);
  }
  BinomialMax out;
  out.max_term = std::exp(best);
  out.ratio = out.max_term * std::sqrt(mm * alpha * (1.0 - alpha));
  return out;
}

}  // namespace polyavis
