#include "polyavis/lattice.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <utility>

namespace polyavis {

LatticePoint::LatticePoint(std::vector<std::uint64_t> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("lattice point dimension must be >= 2");
}

void LatticePoint::increment(std::size_t r) {
  if (coords_[r] == std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("lattice coordinate overflow");
  ++coords_[r];
}

std::string LatticePoint::to_string() const {
  std::string out = "(";
  for (std::size_t r = 0; r < coords_.size(); ++r) {
    if (r) out += ", ";
    out += std::to_string(coords_[r]);
  }
  return out + ")";
}

std::uint64_t component_sum(std::span<const std::uint64_t> coords) {
  std::uint64_t total = 0;
  for (std::uint64_t c : coords) {
    if (__builtin_add_overflow(total, c, &total))
      throw std::overflow_error("component sum overflows 64 bits");
  }
  return total;
}

std::uint64_t component_sum(const LatticePoint& p) { return component_sum(p.coords()); }

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = std::countr_zero(a | b);
  a >>= std::countr_zero(a);
  do {
    b >>= std::countr_zero(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

bool is_visible(std::span<const std::uint64_t> coords) {
  std::uint64_t g = 0;
  for (std::uint64_t c : coords) {
    g = gcd64(g, c);
    if (g == 1) return true;
  }
  if (g == 0) throw std::invalid_argument("visibility of the origin is undefined");
  return false;
}

}  // namespace polyavis
