#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace polyavis {

/// A point of Z^k with nonnegative coordinates, k >= 2.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::uint64_t> coords);
  LatticePoint(std::initializer_list<std::uint64_t> coords)
      : LatticePoint(std::vector<std::uint64_t>(coords)) {}

  std::size_t dimension() const { return coords_.size(); }
  std::span<const std::uint64_t> coords() const { return coords_; }
  std::uint64_t operator[](std::size_t r) const { return coords_[r]; }

  /// Adds one unit to coordinate r; throws std::overflow_error on wraparound.
  void increment(std::size_t r);

  /// "(a, b, c)".
  std::string to_string() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<std::uint64_t> coords_;
};

/// s(p) = p_1 + ... + p_k. Throws std::overflow_error rather than wrapping.
std::uint64_t component_sum(const LatticePoint& p);
std::uint64_t component_sum(std::span<const std::uint64_t> coords);

/// Binary gcd.
std::uint64_t gcd64(std::uint64_t a, std::uint64_t b);

/// gcd(coords) == 1, folding left to right and stopping once the running gcd hits 1.
/// Throws std::invalid_argument for the all-zero point.
bool is_visible(std::span<const std::uint64_t> coords);
inline bool is_visible(const LatticePoint& p) { return is_visible(p.coords()); }

}  // namespace polyavis
