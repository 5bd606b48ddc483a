#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace orthoq {

struct UnitPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;
};

// Axis-aligned semi-open rectangle (x_lo, x_hi] x (y_lo, y_hi].
struct Rect {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  bool contains(const UnitPoint& p) const noexcept {
    return x_lo < p.x && p.x <= x_hi && y_lo < p.y && p.y <= y_hi;
  }
  double width() const noexcept { return x_hi - x_lo; }
  double height() const noexcept { return y_hi - y_lo; }
  double area() const noexcept { return width() * height(); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline constexpr Rect kUnitSquare{0.0, 1.0, 0.0, 1.0};

bool rect_contains(const Rect& r, const UnitPoint& p) noexcept;

// Integral rectangle (i1, i2] x (j1, j2] in rank coordinates.
struct RankRect {
  std::uint32_t i1 = 0;
  std::uint32_t i2 = 0;
  std::uint32_t j1 = 0;
  std::uint32_t j2 = 0;

  bool degenerate() const noexcept { return i1 >= i2 || j1 >= j2; }
  bool contains(std::uint32_t i, std::uint32_t j) const noexcept {
    return i1 < i && i <= i2 && j1 < j && j <= j2;
  }

  friend bool operator==(const RankRect&, const RankRect&) = default;
};

struct RankPoint {
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  friend bool operator==(const RankPoint&, const RankPoint&) = default;
};

// A 2-d point set in rank space, stored as y-ranks indexed by x-rank:
// perm[i - 1] is the y-rank of the point whose x-rank is i. Both ranks are
// 1-based.
using Permutation = std::vector<std::uint32_t>;

// Throws std::invalid_argument unless perm is a permutation of 1..perm.size().
void validate_permutation(std::span<const std::uint32_t> perm);

std::vector<RankPoint> permutation_points(std::span<const std::uint32_t> perm);

// Points sampled with std::mt19937_64 seeded by `seed`; each coordinate is
// (draw >> 11) * 2^-53, x drawn before y. The mapping from engine output to
// doubles is fixed here so files are reproducible across platforms.
std::vector<UnitPoint> sample_points(std::size_t n, std::uint64_t seed);

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct ClampedRect {
  Rect rect;
  bool empty = false;
};

// Intersects r with [0,1]^2. Reversed intervals throw std::invalid_argument.
ClampedRect clamp_query(const Rect& r);

// Rank-space image of a point set. Equal coordinates are ordered by input
// index, so the result is always a permutation.
Permutation to_rank_space(std::span<const UnitPoint> points);

}  // namespace orthoq
