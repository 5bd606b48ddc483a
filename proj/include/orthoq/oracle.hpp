#pragma once

// Brute-force reference answers. Nothing here calls into the structures
// it is used to check; membership tests are spelled out again on purpose.

#include <cstdint>
#include <span>
#include <vector>

#include "orthoq/core.hpp"
#include "orthoq/rankspace.hpp"

namespace orthoq::oracle {

// Number of values <= x, by sorting once and binary searching.
class SortedRank {
 public:
  explicit SortedRank(std::span<const double> values);
  std::uint32_t rank(double x) const;
  std::span<const double> sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

std::uint32_t oracle_rank(std::span<const double> values, double x);

bool oracle_empty(std::span<const UnitPoint> points, const Rect& r);
// perm[i - 1] = j for each point (i, j).
bool oracle_empty(std::span<const std::uint32_t> perm, const RankRect& r);
std::size_t oracle_count(std::span<const UnitPoint> points, const Rect& r);

// F over x-ranks 1..n from the definition: for every i, scan all points on
// the reached side of i and take the extreme y.
std::vector<std::uint32_t> oracle_staircase(std::span<const std::uint32_t> perm, Orientation o);

// Linear-scan quadrant emptiness, with the same (i, j) convention as the
// staircase test.
bool oracle_quadrant_empty(std::span<const std::uint32_t> perm, Orientation o, std::uint32_t i, std::uint32_t j);

// Points sorted by x; a query scans only the x-slab (x_lo, x_hi]. Answers
// match oracle_empty and take time proportional to the slab.
class SlabScan {
 public:
  explicit SlabScan(std::span<const UnitPoint> points);
  bool empty(const Rect& r) const;
  std::size_t size() const noexcept { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace orthoq::oracle
