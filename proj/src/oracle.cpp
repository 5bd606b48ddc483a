#include "orthoq/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace orthoq::oracle {

SortedRank::SortedRank(std::span<const double> values) : sorted_(values.begin(), values.end()) {
  std::sort(sorted_.begin(), sorted_.end());
}

std::uint32_t SortedRank::rank(double x) const {
  return static_cast<std::uint32_t>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
}

std::uint32_t oracle_rank(std::span<const double> values, double x) { return SortedRank(values).rank(x); }

namespace {

bool inside(double lo, double hi, double v) { return v > lo && !(v > hi); }

}  // namespace

bool oracle_empty(std::span<const UnitPoint> points, const Rect& r) { return oracle_count(points, r) == 0; }

std::size_t oracle_count(std::span<const UnitPoint> points, const Rect& r) {
  std::size_t c = 0;
  for (const auto& p : points) c += inside(r.x_lo, r.x_hi, p.x) && inside(r.y_lo, r.y_hi, p.y);
  return c;
}

bool oracle_empty(std::span<const std::uint32_t> perm, const RankRect& r) {
  for (std::uint32_t i = 1; i <= perm.size(); ++i) {
    const std::uint32_t j = perm[i - 1];
    if (i > r.i1 && i <= r.i2 && j > r.j1 && j <= r.j2) return false;
  }
  return true;
}

std::vector<std::uint32_t> oracle_staircase(std::span<const std::uint32_t> perm, Orientation o) {
  const auto n = static_cast<std::uint32_t>(perm.size());
  const bool low_x = o == Orientation::LowXLowY || o == Orientation::LowXHighY;
  const bool low_y = o == Orientation::LowXLowY || o == Orientation::HighXLowY;
  std::vector<std::uint32_t> f(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::uint32_t best = low_y ? n + 1 : 0;
    for (std::uint32_t x = 1; x <= n; ++x) {
      if (low_x ? x > i : x < i) continue;
      const std::uint32_t y = perm[x - 1];
      best = low_y ? std::min(best, y) : std::max(best, y);
    }
    f[i - 1] = best;
  }
  return f;
}

bool oracle_quadrant_empty(std::span<const std::uint32_t> perm, Orientation o, std::uint32_t i, std::uint32_t j) {
  const auto n = static_cast<std::uint32_t>(perm.size());
  RankRect r{};
  switch (o) {
    case Orientation::LowXLowY:
      r = {0, i, 0, j};
      break;
    case Orientation::LowXHighY:
      r = {0, i, j, n};
      break;
    case Orientation::HighXLowY:
      r = {i, n, 0, j};
      break;
    case Orientation::HighXHighY:
      r = {i, n, j, n};
      break;
  }
  return oracle_empty(perm, r);
}

SlabScan::SlabScan(std::span<const UnitPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });
  xs_.reserve(points.size());
  ys_.reserve(points.size());
  for (std::size_t k : order) {
    xs_.push_back(points[k].x);
    ys_.push_back(points[k].y);
  }
}

bool SlabScan::empty(const Rect& r) const {
  auto k = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), r.x_lo) - xs_.begin());
  for (; k < xs_.size() && !(xs_[k] > r.x_hi); ++k) {
    if (inside(r.y_lo, r.y_hi, ys_[k])) return false;
  }
  return true;
}

}  // namespace orthoq::oracle
