#include "orthoq/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orthoq {

bool rect_contains(const Rect& r, const UnitPoint& p) noexcept { return r.contains(p); }

void validate_permutation(std::span<const std::uint32_t> perm) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n + 1, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t y = perm[k];
    if (y < 1 || y > n || seen[y]) {
      throw std::invalid_argument("not a permutation: entry " + std::to_string(k + 1) +
                                  " has value " + std::to_string(y));
    }
    seen[y] = true;
  }
}

std::vector<RankPoint> permutation_points(std::span<const std::uint32_t> perm) {
  std::vector<RankPoint> out;
  out.reserve(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    out.push_back({static_cast<std::uint32_t>(k + 1), perm[k]});
  }
  return out;
}

std::vector<UnitPoint> sample_points(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_points: n must be positive");
  std::mt19937_64 gen(seed);
  std::vector<UnitPoint> pts(n);
  for (auto& p : pts) {
    p.x = uniform01(gen);
    p.y = uniform01(gen);
  }
  return pts;
}

ClampedRect clamp_query(const Rect& r) {
  if (!(r.x_lo <= r.x_hi) || !(r.y_lo <= r.y_hi)) {
    throw std::invalid_argument("clamp_query: reversed or NaN interval");
  }
  ClampedRect out;
  out.rect = {std::clamp(r.x_lo, 0.0, 1.0), std::clamp(r.x_hi, 0.0, 1.0),
              std::clamp(r.y_lo, 0.0, 1.0), std::clamp(r.y_hi, 0.0, 1.0)};
  out.empty = out.rect.x_lo >= out.rect.x_hi || out.rect.y_lo >= out.rect.y_hi;
  return out;
}

Permutation to_rank_space(std::span<const UnitPoint> points) {
  const std::size_t n = points.size();
  std::vector<std::uint32_t> by_x(n), by_y(n);
  std::iota(by_x.begin(), by_x.end(), 0u);
  std::iota(by_y.begin(), by_y.end(), 0u);
  std::sort(by_x.begin(), by_x.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a].x < points[b].x || (points[a].x == points[b].x && a < b);
  });
  std::sort(by_y.begin(), by_y.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a].y < points[b].y || (points[a].y == points[b].y && a < b);
  });
  std::vector<std::uint32_t> y_rank(n);
  for (std::size_t r = 0; r < n; ++r) y_rank[by_y[r]] = static_cast<std::uint32_t>(r + 1);
  Permutation perm(n);
  for (std::size_t r = 0; r < n; ++r) perm[r] = y_rank[by_x[r]];
  return perm;
}

}  // namespace orthoq
