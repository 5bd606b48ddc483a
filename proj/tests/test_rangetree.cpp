#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "orthoq/oracle.hpp"
#include "orthoq/rangetree.hpp"

using namespace orthoq;

namespace {

// Walks both leaves up to the root until they meet.
std::uint64_t naive_lca(std::uint64_t size, std::uint64_t a, std::uint64_t b) {
  std::uint64_t u = size + a - 1, v = size + b - 1;
  while (u != v) {
    u /= 2;
    v /= 2;
  }
  return u;
}

std::vector<Rect> mixed_rects(std::size_t count, std::uint64_t seed, const Rect& box) {
  std::mt19937_64 gen(seed);
  std::vector<Rect> out;
  const double w = box.width(), h = box.height();
  for (std::size_t k = 0; k < count; ++k) {
    const double scale = std::pow(10.0, -3.0 * uniform01(gen));
    const double lx = w * scale * (0.25 + uniform01(gen)), ly = h * scale * (0.25 + uniform01(gen));
    const double x = box.x_lo - 0.05 * w + (w * 1.1) * uniform01(gen);
    const double y = box.y_lo - 0.05 * h + (h * 1.1) * uniform01(gen);
    out.push_back({x, x + lx, y, y + ly});
  }
  return out;
}

std::vector<UnitPoint> points_in(const Rect& box, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<UnitPoint> pts(n);
  for (auto& p : pts) {
    p.x = box.x_lo + box.width() * uniform01(gen);
    p.y = box.y_lo + box.height() * uniform01(gen);
  }
  return pts;
}

}  // namespace

TEST_CASE("lca examples") {
  CHECK(lca_leafrange(8, 5, 5) == 12);
  CHECK(lca_leafrange(8, 4, 5) == 1);
  CHECK(lca_leafrange(8, 2, 3) == 2);
  CHECK(lca_leafrange(1, 1, 1) == 1);
  CHECK_THROWS_AS(lca_leafrange(8, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(lca_leafrange(8, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(lca_leafrange(8, 1, 9), std::invalid_argument);
  CHECK_THROWS_AS(lca_leafrange(6, 1, 2), std::invalid_argument);
}

TEST_CASE("lca bit arithmetic matches walking up, sizes up to 256") {
  for (std::uint64_t size = 1; size <= 256; size *= 2)
    for (std::uint64_t a = 1; a <= size; ++a)
      for (std::uint64_t b = a; b <= size; ++b) REQUIRE(lca_leafrange(size, a, b) == naive_lca(size, a, b));
}

TEST_CASE("range tree over no points and one point") {
  const RangeTree3 none = RangeTree3::build({}, kUnitSquare);
  CHECK(none.empty(kUnitSquare));

  const std::vector<UnitPoint> one{{0.3, 0.6}};
  const RangeTree3 t = RangeTree3::build(one, kUnitSquare);
  CHECK_FALSE(t.empty(kUnitSquare));
  CHECK_FALSE(t.empty({0.2, 0.3, 0.5, 0.6}));
  CHECK(t.empty({0.3, 0.4, 0.5, 0.6}));
  CHECK(t.empty({0.2, 0.3, 0.6, 0.7}));
}

TEST_CASE("range tree rejects points outside the cell") {
  const std::vector<UnitPoint> pts{{0.3, 0.6}, {0.7, 0.2}};
  CHECK_THROWS_AS(RangeTree3::build(pts, {0.0, 0.5, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("range tree conserves its points") {
  const auto pts = sample_points(777, 3);
  const RangeTree3 t = RangeTree3::build(pts, kUnitSquare);
  auto leaves = t.leaf_points();
  auto sorted = pts;
  auto by_x = [](const UnitPoint& a, const UnitPoint& b) { return a.x < b.x; };
  std::sort(sorted.begin(), sorted.end(), by_x);
  CHECK(leaves == sorted);
  CHECK(t.leaf_count() == 1024);
  CHECK(t.size() == 777);
}

TEST_CASE("range tree exact against the oracle") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto pts = sample_points(4096, seed);
    const RangeTree3 t = RangeTree3::build(pts, kUnitSquare);
    const oracle::SlabScan scan(pts);
    std::size_t mismatches = 0, nonempty = 0;
    std::uint32_t max_probes = 0;
    for (const Rect& q : mixed_rects(20000, seed + 100, kUnitSquare)) {
      RangeQueryTrace tr;
      const bool got = t.empty(q, &tr);
      mismatches += got != scan.empty(q);
      nonempty += !got;
      max_probes = std::max(max_probes, tr.quadrant_probes);
    }
    CHECK(mismatches == 0);
    CHECK(max_probes <= 4);
    CHECK(nonempty > 1000);
  }
}

TEST_CASE("range tree inside a sub-cell with boundary queries") {
  const Rect box{0.25, 0.5, 0.5, 0.625};
  const auto pts = points_in(box, 1500, 9);
  const RangeTree3 t = RangeTree3::build(pts, box);
  CHECK_FALSE(t.empty(box));
  for (const Rect& q : mixed_rects(20000, 10, box)) REQUIRE(t.empty(q) == oracle::oracle_empty(pts, q));
  // Rectangles whose edges sit exactly on stored coordinates.
  for (std::size_t a = 0; a + 7 < pts.size(); a += 7) {
    const Rect q{std::min(pts[a].x, pts[a + 3].x), std::max(pts[a].x, pts[a + 3].x),
                 std::min(pts[a + 5].y, pts[a + 7].y), std::max(pts[a + 5].y, pts[a + 7].y)};
    REQUIRE(t.empty(q) == oracle::oracle_empty(pts, q));
  }
}

TEST_CASE("quadrant decomposition covers the query exactly once") {
  const auto pts = sample_points(4096, 55);
  const RangeTree3 t = RangeTree3::build(pts, kUnitSquare);
  std::size_t checked = 0;
  for (const Rect& q : mixed_rects(1000, 56, kUnitSquare)) {
    RangeQueryTrace tr;
    tr.record_parts = true;
    t.empty(q, &tr);
    CHECK(tr.parts.size() <= 4);
    std::size_t sum = 0;
    for (const auto& part : tr.parts) sum += oracle::oracle_count(pts, part.region);
    REQUIRE(sum == oracle::oracle_count(pts, q));
    for (const auto& p : pts) {
      if (!rect_contains(q, p)) continue;
      int owners = 0;
      for (const auto& part : tr.parts) owners += rect_contains(part.region, p);
      REQUIRE(owners == 1);
    }
    checked += !tr.parts.empty();
  }
  CHECK(checked > 500);
}

TEST_CASE("range tree space grows like n log^2 n") {
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = sample_points(1024, seed);
    const RangeTree3 t = RangeTree3::build(pts, kUnitSquare);
    const double n = 1024.0, lg = std::log2(n);
    ratios.push_back(static_cast<double>(t.space().staircase_entries) / (n * lg * lg));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  MESSAGE("staircase entries / (n log^2 n) in [" << *lo << ", " << *hi << "]");
  CHECK(*hi <= 8.0);
  CHECK(*hi / *lo <= 1.05);
}
