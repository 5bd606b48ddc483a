#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "orthoq/oracle.hpp"
#include "orthoq/rankspace.hpp"

using namespace orthoq;

namespace {

Permutation random_perm(std::uint32_t n, std::uint64_t seed) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 1u);
  std::mt19937_64 gen(seed);
  std::shuffle(p.begin(), p.end(), gen);
  return p;
}

}  // namespace

TEST_CASE("crossing store prefix sums") {
  const std::vector<RankPoint> q{{2, 3}, {4, 1}};
  const CrossingStore s = CrossingStore::build(q, 2, 4, 4);
  const auto b = s.prefix();
  CHECK(std::vector<std::uint32_t>(b.begin(), b.end()) == std::vector<std::uint32_t>{0, 1, 1, 2, 2});
  CHECK_FALSE(s.crossing_empty({0, 4, 0, 2}));
  CHECK(s.crossing_empty({0, 4, 1, 2}));
  CHECK(s.crossing_empty({1, 4, 3, 3}));
  CHECK_FALSE(s.crossing_empty({1, 4, 2, 3}));
  CHECK_THROWS_AS(s.crossing_empty({2, 4, 0, 4}), std::logic_error);
  CHECK_THROWS_AS(s.crossing_empty({0, 3, 0, 4}), std::logic_error);
}

TEST_CASE("empty crossing store") {
  const CrossingStore s = CrossingStore::build({}, 1, 3, 5);
  for (std::uint32_t j1 = 0; j1 <= 5; ++j1)
    for (std::uint32_t j2 = j1; j2 <= 5; ++j2) CHECK(s.crossing_empty({0, 5, j1, j2}));
}

TEST_CASE("crossing store rejects bad input") {
  CHECK_THROWS_AS(CrossingStore::build(std::vector<RankPoint>{{5, 1}}, 1, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(CrossingStore::build(std::vector<RankPoint>{{2, 9}}, 1, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(CrossingStore::build(std::vector<RankPoint>{{2, 3}, {3, 3}}, 1, 4, 8), std::invalid_argument);
}

TEST_CASE("crossing store agrees with a scan for all y-intervals") {
  const std::uint32_t n = 40;
  const Permutation perm = random_perm(n, 5);
  const std::uint32_t alpha = 11, beta = 23;
  std::vector<RankPoint> q;
  for (std::uint32_t i = alpha; i <= beta; ++i) q.push_back({i, perm[i - 1]});
  const CrossingStore s = CrossingStore::build(q, alpha, beta, n);
  for (std::uint32_t j1 = 0; j1 <= n; ++j1) {
    for (std::uint32_t j2 = j1; j2 <= n; ++j2) {
      bool empty = true;
      for (const auto& p : q) empty = empty && !(p.j > j1 && p.j <= j2);
      REQUIRE(s.crossing_empty({alpha - 1, beta, j1, j2}) == empty);
    }
  }
}

TEST_CASE("slab width") {
  CHECK(SlabTree::slab_width(16, 0.5) == 8);
  CHECK(SlabTree::slab_width(1, 0.5) == 1);
  CHECK(SlabTree::slab_width(2, 0.5) == 1);
  CHECK(SlabTree::slab_width(65536, 0.5) == 4096);
  CHECK(SlabTree::slab_width(100, 0.5) == 32);
}

TEST_CASE("slab tree structure for n = 16") {
  const SlabTree t = SlabTree::build(random_perm(16, 1), 0.5);
  CHECK(t.root_delta() == 8);
  CHECK(t.root_fanout() == 2);
  CHECK(t.size() == 16);
}

TEST_CASE("slab tree over one point") {
  const Permutation one{1};
  const SlabTree t = SlabTree::build(one, 0.5);
  CHECK(t.depth() == 0);
  CHECK_FALSE(t.empty({0, 1, 0, 1}));
  CHECK(t.empty({1, 1, 0, 1}));
  CHECK(t.empty({0, 1, 1, 1}));
  CHECK(SlabTree::build(Permutation{}, 0.5).empty({0, 0, 0, 0}));
}

TEST_CASE("slab tree rejects bad input") {
  CHECK_THROWS_AS(SlabTree::build(Permutation{1, 3}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SlabTree::build(Permutation{1, 2}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SlabTree::build(Permutation{1, 2}, 1.0), std::invalid_argument);
}

TEST_CASE("slab tree exhaustive agreement for n = 32") {
  const std::uint32_t n = 32;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (double eps : {0.5, 0.2, 0.9}) {
      const Permutation perm = random_perm(n, seed);
      const SlabTree t = SlabTree::build(perm, eps);
      const std::uint32_t limit = 2 * t.depth() + 1;
      std::uint64_t mismatches = 0, over = 0;
      for (std::uint32_t i1 = 0; i1 <= n; ++i1)
        for (std::uint32_t i2 = i1; i2 <= n; ++i2)
          for (std::uint32_t j1 = 0; j1 <= n; ++j1)
            for (std::uint32_t j2 = j1; j2 <= n; ++j2) {
              SlabQueryStats st;
              const RankRect q{i1, i2, j1, j2};
              mismatches += t.empty(q, &st) != oracle::oracle_empty(perm, q);
              over += st.crossing_probes > limit;
            }
      CHECK(mismatches == 0);
      CHECK(over == 0);
    }
  }
}

TEST_CASE("slab tree trivial queries") {
  const Permutation perm = random_perm(100, 3);
  const SlabTree t = SlabTree::build(perm, 0.5);
  CHECK_FALSE(t.empty({0, 100, 0, 100}));
  CHECK(t.empty({40, 40, 0, 100}));
  CHECK(t.empty({0, 100, 7, 7}));
  // Coordinates past n are clamped.
  CHECK_FALSE(t.empty({0, 500, 0, 500}));
}

TEST_CASE("slab tree random agreement at larger n") {
  for (std::uint32_t n : {1000u, 4097u}) {
    const Permutation perm = random_perm(n, n);
    const SlabTree t = SlabTree::build(perm, 0.5);
    std::mt19937_64 gen(n);
    for (int k = 0; k < 20000; ++k) {
      std::uint32_t a = gen() % (n + 1), b = gen() % (n + 1), c = gen() % (n + 1), d = gen() % (n + 1);
      if (k % 2) b = std::min(n, a + static_cast<std::uint32_t>(gen() % 20));
      if (k % 2) d = std::min(n, c + static_cast<std::uint32_t>(gen() % 20));
      const RankRect q{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
      REQUIRE(t.empty(q) == oracle::oracle_empty(perm, q));
    }
  }
}

TEST_CASE("staircase examples") {
  const Permutation p{2, 3, 1};
  std::vector<std::uint32_t> f(3);
  build_staircase(p, Orientation::LowXLowY, f);
  CHECK(f == std::vector<std::uint32_t>{2, 2, 1});
  CHECK(oracle::oracle_staircase(p, Orientation::LowXLowY) == f);

  const QuadrantStore s = QuadrantStore::build(p);
  CHECK(s.empty(Orientation::LowXLowY, 2, 1));
  CHECK_FALSE(s.empty(Orientation::LowXLowY, 3, 1));
  CHECK(s.empty(Orientation::LowXLowY, 0, 3));
  CHECK(s.empty(Orientation::LowXLowY, 3, 0));

  Permutation id(10), rev(10);
  std::iota(id.begin(), id.end(), 1u);
  for (std::uint32_t k = 0; k < 10; ++k) rev[k] = 10 - k;
  CHECK(oracle::oracle_staircase(id, Orientation::LowXLowY) == std::vector<std::uint32_t>(10, 1));
  CHECK(QuadrantStore::build(id).staircase(Orientation::LowXLowY).front() == 1);
  const QuadrantStore rs = QuadrantStore::build(rev);
  const auto fr = rs.staircase(Orientation::LowXLowY);
  CHECK(std::vector<std::uint32_t>(fr.begin(), fr.end()) == rev);
}

TEST_CASE("staircase reflection symmetry and monotonicity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Permutation p = random_perm(64, seed);
    Permutation reflected(p.rbegin(), p.rend());
    const QuadrantStore s = QuadrantStore::build(p);
    const QuadrantStore r = QuadrantStore::build(reflected);
    const auto a = s.staircase(Orientation::LowXLowY);
    const auto b = r.staircase(Orientation::HighXLowY);
    CHECK(std::equal(a.begin(), a.end(), b.rbegin(), b.rend()));
    const auto c = s.staircase(Orientation::LowXHighY);
    const auto d = r.staircase(Orientation::HighXHighY);
    CHECK(std::equal(c.begin(), c.end(), d.rbegin(), d.rend()));

    for (std::size_t i = 1; i < p.size(); ++i) {
      CHECK(s.staircase(Orientation::LowXLowY)[i] <= s.staircase(Orientation::LowXLowY)[i - 1]);
      CHECK(s.staircase(Orientation::LowXHighY)[i] >= s.staircase(Orientation::LowXHighY)[i - 1]);
      CHECK(s.staircase(Orientation::HighXLowY)[i] >= s.staircase(Orientation::HighXLowY)[i - 1]);
      CHECK(s.staircase(Orientation::HighXHighY)[i] <= s.staircase(Orientation::HighXHighY)[i - 1]);
    }
    for (Orientation o : kOrientations) {
      const auto f = s.staircase(o);
      CHECK(oracle::oracle_staircase(p, o) == std::vector<std::uint32_t>(f.begin(), f.end()));
    }
  }
}

TEST_CASE("quadrant queries agree with a scan") {
  const std::uint32_t n = 100;
  const Permutation p = random_perm(n, 17);
  const QuadrantStore s = QuadrantStore::build(p);
  for (Orientation o : kOrientations)
    for (std::uint32_t i = 0; i <= n; ++i)
      for (std::uint32_t j = 0; j <= n; ++j) REQUIRE(s.empty(o, i, j) == oracle::oracle_quadrant_empty(p, o, i, j));
  CHECK(to_string(Orientation::HighXLowY) == "highx-lowy");
}
