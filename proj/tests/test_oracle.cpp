#include <doctest.h>

#include <random>

#include "orthoq/harness.hpp"
#include "orthoq/oracle.hpp"

using namespace orthoq;

TEST_CASE("oracle rank examples") {
  const std::vector<double> v{0.25, 0.5, 0.75};
  CHECK(oracle::oracle_rank(v, 0.6) == 2);
  CHECK(oracle::oracle_rank(v, 0.25) == 1);
  CHECK(oracle::oracle_rank({}, 0.3) == 0);
}

TEST_CASE("oracle emptiness boundaries") {
  const std::vector<UnitPoint> pts{{0.5, 0.5}};
  CHECK_FALSE(oracle::oracle_empty(pts, kUnitSquare));
  CHECK(oracle::oracle_empty(std::vector<UnitPoint>{}, kUnitSquare));
  CHECK_FALSE(oracle::oracle_empty(pts, {0.2, 0.5, 0.2, 0.5}));
  CHECK(oracle::oracle_empty(pts, {0.5, 0.8, 0.2, 0.8}));
  CHECK(oracle::oracle_empty(pts, {0.2, 0.8, 0.5, 0.8}));

  const Permutation perm{2, 3, 1};
  CHECK_FALSE(oracle::oracle_empty(perm, RankRect{0, 3, 0, 3}));
  CHECK(oracle::oracle_empty(perm, RankRect{0, 2, 0, 1}));
  CHECK_FALSE(oracle::oracle_empty(perm, RankRect{2, 3, 0, 1}));
}

TEST_CASE("oracle staircase examples") {
  CHECK(oracle::oracle_staircase(Permutation{2, 3, 1}, Orientation::LowXLowY) == std::vector<std::uint32_t>{2, 2, 1});
  CHECK(oracle::oracle_staircase(Permutation{4, 3, 2, 1}, Orientation::LowXLowY) ==
        std::vector<std::uint32_t>{4, 3, 2, 1});
  CHECK(oracle::oracle_staircase(Permutation{1, 2, 3, 4}, Orientation::LowXLowY) ==
        std::vector<std::uint32_t>{1, 1, 1, 1});
  CHECK(oracle::oracle_staircase(Permutation{2, 3, 1}, Orientation::HighXHighY) ==
        std::vector<std::uint32_t>{3, 3, 1});
}

TEST_CASE("slab scan matches the linear scan") {
  const auto pts = sample_points(3000, 1);
  const oracle::SlabScan scan(pts);
  CHECK(scan.size() == 3000);
  std::mt19937_64 gen(2);
  for (int k = 0; k < 5000; ++k) {
    const double x = uniform01(gen), y = uniform01(gen), s = 0.1 * uniform01(gen);
    const Rect r{x, x + s, y, y + s};
    REQUIRE(scan.empty(r) == oracle::oracle_empty(pts, r));
  }
  for (std::size_t k = 0; k + 1 < pts.size(); k += 3) {
    const Rect r{pts[k].x, pts[k + 1].x, 0.0, 1.0};
    REQUIRE(scan.empty(r) == oracle::oracle_empty(pts, r));
  }
}

TEST_CASE("workloads stay inside the unit square") {
  WorkloadSpec w;
  w.query_count = 20000;
  w.area_min = 1e-6;
  w.area_max = 0.9;
  const auto rects = generate_workload(w);
  CHECK(rects.size() == 20000);
  for (const Rect& r : rects) {
    REQUIRE(r.x_lo >= 0.0);
    REQUIRE(r.y_lo >= 0.0);
    REQUIRE(r.x_hi <= 1.0);
    REQUIRE(r.y_hi <= 1.0);
    REQUIRE(r.x_lo <= r.x_hi);
    REQUIRE(r.y_lo <= r.y_hi);
    REQUIRE(r.area() <= 0.9 * (1 + 1e-9));
  }
  CHECK(generate_workload(w) == rects);

  w.area_distribution = AreaDistribution::Fixed;
  w.area_min = 0.01;
  for (const Rect& r : generate_workload(w)) REQUIRE(r.area() == doctest::Approx(0.01).epsilon(1e-9));

  w.area_min = 0.0;
  CHECK_THROWS_AS(generate_workload(w), std::invalid_argument);
}

TEST_CASE("default workload straddles the grid threshold") {
  const auto w = default_workload(65536, 32.0, 100000, 3);
  const double t = GridParams::compute(65536, 32.0).threshold();
  CHECK(w.area_min < t);
  CHECK(w.area_max > t);
  std::size_t above = 0;
  for (const Rect& r : generate_workload(w)) above += r.area() > t;
  CHECK(above > 5000);
  CHECK(above < 50000);
}

TEST_CASE("percentiles") {
  CHECK(percentile({}, 0.5) == 0.0);
  CHECK(percentile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(percentile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.99) == 10.0);
  CHECK(percentile({1, 2, 3, 4}, 0.5) == 2.0);
}

TEST_CASE("run reports have the documented fields") {
  const auto pts = sample_points(2000, 4);
  for (const char* name : {"rank1d", "slabtree", "quadrant", "rangetree", "main1", "main2", "oracle"}) {
    RunOptions opt;
    opt.structure = *parse_structure(name);
    const auto r = run_structure(pts, default_workload(2000, 32.0, 3000, 5), opt);
    CHECK(r.ok());
    CHECK(r.queries == 3000);
    const auto j = to_json(r);
    for (const char* key : {"structure", "n", "build_ns", "bytes", "latency_ns", "mismatches", "probe_histogram",
                            "cell_histogram", "ok"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["structure"] == name);
  }
  CHECK_FALSE(parse_structure("kdtree").has_value());
}

TEST_CASE("exhaustive runs") {
  const auto pts = sample_points(24, 6);
  RunOptions opt;
  opt.exhaustive = true;
  opt.time = false;
  opt.structure = Structure::SlabTree;
  auto r = run_structure(pts, {}, opt);
  CHECK(r.ok());
  CHECK(r.queries == 325 * 325);
  opt.structure = Structure::Quadrant;
  r = run_structure(pts, {}, opt);
  CHECK(r.ok());
  CHECK(r.queries == 4 * 25 * 25);
  opt.structure = Structure::Rank1D;
  r = run_structure(pts, {}, opt);
  CHECK(r.ok());
}

TEST_CASE("sharded grid runs match whole builds") {
  const auto pts = sample_points(16384, 7);
  RunOptions opt;
  opt.structure = Structure::Main2;
  const auto w = default_workload(16384, 32.0, 20000, 8);
  const auto whole = run_structure(pts, w, opt);
  opt.shard_cells = 5;
  const auto sharded = run_structure(pts, w, opt);
  CHECK(sharded.shards == 7);
  CHECK(whole.bytes == sharded.bytes);
  CHECK(whole.nonempty == sharded.nonempty);
  CHECK(whole.cell_histogram == sharded.cell_histogram);
  CHECK(whole.probe_histogram == sharded.probe_histogram);
  CHECK(sharded.ok());
}
