#include "orthoq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "orthoq/oracle.hpp"
#include "orthoq/rangetree.hpp"
#include "orthoq/rank.hpp"
#include "orthoq/rankspace.hpp"

namespace orthoq {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t since(Clock::time_point t0) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

constexpr std::size_t kMaxViolationsKept = 20;

void violation(RunReport& r, std::string what) {
  if (r.violations.size() < kMaxViolationsKept) r.violations.push_back(std::move(what));
}

// Amortized per-query time of each batch, after an untimed warmup over the
// first tenth of a batch.
template <class Query>
void time_batches(std::size_t count, std::size_t batch, Query&& query, std::vector<double>& per_query_ns) {
  if (count == 0) return;
  batch = std::max<std::size_t>(batch, 1);
  std::uint64_t sink = 0;
  for (std::size_t k = 0; k < std::min(std::max<std::size_t>(batch / 10, 1), count); ++k) sink += query(k);
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t end = std::min(count, start + batch);
    const auto t0 = Clock::now();
    for (std::size_t k = start; k < end; ++k) sink += query(k);
    per_query_ns.push_back(static_cast<double>(since(t0)) / static_cast<double>(end - start));
  }
  volatile std::uint64_t keep = sink;
  (void)keep;
}

void finish_timing(RunReport& r, const std::vector<double>& per_query_ns) {
  r.batches = per_query_ns.size();
  if (per_query_ns.empty()) return;
  r.p50_ns = percentile(per_query_ns, 0.50);
  r.p99_ns = percentile(per_query_ns, 0.99);
}

void compare_exact(RunReport& r, bool got_empty, bool want_empty) {
  if (!got_empty) ++r.nonempty;
  if (got_empty == want_empty) return;
  ++r.mismatch_other;
  if (got_empty) {
    ++r.false_empty;
  } else {
    ++r.false_nonempty;
  }
}

std::vector<double> column(std::span<const UnitPoint> points, bool x) {
  std::vector<double> v(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) v[k] = x ? points[k].x : points[k].y;
  return v;
}

std::vector<UnitPoint> rank_points(std::span<const std::uint32_t> perm) {
  std::vector<UnitPoint> pts(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) pts[k] = {static_cast<double>(k + 1), static_cast<double>(perm[k])};
  return pts;
}

Rect as_rect(const RankRect& q) {
  return {static_cast<double>(q.i1), static_cast<double>(q.i2), static_cast<double>(q.j1), static_cast<double>(q.j2)};
}

RankRect quadrant_rect(Orientation o, std::uint32_t n, std::uint32_t i, std::uint32_t j) {
  switch (o) {
    case Orientation::LowXLowY:
      return {0, i, 0, j};
    case Orientation::LowXHighY:
      return {0, i, j, n};
    case Orientation::HighXLowY:
      return {i, n, 0, j};
    case Orientation::HighXHighY:
      return {i, n, j, n};
  }
  return {};
}

void run_rank1d(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt) {
  const std::vector<double> xs = column(points, true);
  auto t0 = Clock::now();
  const Rank1D s = Rank1D::build(xs, {0.0, 1.0});
  r.build_ns = since(t0);
  r.bytes = s.bytes();

  std::vector<double> qs;
  if (opt.exhaustive) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    qs = {0.0, 1.0, -1.0, 2.0};
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      qs.push_back(sorted[k]);
      qs.push_back(std::nextafter(sorted[k], -1.0));
      if (k + 1 < sorted.size()) qs.push_back(0.5 * (sorted[k] + sorted[k + 1]));
    }
  } else {
    qs.reserve(rects.size());
    for (std::size_t k = 0; k < rects.size(); ++k) {
      qs.push_back(k % 2 == 0 || xs.empty() ? rects[k].x_lo : xs[(k * 2654435761u) % xs.size()]);
    }
  }
  r.queries = qs.size();
  if (opt.verify) {
    r.verified = true;
    const oracle::SortedRank o(xs);
    for (double q : qs) {
      if (s.rank(q) != o.rank(q)) ++r.mismatch_other;
    }
  }
  if (opt.time) {
    std::vector<double> ns;
    time_batches(qs.size(), opt.batch, [&](std::size_t k) { return s.rank(qs[k]); }, ns);
    finish_timing(r, ns);
  }
}

void run_slabtree(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt) {
  auto t0 = Clock::now();
  const Permutation perm = to_rank_space(points);
  const SlabTree tree = SlabTree::build(perm, opt.eps);
  r.build_ns = since(t0);
  r.bytes = tree.bytes();
  const auto n = static_cast<std::uint32_t>(perm.size());

  std::vector<RankRect> qs;
  if (opt.exhaustive) {
    if (n > 64) throw std::invalid_argument("exhaustive slabtree sweeps are limited to n <= 64");
    for (std::uint32_t i1 = 0; i1 <= n; ++i1)
      for (std::uint32_t i2 = i1; i2 <= n; ++i2)
        for (std::uint32_t j1 = 0; j1 <= n; ++j1)
          for (std::uint32_t j2 = j1; j2 <= n; ++j2) qs.push_back({i1, i2, j1, j2});
  } else {
    const std::vector<double> xs = column(points, true), ys = column(points, false);
    const oracle::SortedRank ox(xs), oy(ys);
    qs.reserve(rects.size());
    for (const Rect& q : rects) qs.push_back({ox.rank(q.x_lo), ox.rank(q.x_hi), oy.rank(q.y_lo), oy.rank(q.y_hi)});
  }
  r.queries = qs.size();
  if (opt.verify) {
    r.verified = true;
    const std::vector<UnitPoint> rp = rank_points(perm);
    const oracle::SlabScan scan(rp);
    const std::uint32_t limit = 2 * tree.depth() + 1;
    for (const RankRect& q : qs) {
      SlabQueryStats st;
      const bool got = tree.empty(q, &st);
      const bool want = opt.exhaustive ? oracle::oracle_empty(perm, q) : scan.empty(as_rect(q));
      compare_exact(r, got, want);
      ++r.probe_histogram[st.crossing_probes];
      if (st.crossing_probes > limit) {
        violation(r, "crossing probes " + std::to_string(st.crossing_probes) + " exceed 2*depth+1 = " +
                         std::to_string(limit));
      }
    }
  }
  if (opt.time) {
    std::vector<double> ns;
    time_batches(qs.size(), opt.batch, [&](std::size_t k) { return std::uint64_t{tree.empty(qs[k])}; }, ns);
    finish_timing(r, ns);
  }
}

void run_quadrant(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt) {
  auto t0 = Clock::now();
  const Permutation perm = to_rank_space(points);
  const QuadrantStore store = QuadrantStore::build(perm);
  r.build_ns = since(t0);
  r.bytes = store.bytes();
  const auto n = static_cast<std::uint32_t>(perm.size());

  struct Q {
    Orientation o;
    std::uint32_t i, j;
  };
  std::vector<Q> qs;
  if (opt.exhaustive) {
    if (n > 1024) throw std::invalid_argument("exhaustive quadrant sweeps are limited to n <= 1024");
    for (Orientation o : kOrientations)
      for (std::uint32_t i = 0; i <= n; ++i)
        for (std::uint32_t j = 0; j <= n; ++j) qs.push_back({o, i, j});
  } else {
    const std::vector<double> xs = column(points, true), ys = column(points, false);
    const oracle::SortedRank ox(xs), oy(ys);
    for (std::size_t k = 0; k < rects.size(); ++k) {
      const Orientation o = kOrientations[k % 4];
      const bool low_x = o == Orientation::LowXLowY || o == Orientation::LowXHighY;
      const bool low_y = o == Orientation::LowXLowY || o == Orientation::HighXLowY;
      qs.push_back({o, ox.rank(low_x ? rects[k].x_hi : rects[k].x_lo), oy.rank(low_y ? rects[k].y_hi : rects[k].y_lo)});
    }
  }
  r.queries = qs.size();
  if (opt.verify) {
    r.verified = true;
    if (opt.exhaustive) {
      for (Orientation o : kOrientations) {
        const std::vector<std::uint32_t> f = oracle::oracle_staircase(perm, o);
        const auto got = store.staircase(o);
        if (!std::equal(f.begin(), f.end(), got.begin(), got.end())) {
          violation(r, "staircase " + std::string(to_string(o)) + " differs from the oracle");
        }
      }
    }
    const std::vector<UnitPoint> rp = rank_points(perm);
    const oracle::SlabScan scan(rp);
    for (const Q& q : qs) {
      const bool want = opt.exhaustive ? oracle::oracle_quadrant_empty(perm, q.o, q.i, q.j)
                                       : scan.empty(as_rect(quadrant_rect(q.o, n, q.i, q.j)));
      compare_exact(r, store.empty(q.o, q.i, q.j), want);
    }
    r.probe_histogram[1] = qs.size();
  }
  if (opt.time) {
    std::vector<double> ns;
    time_batches(qs.size(), opt.batch, [&](std::size_t k) { return std::uint64_t{store.empty(qs[k].o, qs[k].i, qs[k].j)}; }, ns);
    finish_timing(r, ns);
  }
}

void run_rangetree(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt) {
  auto t0 = Clock::now();
  const RangeTree3 tree = RangeTree3::build(points, kUnitSquare);
  r.build_ns = since(t0);
  r.bytes = tree.bytes();
  r.queries = rects.size();
  if (opt.verify) {
    r.verified = true;
    const oracle::SlabScan scan(points);
    for (const Rect& q : rects) {
      RangeQueryTrace t;
      compare_exact(r, tree.empty(q, &t), scan.empty(q));
      ++r.probe_histogram[t.quadrant_probes];
      if (t.quadrant_probes > 4) violation(r, "more than 4 quadrant probes");
    }
  }
  if (opt.time) {
    std::vector<double> ns;
    time_batches(rects.size(), opt.batch, [&](std::size_t k) { return std::uint64_t{tree.empty(rects[k])}; }, ns);
    finish_timing(r, ns);
  }
}

void run_oracle(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt) {
  auto t0 = Clock::now();
  const oracle::SlabScan scan(points);
  r.build_ns = since(t0);
  r.bytes = points.size() * sizeof(UnitPoint);
  r.queries = rects.size();
  if (opt.verify) {
    r.verified = true;
    for (const Rect& q : rects) compare_exact(r, oracle::oracle_empty(points, q), scan.empty(q));
  }
  if (opt.time) {
    std::vector<double> ns;
    time_batches(rects.size(), opt.batch, [&](std::size_t k) { return std::uint64_t{oracle::oracle_empty(points, rects[k])}; }, ns);
    finish_timing(r, ns);
  }
}

// Grid structures, possibly built a block of cells at a time.
class GridRun {
 public:
  GridRun(RunReport& r, std::span<const UnitPoint> points, std::span<const Rect> rects, const RunOptions& opt)
      : r_(r), points_(points), rects_(rects), opt_(opt),
        backend_(opt.structure == Structure::Main1 ? Backend::Main1 : Backend::Main2),
        params_(GridParams::compute(points.size(), opt.c1, opt.eps)) {
    r_.grid = params_;
    r_.queries = rects.size();
    if (opt_.verify) scan_.emplace(points);
  }

  void run() {
    if (opt_.shard_cells == 0) {
      std::vector<std::size_t> all(rects_.size());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
      GridBuildOptions bo;
      bo.parallel = opt_.parallel_build;
      auto t0 = Clock::now();
      const GridForest f = GridForest::build(points_, opt_.c1, opt_.eps, backend_, bo);
      r_.build_ns = since(t0);
      r_.bytes = f.bytes();
      r_.space = f.space_report();
      r_.shards = 1;
      process(f, all);
    } else {
      run_sharded();
    }
    finish_timing(r_, ns_);
  }

 private:
  // Cells of a level in an order where the cells of one query lie close
  // together: row-major when levels are wide, column-major when tall.
  std::uint64_t order_index(const CellId& id) const {
    const std::uint64_t cols = params_.cols(id.level), rows = params_.rows(id.level);
    const bool row_major = 2 * cols + 1 <= rows + 2;
    const std::uint64_t local = row_major ? std::uint64_t{id.row} * cols + id.col : std::uint64_t{id.col} * rows + id.row;
    return level_base_[id.level] + local;
  }
  CellId cell_at(std::uint64_t index) const {
    std::uint32_t lv = 0;
    while (lv + 1 < params_.level_count && level_base_[lv + 1] <= index) ++lv;
    const std::uint64_t cols = params_.cols(lv), rows = params_.rows(lv);
    const std::uint64_t local = index - level_base_[lv];
    const bool row_major = 2 * cols + 1 <= rows + 2;
    if (row_major) return {lv, static_cast<std::uint32_t>(local % cols), static_cast<std::uint32_t>(local / cols)};
    return {lv, static_cast<std::uint32_t>(local / rows), static_cast<std::uint32_t>(local % rows)};
  }

  void run_sharded() {
    level_base_.assign(params_.level_count + 1, 0);
    for (std::uint32_t lv = 0; lv < params_.level_count; ++lv) {
      level_base_[lv + 1] = level_base_[lv] + params_.cols(lv) * params_.rows(lv);
    }
    const std::uint64_t total = level_base_.back();
    const std::uint64_t k = opt_.shard_cells;
    const std::uint64_t shard_count = (total + k - 1) / k;
    std::vector<std::vector<std::size_t>> assigned(shard_count);
    std::vector<std::vector<std::uint64_t>> extra(shard_count);
    for (std::size_t q = 0; q < rects_.size(); ++q) {
      const ClampedRect c = clamp_query(rects_[q]);
      if (c.empty || (!params_.degenerate && c.rect.area() > params_.threshold())) {
        assigned[q % shard_count].push_back(q);
        continue;
      }
      const auto ids = cells_overlapping(params_, level_for_width(params_, c.rect.width()), c.rect);
      std::uint64_t first = total;
      for (const auto& id : ids) first = std::min(first, order_index(id));
      const std::uint64_t s = first / k;
      assigned[s].push_back(q);
      for (const auto& id : ids) {
        const std::uint64_t idx = order_index(id);
        if (idx >= (s + 1) * k) extra[s].push_back(idx);
      }
    }

    GridSpaceReport space;
    std::vector<std::uint8_t> want(total);
    for (std::uint64_t s = 0; s < shard_count; ++s) {
      std::fill(want.begin(), want.end(), 0);
      const std::uint64_t lo = s * k, hi = std::min(total, lo + k);
      for (std::uint64_t i = lo; i < hi; ++i) want[i] = 1;
      for (std::uint64_t i : extra[s]) want[i] = 1;
      GridBuildOptions bo;
      bo.parallel = opt_.parallel_build;
      bo.cell_filter = [&](const CellId& id) { return want[order_index(id)] != 0; };
      auto t0 = Clock::now();
      const GridForest f = GridForest::build(points_, opt_.c1, opt_.eps, backend_, bo);
      r_.build_ns += since(t0);
      if (s == 0) {
        space = f.space_report();
        for (auto& lr : space.levels) lr.bytes = 0;
        r_.bytes = f.bytes();
        for (std::uint64_t i = 0; i < total; ++i) r_.bytes -= f.cell_bytes(cell_at(i));
      }
      for (std::uint64_t i = lo; i < hi; ++i) {
        const CellId id = cell_at(i);
        const std::size_t b = f.cell_bytes(id);
        r_.bytes += b;
        space.levels[id.level].bytes += b;
      }
      process(f, assigned[s]);
    }
    space.bytes = r_.bytes;
    space.cells_built = total;
    space.histogram.assign(space.histogram.size(), 0);
    {
      const GridForest counts = GridForest::build(points_, opt_.c1, opt_.eps, backend_,
                                                  {.cell_filter = [](const CellId&) { return false; }});
      for (std::uint64_t i = 0; i < total; ++i) {
        const std::uint64_t bucket = counts.cell_count(cell_at(i)) / space.histogram_width;
        if (bucket >= space.histogram.size()) space.histogram.resize(bucket + 1, 0);
        ++space.histogram[bucket];
      }
    }
    r_.space = space;
    r_.shards = shard_count;
  }

  void process(const GridForest& f, std::span<const std::size_t> idx) {
    if (opt_.verify) {
      r_.verified = true;
      for (std::size_t q : idx) {
        const Rect& rect = rects_[q];
        GridQueryStats st;
        bool got = false;
        try {
          got = f.empty(rect, &st);
        } catch (const std::logic_error& e) {
          violation(r_, e.what());
          continue;
        }
        if (!got) ++r_.nonempty;
        if (st.shortcut) ++r_.shortcut;
        ++r_.cell_histogram[st.cells];
        ++r_.probe_histogram[backend_ == Backend::Main2 ? st.max_quadrant_probes : st.crossing_probes];
        if (backend_ == Backend::Main2 && st.max_quadrant_probes > 4) violation(r_, "more than 4 quadrant probes in a cell");
        const bool want = scan_->empty(rect);
        if (got == want) continue;
        if (got) {
          ++r_.false_empty;
          ++r_.mismatch_other;
          continue;
        }
        ++r_.false_nonempty;
        const ClampedRect c = clamp_query(rect);
        if (!params_.degenerate && c.rect.area() > params_.threshold()) {
          ++r_.mismatch_one_sided;
        } else {
          ++r_.mismatch_other;
        }
      }
    }
    if (opt_.time) {
      time_batches(idx.size(), opt_.batch, [&](std::size_t k) { return std::uint64_t{f.empty(rects_[idx[k]])}; }, ns_);
    }
  }

  RunReport& r_;
  std::span<const UnitPoint> points_;
  std::span<const Rect> rects_;
  const RunOptions& opt_;
  Backend backend_;
  GridParams params_;
  std::optional<oracle::SlabScan> scan_;
  std::vector<std::uint64_t> level_base_;
  std::vector<double> ns_;
};

}  // namespace

std::string_view to_string(Structure s) noexcept {
  switch (s) {
    case Structure::Rank1D:
      return "rank1d";
    case Structure::SlabTree:
      return "slabtree";
    case Structure::Quadrant:
      return "quadrant";
    case Structure::RangeTree:
      return "rangetree";
    case Structure::Main1:
      return "main1";
    case Structure::Main2:
      return "main2";
    case Structure::Oracle:
      return "oracle";
  }
  return "?";
}

std::optional<Structure> parse_structure(std::string_view name) noexcept {
  for (Structure s : {Structure::Rank1D, Structure::SlabTree, Structure::Quadrant, Structure::RangeTree,
                      Structure::Main1, Structure::Main2, Structure::Oracle}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

WorkloadSpec default_workload(std::uint64_t n, double c1, std::uint64_t query_count, std::uint64_t seed) {
  const GridParams p = GridParams::compute(std::max<std::uint64_t>(n, 1), c1);
  WorkloadSpec w;
  w.query_count = query_count;
  w.seed = seed;
  w.area_min = std::min(1.0, 0.25 / static_cast<double>(std::max<std::uint64_t>(n, 1)));
  w.area_max = std::min(1.0, 4.0 * p.threshold());
  return w;
}

std::vector<Rect> generate_workload(const WorkloadSpec& spec) {
  if (!(spec.area_min > 0.0 && spec.area_min <= 1.0)) throw std::invalid_argument("workload: area_min must lie in (0,1]");
  if (spec.area_distribution == AreaDistribution::LogUniform &&
      !(spec.area_max >= spec.area_min && spec.area_max <= 1.0)) {
    throw std::invalid_argument("workload: area_max must lie in [area_min, 1]");
  }
  if (!(spec.aspect_min > 0.0 && spec.aspect_max >= spec.aspect_min)) {
    throw std::invalid_argument("workload: aspect range must be positive and ordered");
  }
  std::mt19937_64 gen(spec.seed);
  auto log_uniform = [&](double lo, double hi) {
    const double u = uniform01(gen);
    return lo == hi ? lo : std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
  };
  std::vector<Rect> out;
  out.reserve(spec.query_count);
  for (std::uint64_t k = 0; k < spec.query_count; ++k) {
    const double a = spec.area_distribution == AreaDistribution::Fixed ? spec.area_min
                                                                        : log_uniform(spec.area_min, spec.area_max);
    const double rho = log_uniform(spec.aspect_min, spec.aspect_max);
    double lx = std::sqrt(a * rho), ly = std::sqrt(a / rho);
    if (lx > 1.0) {
      lx = 1.0;
      ly = std::min(1.0, a);
    } else if (ly > 1.0) {
      ly = 1.0;
      lx = std::min(1.0, a);
    }
    const double x0 = uniform01(gen) * (1.0 - lx);
    const double y0 = uniform01(gen) * (1.0 - ly);
    out.push_back({x0, std::min(1.0, x0 + lx), y0, std::min(1.0, y0 + ly)});
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

RunReport run_structure(std::span<const UnitPoint> points, const WorkloadSpec& workload, const RunOptions& options) {
  RunReport r;
  r.structure = options.structure;
  r.n = points.size();
  r.eps = options.eps;
  r.c1 = options.c1;
  std::vector<Rect> rects;
  if (!options.exhaustive || options.structure == Structure::Main1 || options.structure == Structure::Main2 ||
      options.structure == Structure::RangeTree || options.structure == Structure::Oracle) {
    rects = generate_workload(workload);
  }
  switch (options.structure) {
    case Structure::Rank1D:
      run_rank1d(r, points, rects, options);
      break;
    case Structure::SlabTree:
      run_slabtree(r, points, rects, options);
      break;
    case Structure::Quadrant:
      run_quadrant(r, points, rects, options);
      break;
    case Structure::RangeTree:
      run_rangetree(r, points, rects, options);
      break;
    case Structure::Main1:
    case Structure::Main2:
      GridRun(r, points, rects, options).run();
      break;
    case Structure::Oracle:
      run_oracle(r, points, rects, options);
      break;
  }
  return r;
}

nlohmann::json to_json(const GridParams& p) {
  return {{"n", p.n}, {"N", p.N},     {"h", p.h},       {"c1", p.c1}, {"w", p.w},
          {"level_count", p.level_count}, {"eps", p.eps}, {"degenerate", p.degenerate}, {"threshold", p.threshold()}};
}

nlohmann::json to_json(const GridSpaceReport& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : s.levels) {
    levels.push_back({{"level", l.level},
                      {"cols", l.cols},
                      {"rows", l.rows},
                      {"empty_cells", l.empty_cells},
                      {"min_count", l.min_count},
                      {"max_count", l.max_count},
                      {"mean_count", l.mean_count},
                      {"bytes", l.bytes}});
  }
  return {{"backend", s.backend == Backend::Main1 ? "main1" : "main2"},
          {"levels", levels},
          {"histogram_width", s.histogram_width},
          {"histogram", s.histogram},
          {"cells_built", s.cells_built},
          {"bytes", s.bytes}};
}

nlohmann::json to_json(const RunReport& r) {
  auto hist = [](const std::map<std::uint32_t, std::uint64_t>& h) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : h) j[std::to_string(k)] = v;
    return j;
  };
  nlohmann::json j = {
      {"structure", to_string(r.structure)},
      {"n", r.n},
      {"eps", r.eps},
      {"c1", r.c1},
      {"build_ns", r.build_ns},
      {"bytes", r.bytes},
      {"bytes_per_point", r.n ? static_cast<double>(r.bytes) / static_cast<double>(r.n) : 0.0},
      {"queries", r.queries},
      {"nonempty", r.nonempty},
      {"latency_ns", {{"p50", r.p50_ns}, {"p99", r.p99_ns}, {"batches", r.batches}}},
      {"verified", r.verified},
      {"mismatches",
       {{"one_sided", r.mismatch_one_sided},
        {"other", r.mismatch_other},
        {"false_empty", r.false_empty},
        {"false_nonempty", r.false_nonempty}}},
      {"shortcut", r.shortcut},
      {"cell_histogram", hist(r.cell_histogram)},
      {"probe_histogram", hist(r.probe_histogram)},
      {"shards", r.shards},
      {"violations", r.violations},
      {"ok", r.ok()},
  };
  if (r.grid) j["grid"] = to_json(*r.grid);
  if (r.space) j["space"] = to_json(*r.space);
  return j;
}

}  // namespace orthoq
