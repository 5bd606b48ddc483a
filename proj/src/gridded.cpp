#include "orthoq/gridded.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace orthoq {

GridParams GridParams::compute(std::uint64_t n, double c1, double eps) {
  if (!(c1 > 16.0)) throw std::invalid_argument("GridParams: c1 must exceed 16");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("GridParams: eps must lie in (0,1)");
  GridParams p;
  p.n = n;
  p.c1 = c1;
  p.eps = eps;
  p.N = std::bit_ceil(std::max<std::uint64_t>(n, 1));
  p.h = static_cast<std::uint32_t>(std::countr_zero(p.N));
  const double target = 4.0 * c1 * p.h;
  p.w = 1;
  while (static_cast<double>(p.w) < target) p.w <<= 1;
  p.degenerate = p.w >= p.N;
  p.level_count = p.degenerate ? 1 : static_cast<std::uint32_t>(std::countr_zero(p.N / p.w)) + 1;
  return p;
}

std::uint32_t level_for_width(const GridParams& p, double width) {
  if (p.degenerate) return 0;
  const double base = static_cast<double>(p.w) / static_cast<double>(p.N);
  std::uint32_t j = 0;
  while (j + 1 < p.level_count && width > std::ldexp(base, static_cast<int>(j))) ++j;
  return j;
}

std::uint32_t cell_coordinate(double v, std::uint64_t cells) noexcept {
  const double t = std::floor(v * static_cast<double>(cells));
  if (!(t > 0.0)) return 0;
  if (t >= static_cast<double>(cells)) return static_cast<std::uint32_t>(cells - 1);
  return static_cast<std::uint32_t>(t);
}

std::vector<CellId> cells_overlapping(const GridParams& p, std::uint32_t level, const Rect& q) {
  const std::uint64_t cols = p.cols(level);
  const std::uint64_t rows = p.rows(level);
  const std::uint32_t c0 = cell_coordinate(q.x_lo, cols), c1 = cell_coordinate(q.x_hi, cols);
  const std::uint32_t r0 = cell_coordinate(q.y_lo, rows), r1 = cell_coordinate(q.y_hi, rows);
  const std::uint64_t count = std::uint64_t{c1 - c0 + 1} * (r1 - r0 + 1);
  if (count > 6) {
    throw std::logic_error("cells_overlapping: query touches " + std::to_string(count) +
                           " cells of level " + std::to_string(level));
  }
  std::vector<CellId> out;
  out.reserve(count);
  for (std::uint32_t r = r0; r <= r1; ++r) {
    for (std::uint32_t c = c0; c <= c1; ++c) out.push_back({level, c, r});
  }
  return out;
}

Rect GridForest::cell_rect(const GridParams& p, const CellId& id) noexcept {
  const auto cols = static_cast<double>(p.cols(id.level));
  const auto rows = static_cast<double>(p.rows(id.level));
  return {id.col / cols, (id.col + 1) / cols, id.row / rows, (id.row + 1) / rows};
}

std::size_t GridForest::Cell::bytes() const noexcept {
  std::size_t b = sizeof(Cell);
  if (main1) b += main1->rank.bytes() + main1->tree.bytes();
  if (main2) b += main2->bytes();
  return b;
}

GridForest GridForest::build(std::span<const UnitPoint> points, double c1, double eps, Backend backend,
                             const GridBuildOptions& options) {
  GridForest f;
  f.params_ = GridParams::compute(points.size(), c1, eps);
  f.backend_ = backend;
  for (const auto& p : points) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw std::invalid_argument("GridForest: point outside the unit square");
    }
  }

  struct Job {
    CellId id;
    std::vector<UnitPoint> pts;
  };
  f.levels_.resize(f.params_.level_count);
  for (std::uint32_t lv = 0; lv < f.params_.level_count; ++lv) {
    Level& level = f.levels_[lv];
    level.cols = f.params_.cols(lv);
    level.rows = f.params_.rows(lv);
    const std::size_t ncells = level.cols * level.rows;
    level.cells.resize(ncells);

    // Counting sort of the points into cells.
    std::vector<std::uint32_t> cell_of(points.size());
    std::vector<std::size_t> start(ncells + 1, 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
      cell_of[k] = static_cast<std::uint32_t>(cell_coordinate(points[k].y, level.rows) * level.cols +
                                              cell_coordinate(points[k].x, level.cols));
      ++start[cell_of[k] + 1];
    }
    for (std::size_t c = 0; c < ncells; ++c) start[c + 1] += start[c];
    std::vector<UnitPoint> sorted(points.size());
    {
      std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
      for (std::size_t k = 0; k < points.size(); ++k) sorted[cursor[cell_of[k]]++] = points[k];
    }

    std::vector<std::size_t> todo;
    for (std::size_t c = 0; c < ncells; ++c) {
      const CellId id{lv, static_cast<std::uint32_t>(c % level.cols), static_cast<std::uint32_t>(c / level.cols)};
      Cell& cell = level.cells[c];
      cell.count = static_cast<std::uint32_t>(start[c + 1] - start[c]);
      if (options.cell_filter && !options.cell_filter(id)) continue;
      cell.built = true;
      if (cell.count > 0) todo.push_back(c);
    }

    auto build_cell = [&](std::size_t c) {
      const CellId id{lv, static_cast<std::uint32_t>(c % level.cols), static_cast<std::uint32_t>(c / level.cols)};
      const std::span<const UnitPoint> pts(sorted.data() + start[c], start[c + 1] - start[c]);
      const Rect box = cell_rect(f.params_, id);
      Cell& cell = level.cells[c];
      if (backend == Backend::Main1) {
        auto m1 = std::make_unique<Main1Cell>();
        m1->rank = MultiRank::build(pts, {box.x_lo, box.x_hi}, {box.y_lo, box.y_hi});
        m1->tree = SlabTree::build(to_rank_space(pts), eps);
        cell.main1 = std::move(m1);
      } else {
        cell.main2 = std::make_unique<RangeTree3>(RangeTree3::build(pts, box));
      }
    };

    if (options.parallel && todo.size() > 1) {
      unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
      threads = std::min<unsigned>(threads, static_cast<unsigned>(todo.size()));
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(threads);
      {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
          pool.emplace_back([&, t] {
            try {
              for (std::size_t k; (k = next.fetch_add(1)) < todo.size();) build_cell(todo[k]);
            } catch (...) {
              errors[t] = std::current_exception();
            }
          });
        }
      }
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    } else {
      for (std::size_t c : todo) build_cell(c);
    }
  }
  return f;
}

const GridForest::Cell& GridForest::cell(const CellId& id) const {
  const Level& level = levels_.at(id.level);
  if (id.col >= level.cols || id.row >= level.rows) throw std::out_of_range("GridForest: no such cell");
  return level.cells[id.row * level.cols + id.col];
}

std::uint64_t GridForest::cell_count(const CellId& id) const { return cell(id).count; }
bool GridForest::cell_built(const CellId& id) const { return cell(id).built; }
std::size_t GridForest::cell_bytes(const CellId& id) const { return cell(id).bytes(); }

bool GridForest::empty(const Rect& q, GridQueryStats* stats) const {
  const ClampedRect c = clamp_query(q);
  if (c.empty) return true;
  const Rect& r = c.rect;
  if (!params_.degenerate && r.area() > params_.threshold()) {
    if (stats) stats->shortcut = true;
    return false;
  }
  const std::uint32_t j = level_for_width(params_, r.width());
  const std::vector<CellId> ids = cells_overlapping(params_, j, r);
  if (stats) {
    stats->level = static_cast<std::int32_t>(j);
    stats->cells = static_cast<std::uint32_t>(ids.size());
  }
  for (const CellId& id : ids) {
    const Cell& cl = cell(id);
    if (!cl.built) throw std::logic_error("GridForest: query reached a cell that was not built");
    if (cl.count == 0) continue;
    bool cell_empty = true;
    if (cl.main1) {
      SlabQueryStats s;
      cell_empty = cl.main1->tree.empty(cl.main1->rank.rank_translate(r), stats ? &s : nullptr);
      if (stats) stats->crossing_probes += s.crossing_probes;
    } else {
      RangeQueryTrace t;
      cell_empty = cl.main2->empty(r, stats ? &t : nullptr);
      if (stats) stats->max_quadrant_probes = std::max(stats->max_quadrant_probes, t.quadrant_probes);
    }
    if (!cell_empty) return false;
  }
  return true;
}

std::size_t GridForest::bytes() const noexcept {
  std::size_t b = sizeof(GridForest);
  for (const Level& level : levels_) {
    b += sizeof(Level);
    for (const Cell& c : level.cells) b += c.bytes();
  }
  return b;
}

GridSpaceReport GridForest::space_report() const {
  GridSpaceReport rep;
  rep.params = params_;
  rep.backend = backend_;
  rep.bytes = bytes();
  std::uint64_t max_count = 0;
  for (const Level& level : levels_) {
    for (const Cell& c : level.cells) max_count = std::max<std::uint64_t>(max_count, c.count);
  }
  rep.histogram_width = std::max<std::uint64_t>(1, (max_count + 16) / 16);
  rep.histogram.assign(max_count / rep.histogram_width + 1, 0);
  for (std::uint32_t lv = 0; lv < levels_.size(); ++lv) {
    const Level& level = levels_[lv];
    GridLevelReport lr;
    lr.level = lv;
    lr.cols = level.cols;
    lr.rows = level.rows;
    lr.min_count = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    for (const Cell& c : level.cells) {
      lr.min_count = std::min<std::uint64_t>(lr.min_count, c.count);
      lr.max_count = std::max<std::uint64_t>(lr.max_count, c.count);
      lr.empty_cells += c.count == 0;
      total += c.count;
      lr.bytes += c.bytes();
      if (c.built) {
        ++rep.cells_built;
        ++rep.histogram[c.count / rep.histogram_width];
      }
    }
    lr.mean_count = static_cast<double>(total) / static_cast<double>(level.cells.size());
    rep.levels.push_back(lr);
  }
  return rep;
}

NetReport validate_net(std::span<const UnitPoint> points, double c, std::uint64_t trials, std::uint64_t seed) {
  if (!(c > 16.0)) throw std::invalid_argument("validate_net: c must exceed 16");
  NetReport rep;
  rep.n = points.size();
  rep.c = c;
  rep.trials = trials;
  const double n = static_cast<double>(std::max<std::size_t>(points.size(), 1));
  rep.min_area = std::min(1.0, c * std::log2(n) / n);

  std::mt19937_64 gen(seed);
  const double a = rep.min_area;
  for (std::uint64_t t = 0; t < trials; ++t) {
    double lx = 1.0, ly = 1.0;
    if (a > 0.0 && a < 1.0) {
      const double log_aspect = std::log(a) * (1.0 - 2.0 * uniform01(gen));
      lx = std::clamp(std::sqrt(a * std::exp(log_aspect)), a, 1.0);
      ly = std::min(1.0, a / lx);
    }
    const double x0 = uniform01(gen) * (1.0 - lx);
    const double y0 = uniform01(gen) * (1.0 - ly);
    const Rect r{x0, x0 + lx, y0, y0 + ly};
    bool hit = false;
    for (const auto& p : points) {
      if (r.x_lo < p.x && p.x <= r.x_hi && r.y_lo < p.y && p.y <= r.y_hi) {
        hit = true;
        break;
      }
    }
    rep.empty_rects += hit ? 0 : 1;
  }

  const GridParams gp = GridParams::compute(points.size(), c);
  rep.levels = gp.level_count;
  for (std::uint32_t lv = 0; lv < gp.level_count; ++lv) {
    const std::uint64_t cols = gp.cols(lv), rows = gp.rows(lv);
    std::vector<std::uint8_t> hit(cols * rows, 0);
    for (const auto& p : points) hit[cell_coordinate(p.y, rows) * cols + cell_coordinate(p.x, cols)] = 1;
    rep.cells += hit.size();
    rep.empty_cells += static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 0));
  }
  return rep;
}

}  // namespace orthoq
