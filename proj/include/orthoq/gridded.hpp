#pragma once

// Emptiness for random points via a family of grids.
//
// Any query of area above w/N is answered "nonempty" outright: with high
// probability every such rectangle holds a sample point. A smaller query
// picks the grid level whose cells are at least as wide as it, touches at
// most 6 cells there, and asks each cell's exact structure. Cells use
// either a slab tree over the cell's rank space (Main1) or a three-level
// range tree (Main2).

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "orthoq/core.hpp"
#include "orthoq/rangetree.hpp"
#include "orthoq/rank.hpp"
#include "orthoq/rankspace.hpp"

namespace orthoq {

enum class Backend : std::uint8_t { Main1, Main2 };

struct GridParams {
  std::uint64_t n = 0;
  std::uint64_t N = 1;        // smallest power of two >= n
  std::uint32_t h = 0;        // log2 N
  double c1 = 32.0;
  std::uint64_t w = 1;        // smallest power of two >= 4 c1 log2 N
  std::uint32_t level_count = 1;
  double eps = 0.5;
  bool degenerate = false;    // w >= N: a single cell covers the square

  // Area above which queries are reported nonempty.
  double threshold() const noexcept { return degenerate ? 1.0 : static_cast<double>(w) / static_cast<double>(N); }
  std::uint64_t cols(std::uint32_t level) const noexcept { return degenerate ? 1 : N / (w << level); }
  std::uint64_t rows(std::uint32_t level) const noexcept { return degenerate ? 1 : std::uint64_t{1} << level; }

  // Throws std::invalid_argument unless c1 > 16 and eps in (0,1).
  static GridParams compute(std::uint64_t n, double c1, double eps = 0.5);
};

// Smallest j with width <= 2^j w / N (0 when degenerate).
std::uint32_t level_for_width(const GridParams& p, double width);

struct CellId {
  std::uint32_t level = 0;
  std::uint32_t col = 0;
  std::uint32_t row = 0;

  friend bool operator==(const CellId&, const CellId&) = default;
};

// Column or row holding coordinate v at `cells` equal cells per unit,
// treating cells as [lo, hi) with 1.0 folded into the last cell.
std::uint32_t cell_coordinate(double v, std::uint64_t cells) noexcept;

// Cells of `level` that can hold points of q. Throws std::logic_error when
// more than 6 are touched.
std::vector<CellId> cells_overlapping(const GridParams& p, std::uint32_t level, const Rect& q);

struct GridQueryStats {
  bool shortcut = false;
  std::int32_t level = -1;
  std::uint32_t cells = 0;
  std::uint32_t max_quadrant_probes = 0;  // per cell, Main2
  std::uint32_t crossing_probes = 0;      // total, Main1
};

struct GridBuildOptions {
  // Only cells accepted by the filter are built; queries that reach an
  // unbuilt cell throw std::logic_error. Used for sharded measurements.
  std::function<bool(const CellId&)> cell_filter;
  bool parallel = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct GridLevelReport {
  std::uint32_t level = 0;
  std::uint64_t cols = 0;
  std::uint64_t rows = 0;
  std::uint64_t empty_cells = 0;
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  double mean_count = 0.0;
  std::size_t bytes = 0;
};

struct GridSpaceReport {
  GridParams params;
  Backend backend = Backend::Main2;
  std::vector<GridLevelReport> levels;
  // Point-count histogram over all built cells: bucket k counts cells with
  // floor(count / histogram_width) == k.
  std::uint64_t histogram_width = 1;
  std::vector<std::uint64_t> histogram;
  std::size_t cells_built = 0;
  std::size_t bytes = 0;
};

class GridForest {
 public:
  static GridForest build(std::span<const UnitPoint> points, double c1, double eps, Backend backend,
                          const GridBuildOptions& options = {});

  bool empty(const Rect& q, GridQueryStats* stats = nullptr) const;

  const GridParams& params() const noexcept { return params_; }
  Backend backend() const noexcept { return backend_; }
  std::uint64_t cell_count(const CellId& id) const;
  bool cell_built(const CellId& id) const;
  std::size_t cell_bytes(const CellId& id) const;
  GridSpaceReport space_report() const;
  std::size_t bytes() const noexcept;

  // Rectangle [x0,x1] x [y0,y1] covered by a cell.
  static Rect cell_rect(const GridParams& p, const CellId& id) noexcept;

 private:
  struct Main1Cell {
    MultiRank rank;
    SlabTree tree;
  };
  struct Cell {
    std::uint32_t count = 0;
    bool built = false;
    std::unique_ptr<Main1Cell> main1;
    std::unique_ptr<RangeTree3> main2;

    std::size_t bytes() const noexcept;
  };
  struct Level {
    std::uint64_t cols = 0;
    std::uint64_t rows = 0;
    std::vector<Cell> cells;  // row-major: row * cols + col
  };

  const Cell& cell(const CellId& id) const;

  GridParams params_;
  Backend backend_ = Backend::Main2;
  std::vector<Level> levels_;
};

struct NetReport {
  std::uint64_t n = 0;
  double c = 0.0;
  double min_area = 0.0;           // c log2(n) / n
  std::uint64_t trials = 0;
  std::uint64_t empty_rects = 0;
  std::uint32_t levels = 0;
  std::uint64_t cells = 0;
  std::uint64_t empty_cells = 0;
};

// Samples `trials` rectangles of area >= c log2(n) / n and counts those
// with no point; also counts empty cells over every grid level built with
// c1 = c. Violations are reported, not thrown.
NetReport validate_net(std::span<const UnitPoint> points, double c, std::uint64_t trials, std::uint64_t seed);

}  // namespace orthoq
