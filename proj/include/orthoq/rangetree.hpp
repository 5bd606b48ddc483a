#pragma once

// Three-level range tree for points uniform in a rectangle.
//
// Level 1 is a complete binary tree over x-ranks. Every node v of it owns a
// complete binary tree over the y-ranks of its points P_v (level 2), and
// every node u of that tree owns a NodeStore (level 3): four quadrant
// staircases over the rank space of its points plus a two-coordinate rank
// structure over its rectangle. A query is rank-translated, split at the
// x-LCA and then at the y-LCA in both halves, leaving at most four quadrant
// probes. Rank translation uses the bucketed rank structures throughout, so
// the query does O(1) work for uniformly distributed input.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "orthoq/core.hpp"
#include "orthoq/rank.hpp"
#include "orthoq/rankspace.hpp"

namespace orthoq {

// Heap id (root = 1) of the lowest node whose leaf span contains leaves
// a..b (1-based) of a complete binary tree with `tree_size` leaves.
// tree_size must be a power of two. Throws std::invalid_argument otherwise
// or when a > b or b > tree_size.
std::uint64_t lca_leafrange(std::uint64_t tree_size, std::uint64_t a, std::uint64_t b);

inline std::uint64_t lca_unchecked(std::uint64_t tree_size, std::uint64_t a, std::uint64_t b) noexcept {
  const auto height = static_cast<unsigned>(std::bit_width((a - 1) ^ (b - 1)));
  return ((a - 1) + tree_size) >> height;
}

struct RangeQueryTrace {
  struct Part {
    Rect region;            // q intersected with the owning node's rectangle
    Orientation orientation;
    bool point_test = false;  // resolved by comparing a single point
  };
  std::uint32_t quadrant_probes = 0;
  std::uint32_t point_tests = 0;
  // Filled only when record_parts is set; probes then run without
  // short-circuiting so every part is reported.
  bool record_parts = false;
  std::vector<Part> parts;
};

struct RangeTreeSpace {
  std::size_t points = 0;
  std::size_t top_nodes = 0;
  std::size_t node_stores = 0;
  std::size_t staircase_entries = 0;
  RankSpace rank;
  std::size_t bytes = 0;
};

class RangeTree3 {
 public:
  RangeTree3() = default;
  // `cell` is the closed sampling rectangle; every point must lie in it.
  static RangeTree3 build(std::span<const UnitPoint> points, const Rect& cell);

  bool empty(const Rect& q, RangeQueryTrace* trace = nullptr) const;

  std::size_t size() const noexcept { return xs_.size(); }
  const Rect& cell() const noexcept { return cell_; }
  std::uint32_t leaf_count() const noexcept { return n_pad_; }
  // Points in leaf (x-rank) order.
  std::vector<UnitPoint> leaf_points() const;
  const RangeTreeSpace& space() const noexcept { return space_; }
  std::size_t bytes() const noexcept { return space_.bytes; }

 private:
  struct Secondary {
    std::uint32_t count = 0;
    std::uint32_t pad = 0;           // leaves of the y-tree
    std::uint32_t xpos_off = 0;      // x-ranks of P_v in y order
    std::uint32_t store_off = 0;     // NodeStore ids store_off + 1 .. store_off + 2*pad - 1
    std::uint32_t first_x = 0;       // x-rank span of v, 1-based inclusive
    std::uint32_t last_x = 0;
    RankRef y_rank;
  };
  struct NodeStore {
    std::uint32_t count = 0;
    std::uint32_t stair_off = 0;
    RankRef x_rank;
    RankRef y_rank;
  };

  bool side_nonempty(std::uint64_t v, bool left, const Rect& q, std::uint32_t i1, std::uint32_t i2,
                     RangeQueryTrace* trace) const;
  bool probe(const NodeStore& s, Orientation o, const Rect& q, bool left, bool low_y) const;
  Rect node_rect(const Secondary& sec, std::uint64_t store_id) const;
  double secondary_y(const Secondary& sec, std::uint32_t pos) const;

  Rect cell_{0.0, 1.0, 0.0, 1.0};
  std::uint32_t n_pad_ = 0;
  std::vector<double> xs_;         // x-coordinates in x-rank order
  std::vector<double> ys_by_x_;
  RankRef x_rank_;
  std::vector<Secondary> secondary_;  // indexed by top heap id
  std::vector<std::uint32_t> xpos_;
  std::vector<NodeStore> stores_;
  std::vector<std::uint32_t> stairs_;
  RankArena arena_;
  RangeTreeSpace space_;
};

}  // namespace orthoq
