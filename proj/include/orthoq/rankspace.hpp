#pragma once

// Emptiness structures for 2-d point sets in rank space.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "orthoq/core.hpp"

namespace orthoq {

// Prefix sums over y of the points whose x lies in [alpha, beta]; answers
// emptiness for rectangles whose x-range spans the whole block.
class CrossingStore {
 public:
  static CrossingStore build(std::span<const RankPoint> points, std::uint32_t alpha,
                             std::uint32_t beta, std::uint32_t n);

  // Throws std::logic_error unless q.i1 < alpha and q.i2 >= beta.
  bool crossing_empty(const RankRect& q) const;

  std::uint32_t alpha() const noexcept { return alpha_; }
  std::uint32_t beta() const noexcept { return beta_; }
  std::span<const std::uint32_t> prefix() const noexcept { return prefix_; }

 private:
  std::uint32_t alpha_ = 0;
  std::uint32_t beta_ = 0;
  std::vector<std::uint32_t> prefix_;
};

// B[j2] - B[j1] counts the stored points with y in (j1, j2].
inline bool prefix_range_empty(const std::uint32_t* prefix, std::uint32_t j1, std::uint32_t j2) noexcept {
  return j1 >= j2 || prefix[j2] == prefix[j1];
}

struct SlabQueryStats {
  std::uint32_t crossing_probes = 0;
  std::uint32_t nodes_visited = 0;
};

// High fan-out tree over x-ranks. Each internal node splits its points into
// slabs of delta = ceil(n^(1 - eps/2)) consecutive x-ranks and stores a
// crossing store for every contiguous run of slabs; children are the slabs,
// re-ranked into their own rank space.
class SlabTree {
 public:
  SlabTree() = default;
  static SlabTree build(std::span<const std::uint32_t> perm, double eps);

  bool empty(const RankRect& q, SlabQueryStats* stats = nullptr) const;

  std::uint32_t size() const noexcept { return nodes_.empty() ? 0 : nodes_.front().n; }
  double eps() const noexcept { return eps_; }
  // Levels of internal nodes on the longest root-to-leaf path.
  std::uint32_t depth() const noexcept { return depth_; }
  std::uint32_t root_delta() const noexcept { return nodes_.empty() ? 0 : nodes_.front().delta; }
  std::uint32_t root_fanout() const noexcept { return nodes_.empty() ? 0 : nodes_.front().fanout; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t table_entries() const noexcept { return tables_.size(); }
  std::size_t bytes() const noexcept {
    return sizeof(*this) + nodes_.capacity() * sizeof(Node) + tables_.capacity() * sizeof(std::uint32_t);
  }

  static std::uint32_t slab_width(std::uint32_t n, double eps);

 private:
  struct Node {
    std::uint32_t n = 0;
    std::uint32_t delta = 0;
    std::uint32_t fanout = 0;
    std::uint32_t first_child = 0;
    std::uint64_t table_off = 0;
  };

  const std::uint32_t* table(const Node& node, std::uint32_t a, std::uint32_t b) const noexcept;
  bool nonempty(std::uint32_t node, std::uint32_t i1, std::uint32_t i2, std::uint32_t j1,
                std::uint32_t j2, SlabQueryStats* stats) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> tables_;
  double eps_ = 0.5;
  std::uint32_t depth_ = 0;
};

// Which corner of rank space a quadrant query reaches. With q = (i, j):
//   LowXLowY   (0,i] x (0,j]      LowXHighY  (0,i] x (j,n]
//   HighXLowY  (i,n] x (0,j]      HighXHighY (i,n] x (j,n]
enum class Orientation : std::uint8_t { LowXLowY = 0, LowXHighY = 1, HighXLowY = 2, HighXHighY = 3 };

inline constexpr std::array<Orientation, 4> kOrientations{
    Orientation::LowXLowY, Orientation::LowXHighY, Orientation::HighXLowY, Orientation::HighXHighY};

std::string_view to_string(Orientation o) noexcept;

// Staircase F over x-ranks 1..n, stored at F[i - 1]:
//   LowXLowY prefix min, LowXHighY prefix max, HighXLowY suffix min,
//   HighXHighY suffix max of the y-ranks.
void build_staircase(std::span<const std::uint32_t> perm, Orientation o, std::span<std::uint32_t> out);

inline bool staircase_nonempty(Orientation o, const std::uint32_t* f, std::uint32_t n, std::uint32_t i,
                               std::uint32_t j) noexcept {
  if (i > n) i = n;
  switch (o) {
    case Orientation::LowXLowY:
      return i >= 1 && f[i - 1] <= j;
    case Orientation::LowXHighY:
      return i >= 1 && f[i - 1] > j;
    case Orientation::HighXLowY:
      return i < n && f[i] <= j;
    case Orientation::HighXHighY:
      return i < n && f[i] > j;
  }
  return false;
}

class QuadrantStore {
 public:
  QuadrantStore() = default;
  static QuadrantStore build(std::span<const std::uint32_t> perm);

  bool empty(Orientation o, std::uint32_t i, std::uint32_t j) const noexcept {
    return !staircase_nonempty(o, stairs_[static_cast<int>(o)].data(), n_, i, j);
  }
  std::span<const std::uint32_t> staircase(Orientation o) const noexcept {
    return stairs_[static_cast<int>(o)];
  }
  std::uint32_t size() const noexcept { return n_; }
  std::size_t bytes() const noexcept {
    std::size_t b = sizeof(*this);
    for (const auto& s : stairs_) b += s.capacity() * sizeof(std::uint32_t);
    return b;
  }

 private:
  std::uint32_t n_ = 0;
  std::array<std::vector<std::uint32_t>, 4> stairs_;
};

}  // namespace orthoq
