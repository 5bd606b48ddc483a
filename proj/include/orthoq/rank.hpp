#pragma once

// Constant-time rank queries for reals drawn uniformly from an interval.
//
// The top level spreads n values over n equal bins. A bin holding at most
// four values answers by scanning them; a bin holding five or more owns a
// second-level BinLevel that re-buckets its m values into m^alpha bins for
// the smallest alpha that leaves no bin with five values. Rank is always
// exact; the distribution only affects space and the O(1) bound.
//
// All structures are flat-encoded into a RankArena (two arrays) so that
// thousands of small instances, as used by the range tree, share storage.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "orthoq/core.hpp"

namespace orthoq {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr std::uint32_t kDirectBinCapacity = 4;
// Upper bound on m^alpha for a second-level structure; past it the level is
// built in fallback mode (m bins, binary search inside each bin).
inline constexpr std::uint64_t kMaxLevelBins = std::uint64_t{1} << 20;

struct RankArena {
  std::vector<std::uint32_t> ints;
  std::vector<double> reals;

  std::size_t bytes() const noexcept {
    return ints.capacity() * sizeof(std::uint32_t) + reals.capacity() * sizeof(double);
  }
  void shrink_to_fit() {
    ints.shrink_to_fit();
    reals.shrink_to_fit();
  }
};

// Location of one encoded top-level structure inside a RankArena.
//   reals[reals_off..]: lo, hi, scale, values[n] (sorted)
//   ints[ints_off..]:   prefix[n], overflow keys[cap], overflow headers[cap]
struct RankRef {
  std::uint32_t ints_off = 0;
  std::uint32_t reals_off = 0;
  std::uint32_t n = 0;
  std::uint32_t overflow_cap = 0;
};

struct RankSpace {
  std::size_t top_bins = 0;
  std::size_t values = 0;
  std::size_t level_bins = 0;
  std::size_t overflow_bins = 0;
  std::size_t fallback_bins = 0;
  std::uint32_t max_alpha = 0;

  std::size_t slots() const noexcept { return top_bins + values + level_bins; }

  RankSpace& operator+=(const RankSpace& o) noexcept {
    top_bins += o.top_bins;
    values += o.values;
    level_bins += o.level_bins;
    overflow_bins += o.overflow_bins;
    fallback_bins += o.fallback_bins;
    max_alpha = std::max(max_alpha, o.max_alpha);
    return *this;
  }
};

namespace detail {

inline constexpr std::uint32_t kFallbackFlag = 0x80000000u;
// BinLevel header, at ints[h]:
//   bin_count, m, alpha | kFallbackFlag, reals offset of (lo, scale),
//   reals offset of the m sorted values, prefix[bin_count]
inline constexpr std::uint32_t kLevelHeader = 5;

// Requires x >= lo. Monotone in x, so values and queries agree on bin order.
inline std::uint64_t bin_index(double x, double lo, double scale, std::uint64_t bins) noexcept {
  const double t = (x - lo) * scale;
  if (!(t < static_cast<double>(bins))) return bins - 1;
  const auto b = static_cast<std::uint64_t>(t);
  return b < bins ? b : bins - 1;
}

inline std::uint32_t count_le(const double* v, std::uint32_t count, double x) noexcept {
  std::uint32_t c = 0;
  for (std::uint32_t k = 0; k < count; ++k) c += v[k] <= x;
  return c;
}

inline std::uint32_t level_rank(const RankArena& a, std::uint32_t h, double x) noexcept {
  const std::uint32_t* head = a.ints.data() + h;
  const std::uint64_t bins = head[0];
  const double* params = a.reals.data() + head[3];
  const double* v = a.reals.data() + head[4];
  if (!(x >= params[0])) return 0;
  const std::uint64_t b = bin_index(x, params[0], params[1], bins);
  const std::uint32_t* prefix = head + kLevelHeader;
  const std::uint32_t base = b ? prefix[b - 1] : 0;
  const std::uint32_t end = prefix[b];
  if (head[2] & kFallbackFlag) {
    return static_cast<std::uint32_t>(std::upper_bound(v + base, v + end, x) - v);
  }
  return base + count_le(v + base, end - base, x);
}

inline std::uint32_t overflow_header(const std::uint32_t* keys, std::uint32_t cap,
                                     std::uint64_t bin) noexcept {
  const std::uint32_t key = static_cast<std::uint32_t>(bin) + 1;
  std::uint32_t slot = (static_cast<std::uint32_t>(bin) * 2654435761u) & (cap - 1);
  while (keys[slot] != key) slot = (slot + 1) & (cap - 1);
  return keys[cap + slot];
}

}  // namespace detail

// |{v : v <= x}| for the structure at `r`.
inline std::uint32_t arena_rank(const RankArena& a, const RankRef& r, double x) noexcept {
  if (r.n == 0) return 0;
  const double* params = a.reals.data() + r.reals_off;
  if (!(x >= params[0])) return 0;
  if (x >= params[1]) return r.n;
  const double* v = params + 3;
  const std::uint64_t b = detail::bin_index(x, params[0], params[2], r.n);
  const std::uint32_t* prefix = a.ints.data() + r.ints_off;
  const std::uint32_t base = b ? prefix[b - 1] : 0;
  const std::uint32_t count = prefix[b] - base;
  if (count <= kDirectBinCapacity) return base + detail::count_le(v + base, count, x);
  const std::uint32_t h = detail::overflow_header(prefix + r.n, r.overflow_cap, b);
  return base + detail::level_rank(a, h, x);
}

// Appends a two-level rank structure over `values` (which must not alias
// `arena.reals`). Throws std::invalid_argument for values outside `interval`.
RankRef encode_rank1d(RankArena& arena, std::span<const double> values, Interval interval,
                      RankSpace* space = nullptr);

// Appends a BinLevel over the m sorted values already stored at
// arena.reals[values_off..]. Returns the header offset in arena.ints.
std::uint32_t encode_bin_level(RankArena& arena, std::uint32_t values_off, std::uint32_t m,
                               Interval interval, RankSpace* space = nullptr);

class BinLevel {
 public:
  static BinLevel build(std::span<const double> values, Interval interval);

  std::uint32_t rank(double x) const noexcept { return detail::level_rank(arena_, header_, x); }
  std::uint32_t size() const noexcept { return arena_.ints[header_ + 1]; }
  std::uint64_t bin_count() const noexcept { return arena_.ints[header_]; }
  // 0 when the structure is in fallback mode.
  std::uint32_t alpha() const noexcept { return arena_.ints[header_ + 2] & ~detail::kFallbackFlag; }
  bool fallback() const noexcept { return (arena_.ints[header_ + 2] & detail::kFallbackFlag) != 0; }
  Interval interval() const noexcept { return interval_; }
  std::uint32_t max_bin_occupancy() const noexcept;

 private:
  RankArena arena_;
  std::uint32_t header_ = 0;
  Interval interval_;
};

class Rank1D {
 public:
  Rank1D();
  static Rank1D build(std::span<const double> values, Interval interval);

  std::uint32_t rank(double x) const noexcept { return arena_rank(arena_, ref_, x); }
  std::uint32_t size() const noexcept { return ref_.n; }
  Interval interval() const noexcept { return interval_; }
  const RankSpace& space() const noexcept { return space_; }
  std::size_t bytes() const noexcept { return sizeof(*this) + arena_.bytes(); }

  // Values read back bin by bin; equals the sorted input.
  std::vector<double> sorted_values() const;
  std::vector<std::uint32_t> bin_occupancy() const;
  // Top-level bins that own a second-level structure, ascending.
  std::vector<std::uint32_t> overflow_bins() const;

 private:
  RankArena arena_;
  RankRef ref_;
  Interval interval_;
  RankSpace space_;
};

// One Rank1D per coordinate of a d-dimensional point set.
class MultiRank {
 public:
  MultiRank() = default;
  // `coords` is row-major, dims values per point.
  static MultiRank build(std::span<const double> coords, std::size_t dims,
                         std::span<const Interval> domain);
  static MultiRank build(std::span<const UnitPoint> points, Interval x_domain, Interval y_domain);

  std::size_t dims() const noexcept { return refs_.size(); }
  std::size_t size() const noexcept { return refs_.empty() ? 0 : refs_.front().n; }

  std::uint32_t rank(std::size_t dim, double x) const noexcept { return arena_rank(arena_, refs_[dim], x); }
  void query(std::span<const double> q, std::span<std::uint32_t> out) const;
  std::vector<std::uint32_t> query(std::span<const double> q) const;

  // (x_lo, x_hi] x (y_lo, y_hi] -> (alpha, alpha'] x (beta, beta']. Requires dims() == 2.
  RankRect rank_translate(const Rect& r) const;

  const RankSpace& space() const noexcept { return space_; }
  std::size_t bytes() const noexcept {
    return sizeof(*this) + arena_.bytes() + refs_.capacity() * sizeof(RankRef) +
           domain_.capacity() * sizeof(Interval);
  }

 private:
  RankArena arena_;
  std::vector<RankRef> refs_;
  std::vector<Interval> domain_;
  RankSpace space_;
};

}  // namespace orthoq
