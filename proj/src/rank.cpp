#include "orthoq/rank.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace orthoq {
namespace {

double scale_for(std::uint64_t bins, double width) {
  if (!(width > 0.0)) return 0.0;
  const double s = static_cast<double>(bins) / width;
  return std::isfinite(s) ? s : 0.0;
}

void check_interval(Interval iv) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
    throw std::invalid_argument("rank: interval must be finite with lo <= hi");
  }
}

void check_values(std::span<const double> values, Interval iv) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= iv.lo && values[k] <= iv.hi)) {
      throw std::invalid_argument("rank: value " + std::to_string(k) + " lies outside the interval");
    }
  }
}

void check_offset(std::size_t size) {
  if (size > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("rank arena exceeds 32-bit offsets");
  }
}

// Largest number of sorted values that share one of `bins` bins.
std::uint32_t max_run(const double* v, std::uint32_t m, double lo, double scale, std::uint64_t bins) {
  std::uint32_t best = 0, run = 0;
  std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t k = 0; k < m; ++k) {
    const std::uint64_t b = detail::bin_index(v[k], lo, scale, bins);
    run = b == prev ? run + 1 : 1;
    prev = b;
    best = std::max(best, run);
  }
  return best;
}

void sort_small(double* first, double* last) {
  if (last - first > 16) {
    std::sort(first, last);
    return;
  }
  for (double* it = first + 1; it < last; ++it) {
    const double v = *it;
    double* j = it;
    for (; j > first && *(j - 1) > v; --j) *j = *(j - 1);
    *j = v;
  }
}

}  // namespace

std::uint32_t encode_bin_level(RankArena& arena, std::uint32_t values_off, std::uint32_t m,
                               Interval iv, RankSpace* space) {
  const double width = iv.hi - iv.lo;
  std::uint64_t bins = 0;
  std::uint32_t alpha = 0;
  bool fallback = false;
  {
    const double* v = arena.reals.data() + values_off;
    std::uint64_t candidate = std::max<std::uint32_t>(m, 1);
    for (std::uint32_t a = 1;; ++a) {
      if (candidate > kMaxLevelBins) {
        fallback = true;
        break;
      }
      if (max_run(v, m, iv.lo, scale_for(candidate, width), candidate) <= kDirectBinCapacity) {
        bins = candidate;
        alpha = a;
        break;
      }
      candidate *= m;
    }
  }
  if (fallback) bins = std::min<std::uint64_t>(std::max<std::uint32_t>(m, 1), kMaxLevelBins);
  const double scale = scale_for(bins, width);

  const std::size_t params_off = arena.reals.size();
  arena.reals.push_back(iv.lo);
  arena.reals.push_back(scale);
  check_offset(arena.reals.size());

  const std::size_t h = arena.ints.size();
  arena.ints.resize(h + detail::kLevelHeader + bins, 0);
  check_offset(arena.ints.size());
  arena.ints[h] = static_cast<std::uint32_t>(bins);
  arena.ints[h + 1] = m;
  arena.ints[h + 2] = alpha | (fallback ? detail::kFallbackFlag : 0u);
  arena.ints[h + 3] = static_cast<std::uint32_t>(params_off);
  arena.ints[h + 4] = values_off;
  std::uint32_t* prefix = arena.ints.data() + h + detail::kLevelHeader;
  const double* v = arena.reals.data() + values_off;
  for (std::uint32_t k = 0; k < m; ++k) ++prefix[detail::bin_index(v[k], iv.lo, scale, bins)];
  for (std::uint64_t b = 1; b < bins; ++b) prefix[b] += prefix[b - 1];

  if (space) {
    space->level_bins += bins;
    space->fallback_bins += fallback ? 1 : 0;
    space->max_alpha = std::max(space->max_alpha, alpha);
  }
  return static_cast<std::uint32_t>(h);
}

RankRef encode_rank1d(RankArena& arena, std::span<const double> values, Interval iv, RankSpace* space) {
  check_interval(iv);
  check_values(values, iv);
  check_offset(values.size());

  const auto n = static_cast<std::uint32_t>(values.size());
  const double scale = scale_for(n, iv.hi - iv.lo);
  RankRef ref;
  ref.n = n;
  ref.reals_off = static_cast<std::uint32_t>(arena.reals.size());
  ref.ints_off = static_cast<std::uint32_t>(arena.ints.size());
  arena.reals.push_back(iv.lo);
  arena.reals.push_back(iv.hi);
  arena.reals.push_back(scale);
  const std::size_t values_off = arena.reals.size();
  arena.reals.resize(values_off + n);
  check_offset(arena.reals.size());
  if (n == 0) return ref;

  // Single counting pass into n bins.
  std::vector<std::uint32_t> bin_of(n);
  arena.ints.resize(ref.ints_off + std::size_t{n}, 0);
  {
    std::uint32_t* prefix = arena.ints.data() + ref.ints_off;
    for (std::uint32_t k = 0; k < n; ++k) {
      bin_of[k] = static_cast<std::uint32_t>(detail::bin_index(values[k], iv.lo, scale, n));
      ++prefix[bin_of[k]];
    }
    for (std::uint32_t b = 1; b < n; ++b) prefix[b] += prefix[b - 1];
  }
  std::vector<std::uint32_t> cursor(n);
  std::uint32_t overflow = 0;
  {
    const std::uint32_t* prefix = arena.ints.data() + ref.ints_off;
    for (std::uint32_t b = 0; b < n; ++b) {
      cursor[b] = b ? prefix[b - 1] : 0;
      if (prefix[b] - cursor[b] > kDirectBinCapacity) ++overflow;
    }
  }
  double* out = arena.reals.data() + values_off;
  for (std::uint32_t k = 0; k < n; ++k) out[cursor[bin_of[k]]++] = values[k];
  {
    const std::uint32_t* prefix = arena.ints.data() + ref.ints_off;
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t base = b ? prefix[b - 1] : 0;
      if (prefix[b] - base > 1) sort_small(out + base, out + prefix[b]);
    }
  }

  RankSpace local;
  local.top_bins = n;
  local.values = n;
  local.overflow_bins = overflow;
  if (overflow > 0) {
    const std::uint32_t cap = std::bit_ceil(2 * overflow);
    ref.overflow_cap = cap;
    const std::size_t table = arena.ints.size();
    arena.ints.resize(table + 2 * std::size_t{cap}, 0);
    check_offset(arena.ints.size());
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t base = b ? arena.ints[ref.ints_off + b - 1] : 0;
      const std::uint32_t count = arena.ints[ref.ints_off + b] - base;
      if (count <= kDirectBinCapacity) continue;
      const double* slice = arena.reals.data() + values_off + base;
      Interval sub = scale > 0.0
                         ? Interval{iv.lo + (iv.hi - iv.lo) * (static_cast<double>(b) / n),
                                    iv.lo + (iv.hi - iv.lo) * (static_cast<double>(b + 1) / n)}
                         : Interval{slice[0], slice[count - 1]};
      sub.lo = std::min(sub.lo, slice[0]);
      sub.hi = std::max(sub.hi, slice[count - 1]);
      const std::uint32_t h = encode_bin_level(
          arena, static_cast<std::uint32_t>(values_off + base), count, sub, &local);
      std::uint32_t slot = (b * 2654435761u) & (cap - 1);
      while (arena.ints[table + slot] != 0) slot = (slot + 1) & (cap - 1);
      arena.ints[table + slot] = b + 1;
      arena.ints[table + cap + slot] = h;
    }
  }
  if (space) *space += local;
  return ref;
}

BinLevel BinLevel::build(std::span<const double> values, Interval interval) {
  check_interval(interval);
  if (values.empty()) throw std::invalid_argument("BinLevel: needs at least one value");
  check_values(values, interval);
  check_offset(values.size());
  BinLevel level;
  level.interval_ = interval;
  level.arena_.reals.assign(values.begin(), values.end());
  std::sort(level.arena_.reals.begin(), level.arena_.reals.end());
  level.header_ =
      encode_bin_level(level.arena_, 0, static_cast<std::uint32_t>(values.size()), interval);
  level.arena_.shrink_to_fit();
  return level;
}

std::uint32_t BinLevel::max_bin_occupancy() const noexcept {
  const std::uint32_t* prefix = arena_.ints.data() + header_ + detail::kLevelHeader;
  std::uint32_t best = 0;
  for (std::uint64_t b = 0; b < bin_count(); ++b) {
    best = std::max(best, prefix[b] - (b ? prefix[b - 1] : 0));
  }
  return best;
}

Rank1D::Rank1D() { ref_ = encode_rank1d(arena_, {}, interval_); }

Rank1D Rank1D::build(std::span<const double> values, Interval interval) {
  Rank1D r;
  r.arena_ = {};
  r.interval_ = interval;
  r.ref_ = encode_rank1d(r.arena_, values, interval, &r.space_);
  r.arena_.shrink_to_fit();
  return r;
}

std::vector<double> Rank1D::sorted_values() const {
  const double* v = arena_.reals.data() + ref_.reals_off + 3;
  return {v, v + ref_.n};
}

std::vector<std::uint32_t> Rank1D::bin_occupancy() const {
  std::vector<std::uint32_t> occ(ref_.n);
  const std::uint32_t* prefix = arena_.ints.data() + ref_.ints_off;
  for (std::uint32_t b = 0; b < ref_.n; ++b) occ[b] = prefix[b] - (b ? prefix[b - 1] : 0);
  return occ;
}

std::vector<std::uint32_t> Rank1D::overflow_bins() const {
  std::vector<std::uint32_t> out;
  const std::uint32_t* keys = arena_.ints.data() + ref_.ints_off + ref_.n;
  for (std::uint32_t s = 0; s < ref_.overflow_cap; ++s) {
    if (keys[s] != 0) out.push_back(keys[s] - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MultiRank MultiRank::build(std::span<const double> coords, std::size_t dims,
                           std::span<const Interval> domain) {
  if (dims == 0) throw std::invalid_argument("MultiRank: dims must be positive");
  if (domain.size() != dims) throw std::invalid_argument("MultiRank: one domain interval per dimension");
  if (coords.size() % dims != 0) throw std::invalid_argument("MultiRank: coordinate count not a multiple of dims");
  const std::size_t n = coords.size() / dims;
  MultiRank mr;
  mr.domain_.assign(domain.begin(), domain.end());
  std::vector<double> slice(n);
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t k = 0; k < n; ++k) slice[k] = coords[k * dims + d];
    mr.refs_.push_back(encode_rank1d(mr.arena_, slice, domain[d], &mr.space_));
  }
  mr.arena_.shrink_to_fit();
  return mr;
}

MultiRank MultiRank::build(std::span<const UnitPoint> points, Interval x_domain, Interval y_domain) {
  MultiRank mr;
  mr.domain_ = {x_domain, y_domain};
  std::vector<double> slice(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) slice[k] = points[k].x;
  mr.refs_.push_back(encode_rank1d(mr.arena_, slice, x_domain, &mr.space_));
  for (std::size_t k = 0; k < points.size(); ++k) slice[k] = points[k].y;
  mr.refs_.push_back(encode_rank1d(mr.arena_, slice, y_domain, &mr.space_));
  mr.arena_.shrink_to_fit();
  return mr;
}

void MultiRank::query(std::span<const double> q, std::span<std::uint32_t> out) const {
  if (q.size() != dims() || out.size() != dims()) {
    throw std::invalid_argument("MultiRank::query: dimension mismatch");
  }
  for (std::size_t d = 0; d < dims(); ++d) out[d] = arena_rank(arena_, refs_[d], q[d]);
}

std::vector<std::uint32_t> MultiRank::query(std::span<const double> q) const {
  std::vector<std::uint32_t> out(dims());
  query(q, out);
  return out;
}

RankRect MultiRank::rank_translate(const Rect& r) const {
  if (dims() != 2) throw std::logic_error("rank_translate needs a 2-d MultiRank");
  return {arena_rank(arena_, refs_[0], r.x_lo), arena_rank(arena_, refs_[0], r.x_hi),
          arena_rank(arena_, refs_[1], r.y_lo), arena_rank(arena_, refs_[1], r.y_hi)};
}

}  // namespace orthoq
