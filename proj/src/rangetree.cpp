#include "orthoq/rangetree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace orthoq {
namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

Rect intersect(const Rect& a, const Rect& b) {
  return {std::max(a.x_lo, b.x_lo), std::min(a.x_hi, b.x_hi), std::max(a.y_lo, b.y_lo),
          std::min(a.y_hi, b.y_hi)};
}

std::uint32_t log2_exact(std::uint64_t pow2) { return static_cast<std::uint32_t>(std::countr_zero(pow2)); }

}  // namespace

std::uint64_t lca_leafrange(std::uint64_t tree_size, std::uint64_t a, std::uint64_t b) {
  if (tree_size == 0 || !std::has_single_bit(tree_size)) {
    throw std::invalid_argument("lca_leafrange: tree size must be a power of two");
  }
  if (a < 1 || a > b || b > tree_size) {
    throw std::invalid_argument("lca_leafrange: need 1 <= a <= b <= tree_size");
  }
  return lca_unchecked(tree_size, a, b);
}

RangeTree3 RangeTree3::build(std::span<const UnitPoint> points, const Rect& cell) {
  if (!(cell.x_lo <= cell.x_hi && cell.y_lo <= cell.y_hi)) {
    throw std::invalid_argument("RangeTree3: malformed cell");
  }
  for (const auto& p : points) {
    if (!(p.x >= cell.x_lo && p.x <= cell.x_hi && p.y >= cell.y_lo && p.y <= cell.y_hi)) {
      throw std::invalid_argument("RangeTree3: point outside the cell");
    }
  }
  if (points.size() >= std::numeric_limits<std::uint32_t>::max() / 2) {
    throw std::length_error("RangeTree3: too many points");
  }

  RangeTree3 t;
  t.cell_ = cell;
  const auto k = static_cast<std::uint32_t>(points.size());
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a].x < points[b].x || (points[a].x == points[b].x && a < b);
  });
  t.xs_.resize(k);
  t.ys_by_x_.resize(k);
  for (std::uint32_t r = 0; r < k; ++r) {
    t.xs_[r] = points[order[r]].x;
    t.ys_by_x_[r] = points[order[r]].y;
  }
  t.x_rank_ = encode_rank1d(t.arena_, t.xs_, {cell.x_lo, cell.x_hi}, &t.space_.rank);
  t.n_pad_ = std::bit_ceil(std::max<std::uint32_t>(k, 1));
  const std::uint32_t top_height = log2_exact(t.n_pad_);

  // Leaf spans and y-ordered x-ranks per top node, merged bottom-up.
  t.secondary_.resize(2 * std::size_t{t.n_pad_});
  std::size_t total = 0;
  for (std::uint64_t v = 1; v < 2 * std::uint64_t{t.n_pad_}; ++v) {
    const auto depth = static_cast<std::uint32_t>(std::bit_width(v) - 1);
    const std::uint32_t height = top_height - depth;
    const auto first = static_cast<std::uint32_t>(((v - (std::uint64_t{1} << depth)) << height) + 1);
    const std::uint32_t last = first + (std::uint32_t{1} << height) - 1;
    Secondary& sec = t.secondary_[v];
    sec.first_x = first;
    sec.last_x = std::min(last, k);
    sec.count = first <= k ? sec.last_x - first + 1 : 0;
    sec.xpos_off = static_cast<std::uint32_t>(total);
    total += sec.count;
  }
  t.xpos_.resize(total);
  auto y_before = [&](std::uint32_t p, std::uint32_t q) {
    return t.ys_by_x_[p - 1] < t.ys_by_x_[q - 1] || (t.ys_by_x_[p - 1] == t.ys_by_x_[q - 1] && p < q);
  };
  for (std::uint64_t v = 2 * std::uint64_t{t.n_pad_} - 1; v >= 1; --v) {
    const Secondary& sec = t.secondary_[v];
    if (sec.count == 0) continue;
    std::uint32_t* out = t.xpos_.data() + sec.xpos_off;
    if (v >= t.n_pad_) {
      out[0] = sec.first_x;
      continue;
    }
    const Secondary& l = t.secondary_[2 * v];
    const Secondary& r = t.secondary_[2 * v + 1];
    const std::uint32_t* lp = t.xpos_.data() + l.xpos_off;
    const std::uint32_t* rp = t.xpos_.data() + r.xpos_off;
    std::merge(lp, lp + l.count, rp, rp + r.count, out, y_before);
  }

  std::vector<double> ysv, xvals;
  std::vector<std::uint32_t> inv, cursor, by_x, perm;
  for (std::uint64_t v = 1; v < 2 * std::uint64_t{t.n_pad_}; ++v) {
    Secondary& sec = t.secondary_[v];
    const std::uint32_t c = sec.count;
    if (c == 0) continue;
    const std::uint32_t* xp = t.xpos_.data() + sec.xpos_off;
    ysv.resize(c);
    for (std::uint32_t r = 0; r < c; ++r) ysv[r] = t.ys_by_x_[xp[r] - 1];
    sec.y_rank = encode_rank1d(t.arena_, ysv, {cell.y_lo, cell.y_hi}, &t.space_.rank);
    sec.pad = std::bit_ceil(c);
    sec.store_off = static_cast<std::uint32_t>(t.stores_.size());
    t.stores_.resize(t.stores_.size() + 2 * std::size_t{sec.pad});

    inv.resize(c);
    for (std::uint32_t r = 0; r < c; ++r) inv[xp[r] - sec.first_x] = r;
    const Interval x_dom{sec.first_x > 1 ? t.xs_[sec.first_x - 2] : cell.x_lo,
                         sec.last_x < k ? t.xs_[sec.last_x] : cell.x_hi};

    by_x.resize(c);
    for (std::uint32_t level = 0, width = 1; width <= sec.pad; ++level, width <<= 1) {
      const std::uint32_t nodes = (c + width - 1) / width;
      cursor.resize(nodes);
      for (std::uint32_t idx = 0; idx < nodes; ++idx) cursor[idx] = idx * width;
      // Stable bucket pass: each node's points come out in x order.
      for (std::uint32_t a = 0; a < c; ++a) by_x[cursor[inv[a] >> level]++] = a;
      for (std::uint32_t idx = 0; idx < nodes; ++idx) {
        const std::uint32_t start = idx * width;
        const std::uint32_t cnt = std::min(width, c - start);
        NodeStore& s = t.stores_[sec.store_off + (sec.pad >> level) + idx];
        s.count = cnt;
        perm.resize(cnt);
        xvals.resize(cnt);
        for (std::uint32_t a = 0; a < cnt; ++a) {
          const std::uint32_t local = by_x[start + a];
          perm[a] = inv[local] - start + 1;
          xvals[a] = t.xs_[sec.first_x + local - 1];
        }
        const Interval y_dom{start > 0 ? ysv[start - 1] : cell.y_lo,
                             start + cnt < c ? ysv[start + cnt] : cell.y_hi};
        s.x_rank = encode_rank1d(t.arena_, xvals, x_dom, &t.space_.rank);
        s.y_rank = encode_rank1d(t.arena_, std::span<const double>(ysv).subspan(start, cnt), y_dom,
                                 &t.space_.rank);
        s.stair_off = static_cast<std::uint32_t>(t.stairs_.size());
        t.stairs_.resize(t.stairs_.size() + 4 * std::size_t{cnt});
        for (Orientation o : kOrientations) {
          build_staircase(perm, o,
                          std::span<std::uint32_t>(t.stairs_).subspan(
                              s.stair_off + static_cast<std::size_t>(o) * cnt, cnt));
        }
        ++t.space_.node_stores;
      }
    }
    if (t.stairs_.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw std::length_error("RangeTree3: staircase storage exceeds 32-bit offsets");
    }
  }

  t.arena_.shrink_to_fit();
  t.stores_.shrink_to_fit();
  t.stairs_.shrink_to_fit();
  t.space_.points = k;
  t.space_.top_nodes = 2 * std::size_t{t.n_pad_} - 1;
  t.space_.staircase_entries = t.stairs_.size();
  t.space_.bytes = sizeof(RangeTree3) + t.xs_.capacity() * sizeof(double) +
                   t.ys_by_x_.capacity() * sizeof(double) + t.secondary_.capacity() * sizeof(Secondary) +
                   t.xpos_.capacity() * sizeof(std::uint32_t) + t.stores_.capacity() * sizeof(NodeStore) +
                   t.stairs_.capacity() * sizeof(std::uint32_t) + t.arena_.bytes();
  return t;
}

std::vector<UnitPoint> RangeTree3::leaf_points() const {
  std::vector<UnitPoint> out(xs_.size());
  for (std::size_t r = 0; r < xs_.size(); ++r) out[r] = {xs_[r], ys_by_x_[r]};
  return out;
}

double RangeTree3::secondary_y(const Secondary& sec, std::uint32_t pos) const {
  // pos is a 1-based y-rank within P_v; 0 maps to -inf.
  return pos == 0 ? kMinusInf : arena_.reals[sec.y_rank.reals_off + 3 + pos - 1];
}

Rect RangeTree3::node_rect(const Secondary& sec, std::uint64_t store_id) const {
  const std::uint32_t level = log2_exact(sec.pad) - static_cast<std::uint32_t>(std::bit_width(store_id) - 1);
  const std::uint64_t idx = store_id - (sec.pad >> level);
  const auto start = static_cast<std::uint32_t>(idx << level);
  const std::uint32_t end = std::min<std::uint32_t>(start + (1u << level), sec.count);
  return {sec.first_x > 1 ? xs_[sec.first_x - 2] : kMinusInf, xs_[sec.last_x - 1], secondary_y(sec, start),
          secondary_y(sec, end)};
}

bool RangeTree3::probe(const NodeStore& s, Orientation o, const Rect& q, bool left, bool low_y) const {
  const std::uint32_t i = arena_rank(arena_, s.x_rank, left ? q.x_lo : q.x_hi);
  const std::uint32_t j = arena_rank(arena_, s.y_rank, low_y ? q.y_lo : q.y_hi);
  const std::uint32_t* f = stairs_.data() + s.stair_off + static_cast<std::size_t>(o) * s.count;
  return staircase_nonempty(o, f, s.count, i, j);
}

bool RangeTree3::side_nonempty(std::uint64_t v, bool left, const Rect& q, std::uint32_t i1,
                               std::uint32_t i2, RangeQueryTrace* trace) const {
  const Secondary& sec = secondary_[v];
  if (sec.count == 0) return false;
  const std::uint32_t k1 = arena_rank(arena_, sec.y_rank, q.y_lo);
  const std::uint32_t k2 = arena_rank(arena_, sec.y_rank, q.y_hi);
  if (k1 >= k2) return false;
  if (k2 == k1 + 1) {
    const std::uint32_t xp = xpos_[sec.xpos_off + k2 - 1];
    if (trace) {
      ++trace->point_tests;
      if (trace->record_parts) {
        const Rect r{sec.first_x > 1 ? xs_[sec.first_x - 2] : kMinusInf, xs_[sec.last_x - 1],
                     secondary_y(sec, k1), secondary_y(sec, k2)};
        trace->parts.push_back({intersect(q, r), Orientation::LowXLowY, true});
      }
    }
    return left ? xp > i1 : xp <= i2;
  }
  const std::uint64_t split = lca_unchecked(sec.pad, k1 + 1, k2);
  const std::uint64_t ids[2] = {2 * split, 2 * split + 1};
  const Orientation orient[2] = {left ? Orientation::HighXHighY : Orientation::LowXHighY,
                                 left ? Orientation::HighXLowY : Orientation::LowXLowY};
  bool hit = false;
  for (int c = 0; c < 2; ++c) {
    const NodeStore& s = stores_[sec.store_off + ids[c]];
    if (trace) {
      ++trace->quadrant_probes;
      if (trace->record_parts) trace->parts.push_back({intersect(q, node_rect(sec, ids[c])), orient[c], false});
    }
    if (probe(s, orient[c], q, left, c == 0)) {
      hit = true;
      if (!trace || !trace->record_parts) return true;
    }
  }
  return hit;
}

bool RangeTree3::empty(const Rect& q, RangeQueryTrace* trace) const {
  const auto k = static_cast<std::uint32_t>(xs_.size());
  if (k == 0) return true;
  const std::uint32_t i1 = arena_rank(arena_, x_rank_, q.x_lo);
  const std::uint32_t i2 = arena_rank(arena_, x_rank_, q.x_hi);
  if (i1 >= i2) return true;
  if (i2 == i1 + 1) {
    const double y = ys_by_x_[i2 - 1];
    if (trace) {
      ++trace->point_tests;
      if (trace->record_parts) {
        const Rect leaf{i1 > 0 ? xs_[i1 - 1] : kMinusInf, xs_[i2 - 1], q.y_lo, q.y_hi};
        trace->parts.push_back({intersect(q, leaf), Orientation::LowXLowY, true});
      }
    }
    return !(q.y_lo < y && y <= q.y_hi);
  }
  const std::uint64_t u = lca_unchecked(n_pad_, i1 + 1, i2);
  const bool record = trace && trace->record_parts;
  bool hit = side_nonempty(2 * u, true, q, i1, i2, trace);
  if (hit && !record) return false;
  hit = side_nonempty(2 * u + 1, false, q, i1, i2, trace) || hit;
  return !hit;
}

}  // namespace orthoq
