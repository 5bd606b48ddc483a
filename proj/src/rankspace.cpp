#include "orthoq/rankspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace orthoq {

CrossingStore CrossingStore::build(std::span<const RankPoint> points, std::uint32_t alpha,
                                   std::uint32_t beta, std::uint32_t n) {
  if (alpha > beta) throw std::invalid_argument("CrossingStore: alpha > beta");
  CrossingStore s;
  s.alpha_ = alpha;
  s.beta_ = beta;
  s.prefix_.assign(std::size_t{n} + 1, 0);
  for (const auto& p : points) {
    if (p.i < alpha || p.i > beta || p.j < 1 || p.j > n) {
      throw std::invalid_argument("CrossingStore: point (" + std::to_string(p.i) + "," +
                                  std::to_string(p.j) + ") outside the block");
    }
    if (s.prefix_[p.j] != 0) throw std::invalid_argument("CrossingStore: repeated y-coordinate");
    s.prefix_[p.j] = 1;
  }
  for (std::uint32_t j = 1; j <= n; ++j) s.prefix_[j] += s.prefix_[j - 1];
  return s;
}

bool CrossingStore::crossing_empty(const RankRect& q) const {
  if (!(q.i1 < alpha_ && q.i2 >= beta_)) {
    throw std::logic_error("crossing_empty: query does not cross the block");
  }
  const auto n = static_cast<std::uint32_t>(prefix_.size() - 1);
  return prefix_range_empty(prefix_.data(), std::min(q.j1, n), std::min(q.j2, n));
}

std::uint32_t SlabTree::slab_width(std::uint32_t n, double eps) {
  if (n <= 1) return 1;
  const double r = std::pow(static_cast<double>(n), 1.0 - eps / 2.0);
  const double nearest = std::round(r);
  const double delta = std::fabs(r - nearest) <= 1e-9 * r ? nearest : std::ceil(r);
  // At least two slabs, so every child is strictly smaller than its parent.
  const std::uint32_t half = (n + 1) / 2;
  return std::clamp<std::uint32_t>(static_cast<std::uint32_t>(delta), 1, half);
}

SlabTree SlabTree::build(std::span<const std::uint32_t> perm, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("SlabTree: eps must lie in (0,1)");
  validate_permutation(perm);
  SlabTree tree;
  tree.eps_ = eps;
  if (perm.empty()) return tree;

  struct Task {
    std::uint32_t node;
    std::uint32_t level;
    std::vector<std::uint32_t> perm;
  };
  std::vector<Task> work;
  tree.nodes_.push_back({});
  work.push_back({0, 1, {perm.begin(), perm.end()}});
  std::vector<std::uint8_t> mark;

  while (!work.empty()) {
    Task task = std::move(work.back());
    work.pop_back();
    const auto n = static_cast<std::uint32_t>(task.perm.size());
    Node node;
    node.n = n;
    if (n == 1) {
      tree.nodes_[task.node] = node;
      continue;
    }
    tree.depth_ = std::max(tree.depth_, task.level);
    const std::uint32_t d = slab_width(n, eps);
    const std::uint32_t m = (n + d - 1) / d;
    node.delta = d;
    node.fanout = m;
    node.table_off = tree.tables_.size();
    const std::size_t stride = std::size_t{n} + 1;
    tree.tables_.resize(node.table_off + std::size_t{m} * (m + 1) / 2 * stride);

    std::uint64_t off = node.table_off;
    for (std::uint32_t a = 0; a < m; ++a) {
      mark.assign(stride, 0);
      for (std::uint32_t b = a; b < m; ++b, off += stride) {
        const std::uint32_t end = std::min(n, (b + 1) * d);
        for (std::uint32_t x = b * d; x < end; ++x) mark[task.perm[x]] = 1;
        std::uint32_t* out = tree.tables_.data() + off;
        out[0] = 0;
        for (std::uint32_t j = 1; j <= n; ++j) out[j] = out[j - 1] + mark[j];
      }
    }

    node.first_child = static_cast<std::uint32_t>(tree.nodes_.size());
    tree.nodes_[task.node] = node;
    tree.nodes_.resize(tree.nodes_.size() + m);
    for (std::uint32_t c = 0; c < m; ++c) {
      const std::uint32_t* translate = tree.table(node, c, c);
      const std::uint32_t end = std::min(n, (c + 1) * d);
      std::vector<std::uint32_t> child;
      child.reserve(end - c * d);
      for (std::uint32_t x = c * d; x < end; ++x) child.push_back(translate[task.perm[x]]);
      work.push_back({node.first_child + c, task.level + 1, std::move(child)});
    }
  }
  tree.nodes_.shrink_to_fit();
  tree.tables_.shrink_to_fit();
  return tree;
}

const std::uint32_t* SlabTree::table(const Node& node, std::uint32_t a, std::uint32_t b) const noexcept {
  const std::uint64_t m = node.fanout;
  const std::uint64_t pair = a * m - std::uint64_t{a} * (a - 1) / 2 + (b - a);
  return tables_.data() + node.table_off + pair * (std::uint64_t{node.n} + 1);
}

bool SlabTree::empty(const RankRect& q, SlabQueryStats* stats) const {
  const std::uint32_t n = size();
  if (n == 0) return true;
  return !nonempty(0, std::min(q.i1, n), std::min(q.i2, n), std::min(q.j1, n), std::min(q.j2, n), stats);
}

bool SlabTree::nonempty(std::uint32_t idx, std::uint32_t i1, std::uint32_t i2, std::uint32_t j1,
                        std::uint32_t j2, SlabQueryStats* stats) const {
  if (i1 >= i2 || j1 >= j2) return false;
  if (stats) ++stats->nodes_visited;
  const Node& node = nodes_[idx];
  if (node.n == 1) return true;

  const std::uint32_t d = node.delta;
  const std::uint32_t m = node.fanout;
  auto descend = [&](std::uint32_t c) {
    const std::uint32_t start = c * d;
    const std::uint32_t width = std::min(d, node.n - start);
    const std::uint32_t* translate = table(node, c, c);
    const std::uint32_t lo = i1 > start ? i1 - start : 0;
    const std::uint32_t hi = std::min(i2 - std::min(i2, start), width);
    return nonempty(node.first_child + c, lo, hi, translate[j1], translate[j2], stats);
  };

  // Slabs alpha..beta lie entirely inside (i1, i2].
  const std::uint32_t alpha = (i1 + d - 1) / d;
  const std::int64_t beta = i2 == node.n ? std::int64_t{m} - 1 : std::int64_t{i2 / d} - 1;
  if (std::int64_t{alpha} <= beta) {
    const auto b = static_cast<std::uint32_t>(beta);
    if (stats) ++stats->crossing_probes;
    if (!prefix_range_empty(table(node, alpha, b), j1, j2)) return true;
    if (i1 % d != 0 && descend(alpha - 1)) return true;
    if (b + 1 < m && i2 > (b + 1) * d && descend(b + 1)) return true;
    return false;
  }
  // No slab is crossed: the x-range touches one slab or straddles two.
  const std::uint32_t first = i1 / d;
  const std::uint32_t last = (i2 - 1) / d;
  for (std::uint32_t c = first; c <= last; ++c) {
    if (descend(c)) return true;
  }
  return false;
}

std::string_view to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::LowXLowY:
      return "lowx-lowy";
    case Orientation::LowXHighY:
      return "lowx-highy";
    case Orientation::HighXLowY:
      return "highx-lowy";
    case Orientation::HighXHighY:
      return "highx-highy";
  }
  return "?";
}

void build_staircase(std::span<const std::uint32_t> perm, Orientation o, std::span<std::uint32_t> out) {
  const std::size_t n = perm.size();
  if (out.size() != n) throw std::invalid_argument("build_staircase: output size mismatch");
  if (n == 0) return;
  switch (o) {
    case Orientation::LowXLowY:
      out[0] = perm[0];
      for (std::size_t k = 1; k < n; ++k) out[k] = std::min(out[k - 1], perm[k]);
      break;
    case Orientation::LowXHighY:
      out[0] = perm[0];
      for (std::size_t k = 1; k < n; ++k) out[k] = std::max(out[k - 1], perm[k]);
      break;
    case Orientation::HighXLowY:
      out[n - 1] = perm[n - 1];
      for (std::size_t k = n - 1; k-- > 0;) out[k] = std::min(out[k + 1], perm[k]);
      break;
    case Orientation::HighXHighY:
      out[n - 1] = perm[n - 1];
      for (std::size_t k = n - 1; k-- > 0;) out[k] = std::max(out[k + 1], perm[k]);
      break;
  }
}

QuadrantStore QuadrantStore::build(std::span<const std::uint32_t> perm) {
  validate_permutation(perm);
  QuadrantStore s;
  s.n_ = static_cast<std::uint32_t>(perm.size());
  for (Orientation o : kOrientations) {
    auto& f = s.stairs_[static_cast<int>(o)];
    f.resize(perm.size());
    build_staircase(perm, o, f);
  }
  return s;
}

}  // namespace orthoq
