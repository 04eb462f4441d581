// Graph discretization of the region W for the modified quasihyperbolic
// distance: quadtree corners in W, sampled boundary circles, straight edges
// weighted by the trapezoid rule and exact in-cell shortcuts between nodes of
// the same circle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psphere/base_metrics.hpp"
#include "psphere/geometry.hpp"

namespace psphere {

struct MeshOptions {
  /// Finest box size; 0 picks rho_min / 20.
  double h = 0.0;
  /// Nodes per boundary circle.
  std::size_t m = 256;
  /// Boxes of size h everywhere instead of growing with delta~.
  bool uniform = false;
  Density density = Density::DeltaTilde;
  /// Nodes closer than link * (local box size) are joined.
  double link = 2.3;
  /// Coarser levels h * 2^k are kept up to this size; 0 picks rho_min / 20.
  double coarsest = 0.0;
};

namespace detail {

// Implicit 2-d tree over a fixed point array.
class PointTree {
 public:
  PointTree() = default;
  explicit PointTree(std::vector<Complex> pts) : pts_(std::move(pts)), idx_(pts_.size()) {
    std::iota(idx_.begin(), idx_.end(), 0u);
    build(0, idx_.size(), 0);
  }

  template <class Visit>
  void within(Complex q, double r, Visit&& visit) const {
    within(0, idx_.size(), 0, q, r, visit);
  }

  Complex point(std::uint32_t i) const { return pts_[i]; }

  std::uint32_t nearest(Complex q) const {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    nearest(0, idx_.size(), 0, q, best, best_d);
    return best;
  }

 private:
  static double coord(Complex z, int dim) { return dim == 0 ? z.real() : z.imag(); }

  void build(std::size_t lo, std::size_t hi, int dim) {
    if (hi - lo <= 1) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return coord(pts_[a], dim) < coord(pts_[b], dim);
                     });
    build(lo, mid, 1 - dim);
    build(mid + 1, hi, 1 - dim);
  }

  template <class Visit>
  void within(std::size_t lo, std::size_t hi, int dim, Complex q, double r, Visit& visit) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Complex p = pts_[idx_[mid]];
    if (std::abs(p - q) <= r) visit(idx_[mid]);
    const double d = coord(q, dim) - coord(p, dim);
    if (d - r <= 0.0) within(lo, mid, 1 - dim, q, r, visit);
    if (d + r >= 0.0) within(mid + 1, hi, 1 - dim, q, r, visit);
  }

  void nearest(std::size_t lo, std::size_t hi, int dim, Complex q, std::uint32_t& best,
               double& best_d) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Complex p = pts_[idx_[mid]];
    const double dp = std::abs(p - q);
    if (dp < best_d) {
      best_d = dp;
      best = idx_[mid];
    }
    const double d = coord(q, dim) - coord(p, dim);
    if (d <= 0.0) {
      nearest(lo, mid, 1 - dim, q, best, best_d);
      if (d + best_d >= 0.0) nearest(mid + 1, hi, 1 - dim, q, best, best_d);
    } else {
      nearest(mid + 1, hi, 1 - dim, q, best, best_d);
      if (d - best_d <= 0.0) nearest(lo, mid, 1 - dim, q, best, best_d);
    }
  }

  std::vector<Complex> pts_;
  std::vector<std::uint32_t> idx_;
};

inline double segment_distance(Complex a, Complex p, Complex q) {
  const Complex d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(a - p);
  const double t = std::clamp(dot(a - p, d) / len2, 0.0, 1.0);
  return std::abs(a - (p + t * d));
}

}  // namespace detail

/// Seeds or targets of a shortest-path query: (node, initial cost).
using NodeCosts = std::vector<std::pair<std::uint32_t, double>>;

class MeshGraph {
 public:
  const PunctureSet& puncture_set() const { return ps_; }
  double h() const { return h_; }
  std::size_t m() const { return m_; }
  Density density() const { return density_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t grid_node_count() const { return grid_nodes_; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::size_t shortcut_count() const { return shortcuts_; }
  std::size_t level_count() const { return levels_.size(); }
  Complex node(std::uint32_t i) const { return nodes_[i]; }
  /// -1 for grid nodes, otherwise the cell index of the circle.
  int circle_of(std::uint32_t i) const { return circle_[i]; }
  /// Node k of circle j sits at angle 2 pi k / m.
  std::uint32_t circle_node(std::size_t j, std::size_t k) const {
    return static_cast<std::uint32_t>(circle_start_ + j * m_ + k);
  }

  double inv_density(Complex z) const {
    return density_ == Density::DeltaTilde ? 1.0 / delta_tilde(ps_, z) : 1.0 / delta(ps_, z);
  }

  /// Straight segment inside the closure of W (it may touch the circles).
  bool segment_in_w(Complex p, Complex q) const {
    for (std::size_t j = 0; j < ps_.outer(); ++j) {
      const double r = ps_.rho(j);
      if (detail::segment_distance(ps_.finite(j), p, q) < r * (1.0 - 1e-9)) return false;
    }
    return true;
  }

  double segment_weight(Complex p, Complex q) const {
    return std::abs(q - p) * 0.5 * (inv_density(p) + inv_density(q));
  }

  /// Straight links from a point of the closure of W to nearby nodes of every
  /// level. On a level with no link in range the radius doubles.
  NodeCosts attach(Complex z) const {
    NodeCosts out;
    for (const Level& lv : levels_) {
      const std::uint32_t near = lv.tree.nearest(z);
      double radius = std::max(link_ * lv.scale[near], std::abs(lv.tree.point(near) - z) * 1.01);
      bool found = false;
      for (int attempt = 0; attempt < 8 && !found; ++attempt, radius *= 2.0) {
        lv.tree.within(z, radius, [&](std::uint32_t local) {
          const std::uint32_t i = lv.global[local];
          if (nodes_[i] == z) {
            out.emplace_back(i, 0.0);
            found = true;
          } else if (segment_in_w(z, nodes_[i])) {
            out.emplace_back(i, segment_weight(z, nodes_[i]));
            found = true;
          }
        });
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
  }

  /// Shortest path cost from any seed to any target, seeds and targets
  /// carrying their own entry/exit costs.
  double shortest(const NodeCosts& from, const NodeCosts& to) const {
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> exit(nodes_.size(), kInf);
    for (auto [i, c] : to) exit[i] = std::min(exit[i], c);
    std::vector<double> dist(nodes_.size(), kInf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (auto [i, c] : from) {
      if (c < dist[i]) {
        dist[i] = c;
        heap.emplace(c, i);
      }
    }
    double best = kInf;
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d >= best) break;
      if (d > dist[u]) continue;
      if (exit[u] < kInf) best = std::min(best, d + exit[u]);
      for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
        const std::uint32_t v = targets_[e];
        const double nd = d + weights_[e];
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
    return best;
  }

  friend MeshGraph build_mesh(const PunctureSet& ps, const MeshOptions& opts);

 private:
  // Nodes of the quadtree built with box size h * 2^k, plus all circle nodes.
  struct Level {
    std::vector<std::uint32_t> global;
    std::vector<double> scale;
    detail::PointTree tree;
  };

  PunctureSet ps_;
  double h_ = 0.0;
  std::size_t m_ = 0;
  double link_ = 2.3;
  Density density_ = Density::DeltaTilde;
  std::vector<Complex> nodes_;
  std::vector<int> circle_;
  std::size_t grid_nodes_ = 0;
  std::size_t circle_start_ = 0;
  std::size_t shortcuts_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<double> weights_;
  std::vector<Level> levels_;
};

/// Builds the mesh. Edges and entry links of the coarser levels h * 2^k up to
/// `coarsest` are kept, so the graph for h/2 contains the graph for h and mesh
/// distances cannot increase under halving.
inline MeshGraph build_mesh(const PunctureSet& ps, const MeshOptions& opts = {}) {
  if (opts.m < 16) throw Error(ErrorCode::InvalidArgument, "circle_samples must be at least 16");
  if (opts.h < 0.0 || !std::isfinite(opts.h))
    throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  MeshGraph g;
  g.ps_ = ps;
  g.h_ = opts.h > 0.0 ? opts.h : ps.rho_min() / 20.0;
  g.m_ = opts.m;
  g.link_ = opts.link;
  g.density_ = opts.density;

  const double R = ps.rho_max();
  const double rho_min = ps.rho_min();
  const double sqrt2 = std::numbers::sqrt2;
  constexpr int kMaxDepth = 30;
  const double unit = 2.0 * R / static_cast<double>(std::int64_t{1} << kMaxDepth);
  const auto fin = ps.finite();

  auto raw_delta_tilde = [&](Complex c) {
    double d = std::abs(c) / 2.0;
    for (Complex a : fin) d = std::min(d, std::abs(c - a));
    return d;
  };
  auto key = [](std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy);
  };
  auto in_w = [&](Complex z) {
    if (std::abs(z) > ps.rho_max() * (1.0 - 1e-9)) return false;
    for (std::size_t j = 0; j < ps.outer(); ++j)
      if (std::abs(z - ps.finite(j)) < ps.rho(j) * (1.0 + 1e-9)) return false;
    return true;
  };

  // Quadtree corners in W for box size `size`: key -> smallest adjacent box side.
  struct Box {
    std::int64_t ix, iy;
    int depth;
  };
  auto corners = [&](double size) {
    std::unordered_map<std::uint64_t, double> out;
    std::vector<Box> stack{{0, 0, 0}};
    while (!stack.empty()) {
      const Box b = stack.back();
      stack.pop_back();
      const std::int64_t span = std::int64_t{1} << (kMaxDepth - b.depth);
      const double side = unit * static_cast<double>(span);
      const double half = side / 2.0;
      const Complex c(-R + unit * static_cast<double>(b.ix) + half,
                      -R + unit * static_cast<double>(b.iy) + half);
      const double reach = half * sqrt2;
      if (std::abs(c) - reach > ps.rho_max()) continue;
      bool inside_cell = false;
      for (std::size_t j = 0; j < ps.outer() && !inside_cell; ++j)
        inside_cell = std::abs(c - ps.finite(j)) + reach < ps.rho(j);
      if (inside_cell) continue;

      const double target =
          opts.uniform ? size
                       : size * std::max(1.0, std::max(0.0, raw_delta_tilde(c) - reach) / rho_min);
      if (side > target && b.depth < kMaxDepth) {
        const std::int64_t s2 = span / 2;
        for (int dx = 0; dx < 2; ++dx)
          for (int dy = 0; dy < 2; ++dy)
            stack.push_back({b.ix + dx * s2, b.iy + dy * s2, b.depth + 1});
        continue;
      }
      for (int dx = 0; dx < 2; ++dx) {
        for (int dy = 0; dy < 2; ++dy) {
          const std::int64_t ix = b.ix + dx * span, iy = b.iy + dy * span;
          const Complex z(-R + unit * static_cast<double>(ix), -R + unit * static_cast<double>(iy));
          if (!in_w(z)) continue;
          auto [it, fresh] = out.try_emplace(key(ix, iy), side);
          if (!fresh) it->second = std::min(it->second, side);
        }
      }
    }
    return out;
  };
  auto position = [&](std::uint64_t k) {
    const auto ix = static_cast<std::int64_t>(k >> 32);
    const auto iy = static_cast<std::int64_t>(k & 0xffffffffu);
    return Complex(-R + unit * static_cast<double>(ix), -R + unit * static_cast<double>(iy));
  };

  std::vector<std::unordered_map<std::uint64_t, double>> level_corners;
  level_corners.push_back(corners(g.h_));
  if (level_corners[0].empty()) throw Error(ErrorCode::ResolutionTooCoarse, "no grid node falls in W");
  const double coarsest = opts.coarsest > 0.0 ? opts.coarsest : rho_min / 20.0;
  for (double size = 2.0 * g.h_; size <= coarsest * (1.0 + 1e-12); size *= 2.0) {
    auto c = corners(size);
    if (c.empty()) break;
    level_corners.push_back(std::move(c));
  }

  // Finest level fixes the node numbering; sorted keys keep it deterministic.
  std::vector<std::uint64_t> keys;
  keys.reserve(level_corners[0].size());
  for (const auto& [k, side] : level_corners[0]) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(keys.size());
  for (std::uint64_t k : keys) {
    index.emplace(k, static_cast<std::uint32_t>(g.nodes_.size()));
    g.nodes_.push_back(position(k));
    g.circle_.push_back(-1);
  }
  g.grid_nodes_ = g.nodes_.size();
  g.circle_start_ = g.nodes_.size();
  for (std::size_t j = 0; j <= ps.outer(); ++j) {
    for (std::size_t k = 0; k < g.m_; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(g.m_);
      g.nodes_.push_back(ps.center(j) + std::polar(ps.rho(j), phi));
      g.circle_.push_back(static_cast<int>(j));
    }
  }

  std::vector<double> inv(g.nodes_.size());
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) inv[i] = g.inv_density(g.nodes_[i]);

  struct Edge {
    std::uint32_t p, q;
    double w;
  };
  std::vector<Edge> edges;
  for (auto& corner_map : level_corners) {
    MeshGraph::Level lv;
    std::vector<Complex> pts;
    std::vector<std::uint64_t> lkeys;
    for (const auto& [k, side] : corner_map) lkeys.push_back(k);
    std::sort(lkeys.begin(), lkeys.end());
    for (std::uint64_t k : lkeys) {
      lv.global.push_back(index.at(k));
      lv.scale.push_back(corner_map.at(k));
      pts.push_back(position(k));
    }
    // Circle nodes take the box size of the nearest grid node of the level.
    detail::PointTree grid_tree(pts);
    for (std::uint32_t i = static_cast<std::uint32_t>(g.circle_start_); i < g.nodes_.size(); ++i) {
      lv.scale.push_back(lv.scale[grid_tree.nearest(g.nodes_[i])]);
      lv.global.push_back(i);
      pts.push_back(g.nodes_[i]);
    }
    lv.tree = detail::PointTree(std::move(pts));

    for (std::uint32_t lp = 0; lp < lv.global.size(); ++lp) {
      const std::uint32_t p = lv.global[lp];
      const double rp = g.link_ * lv.scale[lp];
      lv.tree.within(g.nodes_[p], rp, [&](std::uint32_t lq) {
        const std::uint32_t q = lv.global[lq];
        if (q == p) return;
        if (g.circle_[p] >= 0 && g.circle_[p] == g.circle_[q]) return;
        const double d = std::abs(g.nodes_[p] - g.nodes_[q]);
        const double rq = g.link_ * lv.scale[lq];
        // Each pair is added once, by the endpoint with the larger reach.
        if (d <= rq && (rq > rp || (rq == rp && q < p))) return;
        if (!g.segment_in_w(g.nodes_[p], g.nodes_[q])) return;
        edges.push_back({std::min(p, q), std::max(p, q), d * 0.5 * (inv[p] + inv[q])});
      });
    }
    g.levels_.push_back(std::move(lv));
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.p != b.p ? a.p < b.p : a.q < b.q; });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.p == b.p && a.q == b.q; }),
              edges.end());
  for (std::size_t j = 0; j <= ps.outer(); ++j) {
    for (std::size_t k = 0; k < g.m_; ++k) {
      for (std::size_t l = k + 1; l < g.m_; ++l) {
        const std::uint32_t a = g.circle_node(j, k), b = g.circle_node(j, l);
        edges.push_back({a, b, cell_q(ps, j, g.nodes_[a], g.nodes_[b], g.density_)});
        ++g.shortcuts_;
      }
    }
  }

  g.offsets_.assign(g.nodes_.size() + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.p + 1];
    ++g.offsets_[e.q + 1];
  }
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.resize(g.offsets_.back());
  g.weights_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.targets_[fill[e.p]] = e.q;
    g.weights_[fill[e.p]++] = e.w;
    g.targets_[fill[e.q]] = e.p;
    g.weights_[fill[e.q]++] = e.w;
  }

  std::vector<bool> seen(g.nodes_.size(), false);
  std::vector<std::uint32_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::uint32_t u = queue.back();
    queue.pop_back();
    for (std::size_t e = g.offsets_[u]; e < g.offsets_[u + 1]; ++e) {
      if (!seen[g.targets_[e]]) {
        seen[g.targets_[e]] = true;
        ++reached;
        queue.push_back(g.targets_[e]);
      }
    }
  }
  if (reached != g.nodes_.size())
    throw Error(ErrorCode::ResolutionTooCoarse,
                std::to_string(g.nodes_.size() - reached) + " mesh nodes are disconnected");
  return g;
}

/// Cost of entering the mesh from z: exact in-cell links to the circle of
/// its cell and straight links from the closure of W.
inline NodeCosts mesh_entry(const MeshGraph& g, Complex z) {
  const PunctureSet& ps = g.puncture_set();
  const Region r = classify(ps, z);
  NodeCosts out;
  if (r.kind != Region::Kind::Wild) {
    for (std::size_t k = 0; k < g.m(); ++k) {
      const std::uint32_t i = g.circle_node(r.index, k);
      out.emplace_back(i, cell_q(ps, r.index, z, g.node(i), g.density()));
    }
  }
  if (r.kind != Region::Kind::Cell) {
    NodeCosts w = g.attach(z);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

/// Mesh approximation of the modified quasihyperbolic distance (or of the
/// quasihyperbolic distance for a Delta-density mesh).
inline double q_hat(const PunctureSet& ps, const MeshGraph& g, Complex z1, Complex z2) {
  if (!g.puncture_set().same_as(ps))
    throw Error(ErrorCode::MeshMismatch, "mesh was built for another puncture set");
  require_not_puncture(ps, z1);
  require_not_puncture(ps, z2);
  if (z1 == z2) return 0.0;
  const Region r1 = classify(ps, z1), r2 = classify(ps, z2);
  if (r1.kind != Region::Kind::Wild && r2.kind != Region::Kind::Wild && r1.index == r2.index)
    return cell_q(ps, r1.index, z1, z2, g.density());

  return g.shortest(mesh_entry(g, z1), mesh_entry(g, z2));
}

}  // namespace psphere
