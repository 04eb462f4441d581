// Normalized puncture sets and the planar geometry attached to them:
// the cell radii, region classification, boundary-distance functions,
// (modified) Voronoi diagrams and the Beardon-Pommerenke quantities.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psphere/invariants.hpp"
#include "psphere/sphere_core.hpp"

namespace psphere {

/// a_1 = 0, a_2..a_{n-1} finite, a_n = infinity, with the cell radii
/// rho~_j (nearest-neighbour distance, or max |a_k| for the outer cell) and
/// rho_j = rho~_j / e (inner) or e * rho~_n (outer).
class PunctureSet {
 public:
  /// Builds from a list that contains 0 and infinity. 0 is moved to the
  /// front and infinity to the back; the others keep their relative order.
  static PunctureSet from_points(std::span<const ExtendedPoint> pts,
                                 double eps = kDefaultEqTolerance) {
    if (pts.size() < 3) throw Error(ErrorCode::TooFewPunctures, "need at least three punctures");
    require_distinct(pts, eps);
    std::optional<std::size_t> zero, infinity;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].is_infinite()) {
        infinity = i;
      } else if (std::abs(pts[i].value()) <= eps) {
        zero = i;
      }
    }
    if (!zero) throw Error(ErrorCode::MissingOriginPuncture, "0 must be a puncture");
    if (!infinity) throw Error(ErrorCode::NotNormalized, "infinity must be a puncture");

    PunctureSet ps;
    ps.finite_.push_back(0.0);
    ps.source_.push_back(*zero);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == *zero || i == *infinity) continue;
      ps.finite_.push_back(pts[i].value());
      ps.source_.push_back(i);
    }
    ps.source_.push_back(*infinity);
    ps.derive_radii();
    return ps;
  }

  std::size_t size() const { return finite_.size() + 1; }
  /// Index of the puncture at infinity (and of the outer cell E_n).
  std::size_t outer() const { return finite_.size(); }
  std::span<const Complex> finite() const { return finite_; }
  Complex finite(std::size_t j) const { return finite_.at(j); }
  std::span<const double> rho_tilde() const { return rho_tilde_; }
  std::span<const double> rho() const { return rho_; }
  double rho(std::size_t j) const { return rho_.at(j); }
  double rho_tilde(std::size_t j) const { return rho_tilde_.at(j); }
  double rho_min() const { return *std::min_element(rho_.begin(), rho_.end()); }
  double rho_max() const { return rho_.back(); }
  /// Position of each puncture in the list this set was built from.
  std::span<const std::size_t> source_index() const { return source_; }

  /// Center of the boundary circle of cell j (0 for the outer cell).
  Complex center(std::size_t j) const { return j == outer() ? Complex{} : finite_.at(j); }

  std::vector<ExtendedPoint> points() const {
    std::vector<ExtendedPoint> out(finite_.begin(), finite_.end());
    out.push_back(inf());
    return out;
  }

  bool contains_one(double eps = kDefaultEqTolerance) const {
    return std::any_of(finite_.begin(), finite_.end(),
                       [&](Complex a) { return std::abs(a - 1.0) <= eps; });
  }

  bool same_as(const PunctureSet& o) const {
    if (o.finite_.size() != finite_.size()) return false;
    for (std::size_t i = 0; i < finite_.size(); ++i)
      if (std::abs(o.finite_[i] - finite_[i]) > kDefaultEqTolerance) return false;
    return true;
  }

 private:
  void derive_radii() {
    const std::size_t m = finite_.size();
    rho_tilde_.assign(m + 1, 0.0);
    rho_.assign(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m; ++k)
        if (k != j) nearest = std::min(nearest, std::abs(finite_[k] - finite_[j]));
      rho_tilde_[j] = nearest;
      rho_[j] = nearest / std::numbers::e;
    }
    double far = 0.0;
    for (Complex a : finite_) far = std::max(far, std::abs(a));
    rho_tilde_[m] = far;
    rho_[m] = far * std::numbers::e;
  }

  std::vector<Complex> finite_;
  std::vector<double> rho_tilde_;
  std::vector<double> rho_;
  std::vector<std::size_t> source_;
};

struct Normalized {
  PunctureSet ps;
  MobiusTransform transform;
};

/// Moves the punctures so that 0, 1 and infinity are among them.
///
/// `anchor` holds indices (p, q, r) sent to (0, 1, infinity). Without it the
/// rule is: identity if 0, 1, infinity are already present; (0, first other
/// point, infinity) if 0 and infinity are; (first finite, second finite,
/// infinity) if only infinity is; otherwise the first three points.
inline Normalized normalize(std::span<const ExtendedPoint> raw,
                            std::optional<std::array<std::size_t, 3>> anchor = std::nullopt,
                            double eps = kDefaultEqTolerance) {
  if (raw.size() < 3) throw Error(ErrorCode::TooFewPunctures, "need at least three punctures");
  require_distinct(raw, eps);
  std::optional<std::size_t> zero, one, infinity;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].is_infinite()) {
      infinity = i;
    } else if (std::abs(raw[i].value()) <= eps) {
      zero = i;
    } else if (std::abs(raw[i].value() - 1.0) <= eps) {
      one = i;
    }
  }
  std::array<std::size_t, 3> a{};
  if (anchor) {
    a = *anchor;
    for (std::size_t idx : a)
      if (idx >= raw.size()) throw Error(ErrorCode::InvalidArgument, "anchor index out of range");
    if (a[0] == a[1] || a[1] == a[2] || a[0] == a[2])
      throw Error(ErrorCode::DuplicatePoint, "anchor indices must differ");
  } else if (zero && one && infinity) {
    a = {*zero, *one, *infinity};
  } else if (zero && infinity) {
    std::size_t first_other = 0;
    while (first_other == *zero || first_other == *infinity) ++first_other;
    a = {*zero, first_other, *infinity};
  } else if (infinity) {
    std::vector<std::size_t> fin;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (i != *infinity) fin.push_back(i);
    a = {fin[0], fin[1], *infinity};
  } else {
    a = {0, 1, 2};
  }

  const bool is_identity = zero && one && infinity && a[0] == *zero && a[1] == *one &&
                           a[2] == *infinity;
  const MobiusTransform t = is_identity ? MobiusTransform::identity()
                                        : mobius_from_triple(raw[a[0]], raw[a[1]], raw[a[2]], eps);
  std::vector<ExtendedPoint> mapped;
  mapped.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i == a[0]) {
      mapped.emplace_back(0.0);
    } else if (i == a[1]) {
      mapped.emplace_back(1.0);
    } else if (i == a[2]) {
      mapped.push_back(inf());
    } else {
      mapped.push_back(t(raw[i]));
    }
  }
  PunctureSet ps = PunctureSet::from_points(mapped, eps);
  return {std::move(ps), t};
}

struct Region {
  enum class Kind { Cell, Boundary, Wild };
  Kind kind = Kind::Wild;
  /// Cell index (0 = origin cell, ps.outer() = outer cell). Unused for Wild.
  std::size_t index = 0;

  bool operator==(const Region&) const = default;

  static Region cell(std::size_t j) { return {Kind::Cell, j}; }
  static Region boundary(std::size_t j) { return {Kind::Boundary, j}; }
  static Region wild() { return {Kind::Wild, 0}; }
};

inline const char* to_string(Region::Kind k) {
  switch (k) {
    case Region::Kind::Cell: return "cell";
    case Region::Kind::Boundary: return "boundary";
    case Region::Kind::Wild: return "wild";
  }
  return "?";
}

inline constexpr double kBoundaryRelTolerance = 1e-9;

inline void require_not_puncture(const PunctureSet& ps, Complex z,
                                 double eps = kDefaultEqTolerance) {
  for (std::size_t j = 0; j < ps.finite().size(); ++j)
    if (std::abs(z - ps.finite(j)) <= eps)
      throw Error(ErrorCode::PointIsPuncture, "point coincides with puncture " + std::to_string(j));
}

inline Region classify(const PunctureSet& ps, const ExtendedPoint& z,
                       double eps = kDefaultEqTolerance) {
  if (z.is_infinite()) throw Error(ErrorCode::PointIsPuncture, "infinity is a puncture");
  const Complex w = z.value();
  require_not_puncture(ps, w, eps);
  for (std::size_t j = 0; j < ps.outer(); ++j) {
    const double d = std::abs(w - ps.finite(j));
    if (std::abs(d - ps.rho(j)) <= kBoundaryRelTolerance * ps.rho(j)) return Region::boundary(j);
    if (d < ps.rho(j)) return Region::cell(j);
  }
  const double r = std::abs(w);
  const std::size_t n = ps.outer();
  if (std::abs(r - ps.rho(n)) <= kBoundaryRelTolerance * ps.rho(n)) return Region::boundary(n);
  if (r > ps.rho(n)) return Region::cell(n);
  return Region::wild();
}

/// True when z lies in the closed cell E_j (boundary included, puncture excluded).
inline bool in_closed_cell(const PunctureSet& ps, std::size_t j, Complex z) {
  const double tol = 1.0 + kBoundaryRelTolerance;
  if (j == ps.outer()) return std::abs(z) * tol >= ps.rho(j);
  return std::abs(z - ps.finite(j)) <= ps.rho(j) * tol;
}

/// Euclidean distance to the nearest finite puncture.
inline double delta(std::span<const Complex> finite, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (Complex a : finite) best = std::min(best, std::abs(z - a));
  if (best <= 0.0) throw Error(ErrorCode::PointIsPuncture, "delta at a puncture");
  return best;
}

inline double delta(const PunctureSet& ps, Complex z) { return delta(ps.finite(), z); }

/// min(delta(z), |z|/2).
inline double delta_tilde(const PunctureSet& ps, Complex z) {
  return std::min(delta(ps, z), std::abs(z) / 2.0);
}

/// Index of the finite puncture minimizing |z - a| (first on ties).
inline std::size_t voronoi_owner(const PunctureSet& ps, Complex z) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < ps.finite().size(); ++j)
    if (std::abs(z - ps.finite(j)) < std::abs(z - ps.finite(best))) best = j;
  return best;
}

/// Modified distance to a single puncture: |z-a| for a != 0, |z|/2 for a = 0.
inline double delta_tilde_to(const PunctureSet& ps, std::size_t j, Complex z) {
  return j == 0 ? std::abs(z) / 2.0 : std::abs(z - ps.finite(j));
}

inline std::size_t modified_voronoi_owner(const PunctureSet& ps, Complex z) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < ps.finite().size(); ++j)
    if (delta_tilde_to(ps, j, z) < delta_tilde_to(ps, best, z)) best = j;
  return best;
}

// ---------------------------------------------------------------------------
// Voronoi diagrams

struct CellBoundaryPath {
  std::size_t nucleus_index = 0;
  Complex nucleus{};
  /// The boundary is a single closed loop inside the clip box.
  bool closed = false;
  /// The true (unclipped) cell is unbounded.
  bool unbounded = false;
  std::vector<std::vector<Complex>> polylines;
  /// Clipped cell as a polygon (counter-clockwise); empty for the modified
  /// cell of the origin, which is emitted through its boundary only.
  std::vector<Complex> polygon;
};

struct VoronoiOptions {
  /// Half width of the clip box around the origin; 0 picks rho_n.
  double half_width = 0.0;
  /// Vertices used to sample each Apollonian circle.
  std::size_t arc_samples = 512;
};

namespace detail {

inline double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }
inline double dot(Complex u, Complex v) { return u.real() * v.real() + u.imag() * v.imag(); }

// Keeps {z : |z - a| <= |z - b|}.
inline std::vector<Complex> clip_bisector(const std::vector<Complex>& poly, Complex a, Complex b) {
  const Complex mid = (a + b) / 2.0;
  const Complex dir = b - a;
  auto side = [&](Complex z) { return dot(z - mid, dir); };
  std::vector<Complex> out;
  if (poly.empty()) return out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Complex p = poly[i];
    const Complex q = poly[(i + 1) % poly.size()];
    const double sp = side(p), sq = side(q);
    if (sp <= 0.0) out.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex u, Complex v) {
    return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag());
  });
  if (pts.size() < 3) return pts;
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline bool strictly_inside_hull(const std::vector<Complex>& hull, Complex z, double tol) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Complex p = hull[i], q = hull[(i + 1) % hull.size()];
    if (cross(q - p, z - p) <= tol * std::abs(q - p)) return false;
  }
  return true;
}

// Splits a closed polygon into runs of edges for which `keep(p, q)` holds.
template <class Keep>
std::vector<std::vector<Complex>> edge_runs(const std::vector<Complex>& poly, Keep keep,
                                            bool& whole_loop) {
  std::vector<std::vector<Complex>> runs;
  const std::size_t n = poly.size();
  whole_loop = false;
  if (n < 2) return runs;
  std::vector<bool> kept(n);
  std::size_t n_kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kept[i] = keep(poly[i], poly[(i + 1) % n]);
    n_kept += kept[i] ? 1 : 0;
  }
  if (n_kept == n) {
    whole_loop = true;
    std::vector<Complex> loop(poly);
    loop.push_back(poly.front());
    runs.push_back(std::move(loop));
    return runs;
  }
  if (n_kept == 0) return runs;
  std::size_t start = 0;
  while (kept[start]) ++start;  // an edge that is dropped
  std::vector<Complex> cur;
  for (std::size_t s = 1; s <= n; ++s) {
    const std::size_t i = (start + s) % n;
    if (kept[i]) {
      if (cur.empty()) cur.push_back(poly[i]);
      cur.push_back(poly[(i + 1) % n]);
    } else if (!cur.empty()) {
      runs.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) runs.push_back(std::move(cur));
  return runs;
}

inline std::vector<Complex> circle_polygon(Complex c, double r, std::size_t samples) {
  std::vector<Complex> out;
  out.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
    out.push_back(c + std::polar(r, phi));
  }
  return out;
}

}  // namespace detail

inline bool point_in_polygon(std::span<const Complex> poly, Complex z) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Complex a = poly[i], b = poly[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

/// Voronoi cells of the finite punctures by half-plane intersection, clipped
/// to a square. Polylines hold the cell boundary minus the clip-box edges.
inline std::vector<CellBoundaryPath> voronoi_cells(const PunctureSet& ps,
                                                   const VoronoiOptions& opts = {}) {
  const double w = opts.half_width > 0.0 ? opts.half_width : ps.rho_max();
  const std::vector<Complex> box{{-w, -w}, {w, -w}, {w, w}, {-w, w}};
  const auto fin = ps.finite();
  const auto hull = detail::convex_hull({fin.begin(), fin.end()});
  const double tol = 1e-12 * w;
  auto on_box = [&](Complex p) {
    return std::abs(std::abs(p.real()) - w) <= tol || std::abs(std::abs(p.imag()) - w) <= tol;
  };
  auto same_box_side = [&](Complex p, Complex q) {
    return (std::abs(p.real() - w) <= tol && std::abs(q.real() - w) <= tol) ||
           (std::abs(p.real() + w) <= tol && std::abs(q.real() + w) <= tol) ||
           (std::abs(p.imag() - w) <= tol && std::abs(q.imag() - w) <= tol) ||
           (std::abs(p.imag() + w) <= tol && std::abs(q.imag() + w) <= tol);
  };

  std::vector<CellBoundaryPath> cells;
  for (std::size_t j = 0; j < fin.size(); ++j) {
    std::vector<Complex> poly = box;
    for (std::size_t k = 0; k < fin.size(); ++k)
      if (k != j) poly = detail::clip_bisector(poly, fin[j], fin[k]);
    CellBoundaryPath cell;
    cell.nucleus_index = j;
    cell.nucleus = fin[j];
    cell.unbounded = !detail::strictly_inside_hull(hull, fin[j], 1e-12);
    bool whole = false;
    cell.polylines =
        detail::edge_runs(poly, [&](Complex p, Complex q) { return !same_box_side(p, q); }, whole);
    cell.closed = whole && std::none_of(poly.begin(), poly.end(), on_box);
    cell.polygon = std::move(poly);
    cells.push_back(std::move(cell));
  }
  return cells;
}

/// Voronoi cells for the modified distance delta~. The cell of a != 0 is the
/// Apollonian disk |z - 4a/3| <= 2|a|/3 cut by the bisectors with the other
/// nonzero punctures. The cell of 0 is unbounded and is emitted as the
/// Apollonian arcs of the other cells.
inline std::vector<CellBoundaryPath> modified_voronoi_cells(const PunctureSet& ps,
                                                            const VoronoiOptions& opts = {}) {
  const auto fin = ps.finite();
  if (fin.empty() || std::abs(fin[0]) > kDefaultEqTolerance)
    throw Error(ErrorCode::MissingOriginPuncture, "modified Voronoi needs 0 in A");
  std::vector<CellBoundaryPath> cells(fin.size());
  cells[0].nucleus_index = 0;
  cells[0].nucleus = 0.0;
  cells[0].unbounded = true;
  cells[0].closed = false;
  for (std::size_t j = 1; j < fin.size(); ++j) {
    const Complex a = fin[j];
    const Complex c = 4.0 * a / 3.0;
    const double r = 2.0 * std::abs(a) / 3.0;
    std::vector<Complex> poly = detail::circle_polygon(c, r, opts.arc_samples);
    for (std::size_t k = 1; k < fin.size(); ++k)
      if (k != j) poly = detail::clip_bisector(poly, a, fin[k]);
    auto& cell = cells[j];
    cell.nucleus_index = j;
    cell.nucleus = a;
    cell.unbounded = false;
    cell.closed = true;
    std::vector<Complex> loop(poly);
    if (!loop.empty()) loop.push_back(loop.front());
    cell.polylines.push_back(std::move(loop));

    const double tol = 1e-9 * r;
    auto on_circle = [&](Complex p, Complex q) {
      return std::abs(std::abs(p - c) - r) <= tol && std::abs(std::abs(q - c) - r) <= tol;
    };
    bool whole = false;
    for (auto& run : detail::edge_runs(poly, on_circle, whole)) cells[0].polylines.push_back(run);
    cell.polygon = std::move(poly);
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Beardon-Pommerenke quantities

struct BpConstants {
  static inline const double c1 = 4.0 + std::log(3.0 + 2.0 * std::numbers::sqrt2);
  static inline const double c2 = 1.0 / (2.0 * std::numbers::sqrt2);
  static inline const double c3 = c1 + std::numbers::pi / 4.0;
};

/// c = (1/2) log(1 + 1/(4e(1+e))).
inline const double kBetaShift =
    0.5 * std::log(1.0 + 1.0 / (4.0 * std::numbers::e * (1.0 + std::numbers::e)));

/// beta(z) = min |log |(z-a)/(b-a)|| over nearest punctures a and finite b != a.
inline double beta(std::span<const Complex> finite, Complex z) {
  const double d = delta(finite, z);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < finite.size(); ++i) {
    const double da = std::abs(z - finite[i]);
    if (da > d * (1.0 + 1e-9)) continue;
    for (std::size_t k = 0; k < finite.size(); ++k) {
      if (k == i) continue;
      best = std::min(best, std::abs(std::log(da / std::abs(finite[k] - finite[i]))));
    }
  }
  return best;
}

inline double beta(const PunctureSet& ps, Complex z) {
  require_not_puncture(ps, z);
  return beta(ps.finite(), z);
}

/// Lower and upper bounds for the hyperbolic density lambda_X(z).
inline std::pair<double, double> bp_density_bounds(std::span<const Complex> finite, Complex z) {
  const double d = delta(finite, z);
  const double denom = d * (BpConstants::c1 + beta(finite, z));
  return {BpConstants::c2 / denom, BpConstants::c3 / denom};
}

inline std::pair<double, double> bp_density_bounds(const PunctureSet& ps, Complex z) {
  require_not_puncture(ps, z);
  return bp_density_bounds(ps.finite(), z);
}

/// max{Q/2 + c, log(1+2e)}: bound for beta on the region W.
inline double beta_w_bound_from_q(double q) {
  return std::max(q / 2.0 + kBetaShift, std::log(1.0 + 2.0 * std::numbers::e));
}

inline double beta_w_bound(const PunctureSet& ps) {
  const auto pts = ps.points();
  return beta_w_bound_from_q(q_invariant(pts).value);
}

struct BracketCheck {
  std::string name;
  double lhs = 0.0;
  double value = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// Evaluates the three chains bounding rho_n/rho_min, rho_min and rho_n by mQ.
inline std::vector<BracketCheck> rho_brackets(const PunctureSet& ps, double rel_tol = 1e-12) {
  if (!ps.contains_one()) throw Error(ErrorCode::NotNormalized, "rho brackets need 0, 1, inf in A");
  const auto pts = ps.points();
  const double mq = m_q(pts);
  auto check = [&](std::string name, double lhs, double value, double rhs) {
    const double slack = rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return BracketCheck{std::move(name), lhs, value, rhs,
                        lhs <= value + slack && value <= rhs + slack};
  };
  const double rn = ps.rho_max();
  const double rmin = ps.rho_min();
  return {
      check("rho_n/rho_min", 0.5 * std::exp(0.5 * mq + 2.0), rn / rmin, 2.0 * std::exp(mq + 2.0)),
      check("rho_min", 0.5 * std::exp(-mq - 1.0), rmin, 1.0 / std::numbers::e),
      check("rho_n", std::numbers::e, rn, std::exp(mq + 1.0)),
  };
}

}  // namespace psphere
