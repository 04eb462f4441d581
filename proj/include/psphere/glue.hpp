// The glued distance d_X: per-cell metrics D_j on the closed cells E_j, a
// base distance mu on the closure of W, and the infimum over crossing points
// on the boundary circles. Also the bi-Lipschitz constants of each flavor.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psphere/base_metrics.hpp"
#include "psphere/geometry.hpp"
#include "psphere/invariants.hpp"
#include "psphere/mesh.hpp"
#include "psphere/ring_metrics.hpp"

namespace psphere {

enum class Flavor { Euclid, JHat, QHat };

inline const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::Euclid: return "euclid";
    case Flavor::JHat: return "jhat";
    case Flavor::QHat: return "qhat";
  }
  return "?";
}

inline std::optional<Flavor> parse_flavor(const std::string& s) {
  if (s == "euclid") return Flavor::Euclid;
  if (s == "jhat") return Flavor::JHat;
  if (s == "qhat") return Flavor::QHat;
  return std::nullopt;
}

struct GlueOptions {
  /// Crossing angles tried per circle before refinement.
  std::size_t m_glue = 128;
  /// Golden-section iterations per refinement.
  std::size_t refine_iters = 40;
  /// Lowest grid minima refined on a single circle.
  std::size_t refine_starts = 3;
  /// Used by the QHat flavor; its crossing points are the mesh circle nodes.
  MeshOptions mesh;
};

namespace detail {

struct Minimum {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

template <class F>
Minimum golden_min(F&& f, double lo, double hi, std::size_t iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  Minimum best = fc < fd ? Minimum{c, fc} : Minimum{d, fd};
  for (std::size_t i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

inline double grid_angle(std::size_t k, std::size_t m) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
}

}  // namespace detail

class GluedMetric {
 public:
  GluedMetric(PunctureSet ps, Flavor flavor, GlueOptions opts = {})
      : ps_(std::move(ps)), flavor_(flavor), opts_(opts) {
    if (opts_.m_glue < 8) throw Error(ErrorCode::InvalidArgument, "m_glue must be at least 8");
    const std::size_t n = ps_.size();
    for (std::size_t j = 0; j < n; ++j) {
      const bool end_cell = j == 0 || j == ps_.outer();
      switch (flavor_) {
        case Flavor::Euclid:
          profiles_.push_back(profile_sin2());
          scales_.push_back(ps_.rho(j));
          break;
        case Flavor::JHat:
          profiles_.push_back(end_cell ? profile_log4() : profile_log2());
          scales_.push_back(1.0);
          break;
        case Flavor::QHat:
          // The modified distance is theta on interior circles and 2 theta on
          // the origin and outer circles.
          profiles_.push_back(profile_linear_2pi());
          scales_.push_back(end_cell ? std::numbers::pi : std::numbers::pi / 2.0);
          break;
      }
    }
    if (flavor_ == Flavor::QHat)
      mesh_ = std::make_shared<const MeshGraph>(build_mesh(ps_, opts_.mesh));
  }

  /// Shares an existing mesh (QHat only).
  GluedMetric(PunctureSet ps, std::shared_ptr<const MeshGraph> mesh, GlueOptions opts = {})
      : GluedMetric(std::move(ps), Flavor::Euclid, opts) {
    if (!mesh || !mesh->puncture_set().same_as(ps_))
      throw Error(ErrorCode::MeshMismatch, "mesh was built for another puncture set");
    flavor_ = Flavor::QHat;
    for (std::size_t j = 0; j < ps_.size(); ++j) {
      profiles_[j] = profile_linear_2pi();
      scales_[j] = (j == 0 || j == ps_.outer()) ? std::numbers::pi : std::numbers::pi / 2.0;
    }
    opts_.mesh.h = mesh->h();
    opts_.mesh.m = mesh->m();
    mesh_ = std::move(mesh);
  }

  const PunctureSet& puncture_set() const { return ps_; }
  Flavor flavor() const { return flavor_; }
  const GlueOptions& options() const { return opts_; }
  const RingProfile& profile(std::size_t j) const { return profiles_.at(j); }
  double scale(std::size_t j) const { return scales_.at(j); }
  std::shared_ptr<const MeshGraph> mesh() const { return mesh_; }

  /// Base distance on the closure of W.
  double mu(Complex z1, Complex z2) const {
    switch (flavor_) {
      case Flavor::Euclid: return euclid(z1, z2);
      case Flavor::JHat: return j_hat(ps_, z1, z2);
      case Flavor::QHat: return q_hat(ps_, *mesh_, z1, z2);
    }
    return 0.0;
  }

  /// Rescaled D^f on the closed cell E_j.
  double cell_metric(std::size_t j, Complex z1, Complex z2) const {
    if (j > ps_.outer()) throw Error(ErrorCode::InvalidArgument, "cell index out of range");
    for (Complex z : {z1, z2}) {
      require_not_puncture(ps_, z);
      if (!in_closed_cell(ps_, j, z)) throw Error(ErrorCode::NotInCell, "point outside E_j");
    }
    return cell_metric_unchecked(j, z1, z2);
  }

  /// Point of the circle dE_j at angle phi.
  Complex circle_point(std::size_t j, double phi) const {
    return ps_.center(j) + std::polar(ps_.rho(j), phi);
  }

  /// S_j f_j(theta) for two points of dE_j.
  double circle_value(std::size_t j, Complex z1, Complex z2) const {
    const Complex c = ps_.center(j);
    return scales_[j] * profiles_[j](angle_between(z1 - c, z2 - c));
  }

  double distance(Complex z1, Complex z2) const {
    require_not_puncture(ps_, z1);
    require_not_puncture(ps_, z2);
    if (z1 == z2) return 0.0;
    // A fixed argument order makes the value exactly symmetric.
    if (z2.real() < z1.real() || (z2.real() == z1.real() && z2.imag() < z1.imag()))
      std::swap(z1, z2);
    const Region r1 = classify(ps_, z1), r2 = classify(ps_, z2);
    double best = std::numeric_limits<double>::infinity();
    for (const Role a : roles(r1)) {
      for (const Role b : roles(r2)) best = std::min(best, evaluate(a, z1, b, z2));
    }
    return best;
  }

  /// Largest |mu - S_j f_j(theta)| over sampled pairs on every circle.
  double circle_mismatch(std::size_t samples = 16) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < ps_.size(); ++j) {
      for (std::size_t k = 0; k < samples; ++k) {
        const Complex z1 = circle_point(j, detail::grid_angle(k, samples));
        const Complex z2 = circle_point(j, detail::grid_angle(3 * k + 1, 2 * samples + 1));
        worst = std::max(worst, std::abs(mu(z1, z2) - circle_value(j, z1, z2)));
      }
    }
    return worst;
  }

 private:
  // Cell index, or npos for the region W.
  struct Role {
    std::size_t cell;
  };
  static constexpr std::size_t kWild = static_cast<std::size_t>(-1);

  static std::vector<Role> roles(const Region& r) {
    switch (r.kind) {
      case Region::Kind::Cell: return {Role{r.index}};
      case Region::Kind::Boundary: return {Role{r.index}, Role{kWild}};
      case Region::Kind::Wild: return {Role{kWild}};
    }
    return {};
  }

  // The boundary tolerance lets |u| exceed 1/e by a hair; project back.
  static Complex to_ring(Complex u) {
    const double r = std::abs(u);
    return r > kRingRadius ? u * (kRingRadius / r) : u;
  }

  double cell_metric_unchecked(std::size_t j, Complex z1, Complex z2) const {
    if (z1 == z2) return 0.0;
    Complex u1, u2;
    if (j == ps_.outer()) {
      u1 = ps_.rho_tilde(j) / z1;
      u2 = ps_.rho_tilde(j) / z2;
    } else {
      u1 = (z1 - ps_.finite(j)) / ps_.rho_tilde(j);
      u2 = (z2 - ps_.finite(j)) / ps_.rho_tilde(j);
    }
    return scales_[j] * d_f(profiles_[j], to_ring(u1), to_ring(u2));
  }

  double evaluate(Role a, Complex z1, Role b, Complex z2) const {
    if (a.cell == kWild && b.cell == kWild) return mu(z1, z2);
    if (a.cell == b.cell) return cell_metric_unchecked(a.cell, z1, z2);
    if (flavor_ == Flavor::QHat) return evaluate_on_mesh(a, z1, b, z2);
    if (b.cell == kWild) return through_circle(a.cell, z1, z2);
    if (a.cell == kWild) return through_circle(b.cell, z2, z1);
    return through_two_circles(a.cell, z1, b.cell, z2);
  }

  // inf over zeta in dE_j of D_j(x, zeta) + mu(zeta, y).
  double through_circle(std::size_t j, Complex x, Complex y) const {
    auto g = [&](double phi) {
      const Complex zeta = circle_point(j, phi);
      return cell_metric_unchecked(j, x, zeta) + mu(zeta, y);
    };
    const std::size_t m = opts_.m_glue;
    std::vector<double> v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = g(detail::grid_angle(k, m));
    double best = *std::min_element(v.begin(), v.end());

    std::vector<std::size_t> minima;
    for (std::size_t k = 0; k < m; ++k)
      if (v[k] <= v[(k + m - 1) % m] && v[k] <= v[(k + 1) % m]) minima.push_back(k);
    std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const double step = detail::grid_angle(1, m);
    for (std::size_t s = 0; s < std::min(minima.size(), opts_.refine_starts); ++s) {
      const double phi = detail::grid_angle(minima[s], m);
      best = std::min(best, detail::golden_min(g, phi - step, phi + step, opts_.refine_iters).value);
    }
    return best;
  }

  // inf over zeta1 in dE_j, zeta2 in dE_k of D_j(x, zeta1) + mu(zeta1, zeta2) + D_k(zeta2, y).
  double through_two_circles(std::size_t j, Complex x, std::size_t k, Complex y) const {
    const std::size_t m = opts_.m_glue;
    std::vector<Complex> p1(m), p2(m);
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      p1[i] = circle_point(j, detail::grid_angle(i, m));
      p2[i] = circle_point(k, detail::grid_angle(i, m));
      a[i] = cell_metric_unchecked(j, x, p1[i]);
      b[i] = cell_metric_unchecked(k, p2[i], y);
    }
    // Row minima over psi; each local minimum in phi seeds a nested refinement.
    std::vector<double> row(m, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> arg(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < m; ++l) {
        const double v = a[i] + mu(p1[i], p2[l]) + b[l];
        if (v < row[i]) {
          row[i] = v;
          arg[i] = l;
        }
      }
    }
    double best = *std::min_element(row.begin(), row.end());
    if (opts_.refine_iters == 0) return best;

    const double step = detail::grid_angle(1, m);
    // inf over psi for a fixed phi: grid scan, then golden section around the grid minimum.
    auto inner = [&](double phi) {
      const Complex z1 = circle_point(j, phi);
      const double d1 = cell_metric_unchecked(j, x, z1);
      std::size_t bl = 0;
      double bv = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < m; ++l) {
        const double v = mu(z1, p2[l]) + b[l];
        if (v < bv) {
          bv = v;
          bl = l;
        }
      }
      auto tail = [&](double psi) {
        const Complex z2 = circle_point(k, psi);
        return mu(z1, z2) + cell_metric_unchecked(k, z2, y);
      };
      const double psi = detail::grid_angle(bl, m);
      return d1 + std::min(bv, detail::golden_min(tail, psi - step, psi + step, opts_.refine_iters).value);
    };
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < m; ++i)
      if (row[i] <= row[(i + m - 1) % m] && row[i] <= row[(i + 1) % m]) minima.push_back(i);
    std::sort(minima.begin(), minima.end(), [&](std::size_t p, std::size_t q) { return row[p] < row[q]; });
    for (std::size_t s = 0; s < std::min(minima.size(), opts_.refine_starts); ++s) {
      const double phi = detail::grid_angle(minima[s], m);
      best = std::min(best, detail::golden_min(inner, phi - step, phi + step, opts_.refine_iters).value);
    }
    return best;
  }

  // Crossing points restricted to the mesh circle nodes; mu is the mesh distance.
  double evaluate_on_mesh(Role a, Complex z1, Role b, Complex z2) const {
    auto circle_costs = [&](std::size_t j, Complex z) {
      NodeCosts out;
      for (std::size_t k = 0; k < mesh_->m(); ++k) {
        const std::uint32_t i = mesh_->circle_node(j, k);
        out.emplace_back(i, cell_metric_unchecked(j, z, mesh_->node(i)));
      }
      return out;
    };
    const NodeCosts from = a.cell == kWild ? mesh_entry(*mesh_, z1) : circle_costs(a.cell, z1);
    const NodeCosts to = b.cell == kWild ? mesh_entry(*mesh_, z2) : circle_costs(b.cell, z2);
    return mesh_->shortest(from, to);
  }

  PunctureSet ps_;
  Flavor flavor_;
  GlueOptions opts_;
  std::vector<RingProfile> profiles_;
  std::vector<double> scales_;
  std::shared_ptr<const MeshGraph> mesh_;
};

inline double glued_distance(const GluedMetric& gm, Complex z1, Complex z2) {
  return gm.distance(z1, z2);
}

// ---------------------------------------------------------------------------
// Constants

inline constexpr double kM0 = 24.0;
/// Gamma(1/4)^4 / (4 pi^2), kept at the printed precision.
inline constexpr double kC0 = 4.37688;
inline constexpr double kK0 = 0.846666;

struct FlavorConstants {
  Flavor flavor = Flavor::Euclid;
  double l1 = 0.0, l2 = 0.0;
  double s_min = 0.0, s_max = 0.0;
  double m0 = kM0;
  /// Unset for JHat, whose constants are only known to exist.
  std::optional<double> k1, k2, b1, b2;
  /// QHat: lower density constant with C2 (used) and with C3 (as printed).
  std::optional<double> k, k_printed;
  double c0 = kC0, k0 = kK0;
  double c1 = BpConstants::c1, c2 = BpConstants::c2, c3 = BpConstants::c3;
  double c = kBetaShift;
  double q = 0.0;
  std::string orientation = "B1*h_X <= d_X <= B2*h_X";

  bool explicit_bounds() const { return b1.has_value() && b2.has_value(); }
};

inline double euclid_k2(double rho_n, double rho_min) {
  const double first =
      2.0 * rho_n * std::exp(-kK0) * (kC0 - kK0 - 1.0 + std::log(rho_n / rho_min));
  const double second = 6.0 * rho_n * (kC0 + std::log(3.0 * rho_n));
  return std::max(first, second);
}

/// QHat constants depend on the puncture set only through Q(A).
inline FlavorConstants qhat_constants_from_q(double q) {
  FlavorConstants fc;
  fc.flavor = Flavor::QHat;
  fc.q = q;
  fc.l1 = fc.l2 = 2.0 / std::numbers::pi;
  fc.s_min = std::numbers::pi / 2.0;
  fc.s_max = std::numbers::pi;
  const double beta_w = beta_w_bound_from_q(q);
  fc.k = BpConstants::c2 / (BpConstants::c1 + beta_w);
  fc.k_printed = BpConstants::c3 / (BpConstants::c1 + beta_w);
  fc.k1 = 1.0;
  fc.k2 = std::max(1.0 / *fc.k, 2.0 * kM0);
  fc.b1 = std::min(2.0 * fc.s_min * fc.l1, *fc.k1);
  fc.b2 = std::max(fc.s_max * kM0 * fc.l2, *fc.k2);
  return fc;
}

inline FlavorConstants flavor_constants(const GluedMetric& gm) {
  const PunctureSet& ps = gm.puncture_set();
  const auto pts = ps.points();
  const double q = q_invariant(pts).value;
  if (gm.flavor() == Flavor::QHat) return qhat_constants_from_q(q);

  FlavorConstants fc;
  fc.flavor = gm.flavor();
  fc.q = q;
  fc.l1 = std::numeric_limits<double>::infinity();
  fc.l2 = 0.0;
  fc.s_min = std::numeric_limits<double>::infinity();
  fc.s_max = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    fc.l1 = std::min(fc.l1, gm.profile(j).l1);
    fc.l2 = std::max(fc.l2, gm.profile(j).l2);
    fc.s_min = std::min(fc.s_min, gm.scale(j));
    fc.s_max = std::max(fc.s_max, gm.scale(j));
  }
  if (gm.flavor() == Flavor::Euclid) {
    fc.k1 = 2.0 * ps.rho_min() / std::numbers::pi;
    fc.k2 = euclid_k2(ps.rho_max(), ps.rho_min());
    fc.b1 = std::min(2.0 * fc.s_min * fc.l1, *fc.k1);
    fc.b2 = std::max(fc.s_max * kM0 * fc.l2, *fc.k2);
  }
  return fc;
}

// ---------------------------------------------------------------------------
// Sampling and cross-flavor comparison

enum class SampleRegion { Cell, Wild };

/// A random point of cell j (log-uniform depth) or of W (rejection sampling).
template <class Rng>
Complex sample_in_cell(const PunctureSet& ps, std::size_t j, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = std::exp(std::log(1e-3) * u(rng));  // in [1e-3, 1]
  const double phi = 2.0 * std::numbers::pi * u(rng);
  if (j == ps.outer()) return std::polar(ps.rho(j) / t, phi);
  return ps.finite(j) + std::polar(ps.rho(j) * t, phi);
}

template <class Rng>
Complex sample_in_w(const PunctureSet& ps, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double R = ps.rho_max();
  for (;;) {
    const Complex z(R * u(rng), R * u(rng));
    if (classify(ps, z).kind == Region::Kind::Wild) return z;
  }
}

/// Region chosen uniformly among the n cells and W, then a point inside it.
template <class Rng>
Complex sample_mixed(const PunctureSet& ps, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, ps.size());
  const std::size_t r = pick(rng);
  return r == ps.size() ? sample_in_w(ps, rng) : sample_in_cell(ps, r, rng);
}

struct PairSample {
  Complex z1, z2;
  double d_a = 0.0, d_b = 0.0, ratio = 0.0;
};

struct EquivalenceReport {
  std::vector<PairSample> pairs;
  double min_ratio = 0.0, max_ratio = 0.0, median_ratio = 0.0;
  /// (B2_a/B1_a)(B2_b/B1_b) when both flavors have explicit constants.
  std::optional<double> bound;
  bool within_bound = true;
};

inline EquivalenceReport equivalence_report(const GluedMetric& a, const GluedMetric& b,
                                            std::size_t n_pairs, std::uint64_t seed) {
  if (!a.puncture_set().same_as(b.puncture_set()))
    throw Error(ErrorCode::MismatchedPunctureSets, "flavors use different puncture sets");
  const PunctureSet& ps = a.puncture_set();
  std::mt19937_64 rng(seed);
  EquivalenceReport rep;
  std::vector<double> ratios;
  while (rep.pairs.size() < n_pairs) {
    PairSample p;
    p.z1 = sample_mixed(ps, rng);
    p.z2 = sample_mixed(ps, rng);
    if (p.z1 == p.z2) continue;
    p.d_a = a.distance(p.z1, p.z2);
    p.d_b = b.distance(p.z1, p.z2);
    p.ratio = p.d_a / p.d_b;
    ratios.push_back(p.ratio);
    rep.pairs.push_back(p);
  }
  if (ratios.empty()) return rep;
  std::vector<double> sorted(ratios);
  std::sort(sorted.begin(), sorted.end());
  rep.min_ratio = sorted.front();
  rep.max_ratio = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  rep.median_ratio = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  const FlavorConstants ca = flavor_constants(a), cb = flavor_constants(b);
  if (ca.explicit_bounds() && cb.explicit_bounds()) {
    rep.bound = (*ca.b2 / *ca.b1) * (*cb.b2 / *cb.b1);
    rep.within_bound = rep.max_ratio / rep.min_ratio <= *rep.bound;
  }
  return rep;
}

}  // namespace psphere
