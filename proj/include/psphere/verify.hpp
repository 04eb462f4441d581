// Randomized property suites over every module. Each property reports the
// number of checked cases, the worst deviation seen and a counterexample.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psphere/psphere.hpp"

namespace psphere {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  double worst = 0.0;
  std::string counterexample;
};

namespace testing_support {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double box = 10.0) {
  std::uniform_real_distribution<double> u(-box, box);
  return {u(rng), u(rng)};
}

/// n distinct points, the last one replaced by infinity with probability p_inf.
inline std::vector<ExtendedPoint> random_points(Rng& rng, std::size_t n, double p_inf = 0.3,
                                                double box = 10.0) {
  std::bernoulli_distribution with_inf(p_inf);
  std::vector<ExtendedPoint> out;
  const bool has_inf = with_inf(rng);
  while (out.size() < n - (has_inf ? 1 : 0)) {
    const Complex z = random_complex(rng, box);
    bool ok = true;
    for (const auto& p : out) ok = ok && std::abs(p.value() - z) > 1e-3;
    if (ok) out.emplace_back(z);
  }
  if (has_inf) out.push_back(inf());
  return out;
}

inline MobiusTransform random_mobius(Rng& rng) {
  for (;;) {
    const Complex a = random_complex(rng, 2.0), b = random_complex(rng, 2.0),
                  c = random_complex(rng, 2.0), d = random_complex(rng, 2.0);
    if (std::abs(a * d - b * c) > 0.1) return {a, b, c, d};
  }
}

/// Random set containing 0, 1 and infinity plus n - 3 other points.
inline PunctureSet random_normalized(Rng& rng, std::size_t n, double box = 6.0) {
  std::vector<ExtendedPoint> pts{0.0, 1.0};
  while (pts.size() < n - 1) {
    const Complex z = random_complex(rng, box);
    bool ok = true;
    for (const auto& p : pts) ok = ok && std::abs(p.value() - z) > 0.05;
    if (ok) pts.emplace_back(z);
  }
  pts.push_back(inf());
  return PunctureSet::from_points(pts);
}

inline double rel_diff(Complex x, Complex y) {
  return std::abs(x - y) / std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

inline std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << ',' << z.imag();
  return os.str();
}

inline std::string fmt(const std::vector<ExtendedPoint>& pts) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << pts[i];
  os << ']';
  return os.str();
}

// Accumulates one property; `record` returns the deviation check.
class Tally {
 public:
  Tally(std::string suite, std::string name, double tol) : tol_(tol) {
    r_.suite = std::move(suite);
    r_.name = std::move(name);
  }
  void record(double deviation, const std::function<std::string()>& describe) {
    ++r_.checked;
    if (deviation > r_.worst || std::isnan(deviation)) r_.worst = deviation;
    if (!(deviation <= tol_) && r_.pass) {
      r_.pass = false;
      r_.counterexample = describe();
    }
  }
  void fail(const std::string& why) {
    r_.pass = false;
    if (r_.counterexample.empty()) r_.counterexample = why;
  }
  PropertyResult done() const { return r_; }

 private:
  PropertyResult r_;
  double tol_;
};

}  // namespace testing_support

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> suite_crossratio(std::size_t samples, std::uint64_t seed) {
  using namespace testing_support;
  Rng rng(seed);
  Tally sym("crossratio", "symmetry", 1e-10), comp("crossratio", "complement", 1e-10),
      mob("crossratio", "mobius_invariance", 1e-9), trip("crossratio", "triple_roundtrip", 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    auto q = random_points(rng, 4);
    std::shuffle(q.begin(), q.end(), rng);
    const Complex c = cross_ratio(q[0], q[1], q[2], q[3]);
    const double d = std::max({rel_diff(c, cross_ratio(q[1], q[0], q[3], q[2])),
                               rel_diff(c, cross_ratio(q[2], q[3], q[0], q[1])),
                               rel_diff(c, cross_ratio(q[3], q[2], q[1], q[0]))});
    sym.record(d, [&] { return fmt(q); });
    comp.record(rel_diff(cross_ratio(q[1], q[0], q[2], q[3]), 1.0 - c), [&] { return fmt(q); });

    const MobiusTransform t = random_mobius(rng);
    const auto tq = apply_all(t, q);
    try {
      mob.record(rel_diff(c, cross_ratio(tq[0], tq[1], tq[2], tq[3])), [&] { return fmt(q); });
    } catch (const Error&) {
      // T collapsed two images within the equality tolerance; skip.
    }

    const MobiusTransform n = mobius_from_triple(q[0], q[1], q[2]);
    const ExtendedPoint i0 = n(q[0]), i1 = n(q[1]), i2 = n(q[2]);
    const bool ok = approx_equal(i0, 0.0) && approx_equal(i1, 1.0) && i2.is_infinite();
    trip.record(ok ? 0.0 : 1.0, [&] { return fmt(q); });
  }
  return {sym.done(), comp.done(), mob.done(), trip.done()};
}

inline std::vector<PropertyResult> suite_invariants(const std::vector<ExtendedPoint>& config,
                                                    std::size_t samples, std::uint64_t seed) {
  using namespace testing_support;
  Rng rng(seed);
  const std::size_t few = std::max<std::size_t>(1, samples / 10);
  Tally order("invariants", "q_between_0_and_mq", 1e-12), mob("invariants", "mobius_invariance", 1e-9),
      coll("invariants", "collinear_oracle", 1e-12), ann("invariants", "separating_annulus", 1e-10),
      sys("invariants", "systole_order", 0.0), mono("invariants", "example2_monotone", 0.0);
  std::uniform_int_distribution<std::size_t> card(4, 8);

  auto check_order = [&](const std::vector<ExtendedPoint>& a) {
    const double q = q_invariant(a).value, mq = m_q(a);
    order.record(std::max(-q, q - mq), [&] { return fmt(a); });
  };
  check_order(config);
  for (std::size_t s = 0; s < few; ++s) {
    const auto a = random_points(rng, card(rng));
    check_order(a);
    const auto ta = apply_all(random_mobius(rng), a);
    try {
      const double q = q_invariant(a).value, tq = q_invariant(ta).value;
      const double mq = m_q(a), tmq = m_q(ta);
      mob.record(std::max(std::abs(q - tq) / std::max(1.0, q), std::abs(mq - tmq) / std::max(1.0, mq)),
                 [&] { return fmt(a); });
    } catch (const Error&) {
    }
  }

  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (std::size_t s = 0; s < few; ++s) {
    std::uniform_int_distribution<std::size_t> part(2, 4);
    const std::size_t k1 = part(rng), k2 = part(rng);
    std::vector<double> xs;
    while (xs.size() < k1 + k2) {
      const double x = u(rng);
      if (std::none_of(xs.begin(), xs.end(), [&](double y) { return std::abs(x - y) < 1e-3; }))
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    AdmissiblePartition p;
    for (std::size_t i = 0; i < xs.size(); ++i) (i < k1 ? p.part1 : p.part2).emplace_back(xs[i]);
    coll.record(std::abs(p_collinear(p) - partition_p(p)), [&] { return fmt(p.part1) + " | " + fmt(p.part2); });
  }

  // Separating annulus bounds both ways: partition first, then annulus first.
  for (std::size_t s = 0; s < few; ++s) {
    auto a = random_points(rng, card(rng), 0.0);
    AdmissiblePartition p;
    std::bernoulli_distribution side(0.5);
    for (auto& z : a) (side(rng) ? p.part1 : p.part2).push_back(z);
    if (p.part1.size() >= 2 && p.part2.size() >= 2) {
      const double pv = partition_p(p);
      if (auto r = separating_round_annulus(p))
        ann.record(pv - r->modulus(), [&] { return fmt(p.part1) + " | " + fmt(p.part2); });
    }
    std::uniform_real_distribution<double> rad(0.05, 1.0), ratio(1.5, 40.0), ang(0.0, 2 * std::numbers::pi);
    const Complex c = random_complex(rng, 3.0);
    const double r1 = rad(rng), r2 = r1 * ratio(rng);
    AdmissiblePartition q;
    for (int i = 0; i < 3; ++i) q.part1.emplace_back(c + std::polar(r1 * rad(rng), ang(rng)));
    for (int i = 0; i < 2; ++i) q.part2.emplace_back(c + std::polar(r2 * (1.0 + 3.0 * rad(rng)), ang(rng)));
    q.part2.push_back(inf());
    const auto [first, second] = annulus_p_lower_bound(std::log(r2 / r1));
    const double pv = partition_p(q);
    ann.record(std::max(first, second) - pv, [&] { return fmt(q.part1) + " | " + fmt(q.part2); });
  }

  for (std::size_t s = 0; s < few; ++s) {
    std::uniform_int_distribution<std::size_t> n(4, 10);
    const auto a = random_points(rng, n(rng));
    const SystoleBracket b = systole_bracket(a);
    sys.record(b.lower <= b.upper ? 0.0 : b.lower - b.upper, [&] { return fmt(a); });
  }

  double prev_q = std::numeric_limits<double>::infinity(), prev_mq = -1.0;
  for (int n = 3; n <= 12; ++n) {
    std::vector<ExtendedPoint> a;
    for (int k = 0; k <= n; ++k) a.emplace_back(static_cast<double>(k));
    const double q = q_invariant(a).value, mq = m_q(a);
    mono.record(q <= prev_q && mq >= prev_mq ? 0.0 : 1.0, [&] { return "n=" + std::to_string(n); });
    prev_q = q;
    prev_mq = mq;
  }
  return {order.done(), mob.done(), coll.done(), ann.done(), sys.done(), mono.done()};
}

inline std::vector<PropertyResult> suite_ringmetrics(std::size_t samples, std::uint64_t seed) {
  using namespace testing_support;
  std::vector<PropertyResult> out;
  for (const RingProfile& f : profile_catalog()) {
    Tally ax("ringmetrics", "profile_axioms_" + f.name, 0.0);
    const ProfileReport r = check_profile(f);
    ax.record(r.all_pass() ? 0.0 : 1.0, [&] { return f.name; });
    out.push_back(ax.done());
    if (f.triangle_guarantee()) {
      const TriangleReport t = triangle_search(f, TauRule::Max, samples, seed);
      Tally tri("ringmetrics", "triangle_" + f.name, 0.0);
      if (t.violations > 0)
        tri.fail(fmt(t.witness->z1) + " " + fmt(t.witness->z2) + " via " + fmt(t.witness->z));
      tri.record(0.0, [] { return std::string(); });
      out.push_back(tri.done());
    }
    const BoundsCheckReport b = d_f_bounds_check(f, samples, seed);
    Tally env("ringmetrics", "envelope_" + f.name, 0.0);
    env.record(static_cast<double>(b.envelope_violations), [&] { return f.name; });
    out.push_back(env.done());
  }

  // The min variant must break the triangle inequality somewhere.
  Tally neg("ringmetrics", "min_variant_counterexample", 0.0);
  const TriangleReport t = triangle_search(profile_sin2(), TauRule::Min, samples, seed);
  neg.record(t.violations > 0 ? 0.0 : 1.0, [] { return std::string("no violating triple found"); });
  out.push_back(neg.done());

  Rng rng(seed);
  Tally rot("ringmetrics", "rotation_invariance", 1e-12), sym("ringmetrics", "symmetry", 0.0);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  const RingProfile f = profile_sin2();
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex z1 = sample_ring_point(rng), z2 = sample_ring_point(rng);
    const Complex w = std::polar(1.0, ang(rng));
    const double d = d_f(f, z1, z2);
    rot.record(std::abs(d - d_f(f, w * z1, w * z2)), [&] { return fmt(z1) + " " + fmt(z2); });
    sym.record(std::abs(d - d_f(f, z2, z1)) + (d > 0.0 ? 0.0 : 1.0) + d_f(f, z1, z1),
               [&] { return fmt(z1) + " " + fmt(z2); });
  }
  out.push_back(rot.done());
  out.push_back(sym.done());
  return out;
}

inline std::vector<PropertyResult> suite_basemetrics(const PunctureSet& ps, std::size_t samples,
                                                     std::uint64_t seed) {
  using namespace testing_support;
  Rng rng(seed);
  Tally jr("basemetrics", "jhat_over_j_in_1_2", 1e-12), sc("basemetrics", "mo_scale_invariance", 1e-12),
      tri("basemetrics", "mo_triangle", 1e-12), sand("basemetrics", "delta_sandwich", 0.0),
      ends("basemetrics", "delta_tilde_end_cells", 1e-12),
      interior("basemetrics", "delta_tilde_interior_cells", 1e-12), bw("basemetrics", "beta_w_bound", 1e-9),
      aff("basemetrics", "beta_affine_invariance", 1e-10), vor("basemetrics", "voronoi_membership", 0.0),
      mvor("basemetrics", "modified_voronoi_membership", 0.0), rho("basemetrics", "rho_brackets", 0.0),
      eqmax("basemetrics", "eq_max_and_disjoint", 1e-12), qq("basemetrics", "q_le_qhat_le_2q", 1e-9);

  const double R = ps.rho_max();
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex z1 = sample_mixed(ps, rng), z2 = sample_mixed(ps, rng);
    if (z1 != z2) {
      const double ratio = j_hat(ps, z1, z2) / j_dist(ps, z1, z2);
      jr.record(std::max(1.0 - ratio, ratio - 2.0), [&] { return fmt(z1) + " " + fmt(z2); });
    }
    const Complex a = random_complex(rng, 5.0), b = random_complex(rng, 5.0);
    const Complex t = random_complex(rng, 3.0), c = random_complex(rng, 5.0);
    if (std::abs(t) > 1e-6) {
      sc.record(std::abs(mo_quasihyperbolic(t * a, t * b) - mo_quasihyperbolic(a, b)),
                [&] { return fmt(a) + " " + fmt(b) + " t=" + fmt(t); });
    }
    tri.record(mo_quasihyperbolic(a, b) - mo_quasihyperbolic(a, c) - mo_quasihyperbolic(c, b),
               [&] { return fmt(a) + " " + fmt(b) + " via " + fmt(c); });
    const double d = delta(ps, z1), dt = delta_tilde(ps, z1);
    sand.record(d / 2.0 <= dt && dt <= d ? 0.0 : 1.0, [&] { return fmt(z1); });
  }

  // delta~ on cells: |z|/2 on the origin and outer cells, |z - a_j| on the others.
  // The interior claim is probed first where it is weakest: the point of dE_j
  // facing the origin.
  for (std::size_t j = 0; j <= ps.outer(); ++j) {
    const bool end_cell = j == 0 || j == ps.outer();
    Tally& t = end_cell ? ends : interior;
    if (!end_cell) {
      const Complex a = ps.finite(j);
      const Complex z = a - ps.rho(j) * a / std::abs(a);
      t.record(std::abs(delta_tilde(ps, z) - std::abs(z - a)) / std::abs(z - a),
               [&] { return "cell " + std::to_string(j) + " z=" + fmt(z); });
    }
    for (std::size_t s = 0; s < std::max<std::size_t>(1, samples / 10); ++s) {
      const Complex z = sample_in_cell(ps, j, rng);
      const double expected = end_cell ? std::abs(z) / 2.0 : std::abs(z - ps.finite(j));
      t.record(std::abs(delta_tilde(ps, z) - expected) / expected,
               [&] { return "cell " + std::to_string(j) + " z=" + fmt(z); });
    }
  }

  const double bound = beta_w_bound(ps);
  std::uniform_real_distribution<double> u(-R, R);
  std::size_t probes = 0;
  while (probes < samples) {
    const Complex z(u(rng), u(rng));
    if (delta(ps, z) < 1e-9) continue;
    ++probes;
    if (classify(ps, z).kind == Region::Kind::Wild)
      bw.record(beta(ps, z) - bound, [&] { return fmt(z); });
    // Affine image of the puncture set.
    const Complex k = random_complex(rng, 3.0), l = random_complex(rng, 3.0);
    if (std::abs(k) > 1e-3) {
      std::vector<Complex> img;
      for (Complex a : ps.finite()) img.push_back(k * a + l);
      aff.record(std::abs(beta(img, k * z + l) - beta(ps, z)) / std::max(1.0, beta(ps, z)),
                 [&] { return fmt(z); });
    }
  }

  // Membership oracles: polygons against the pointwise argmin.
  {
    VoronoiOptions vo;
    vo.half_width = R;
    const auto plain = voronoi_cells(ps, vo);
    const auto modified = modified_voronoi_cells(ps, vo);
    for (std::size_t s = 0; s < samples; ++s) {
      const Complex z(u(rng), u(rng));
      if (delta(ps, z) < 1e-9) continue;
      const std::size_t owner = voronoi_owner(ps, z);
      // Points within a hair of a bisector may fall on either side.
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ps.finite().size(); ++k)
        if (k != owner) gap = std::min(gap, std::abs(z - ps.finite(k)) - std::abs(z - ps.finite(owner)));
      if (gap > 1e-9 * R) {
        const bool inside = point_in_polygon(plain[owner].polygon, z);
        vor.record(inside ? 0.0 : 1.0, [&] { return fmt(z); });
      }
      const std::size_t mowner = modified_voronoi_owner(ps, z);
      double mgap = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ps.finite().size(); ++k)
        if (k != mowner)
          mgap = std::min(mgap, delta_tilde_to(ps, k, z) - delta_tilde_to(ps, mowner, z));
      // The sampled Apollonian circle deviates from the true one by O(r / samples^2).
      if (mgap > 1e-3 * R) {
        bool inside;
        if (mowner == 0) {
          inside = true;
          for (std::size_t k = 1; k < modified.size(); ++k)
            inside = inside && !point_in_polygon(modified[k].polygon, z);
        } else {
          inside = point_in_polygon(modified[mowner].polygon, z);
        }
        mvor.record(inside ? 0.0 : 1.0, [&] { return fmt(z); });
      }
    }
  }

  if (ps.contains_one()) {
    for (const auto& b : rho_brackets(ps)) rho.record(b.ok ? 0.0 : 1.0, [&] { return b.name; });
  }
  for (std::size_t j = 0; j < ps.outer(); ++j) {
    eqmax.record(ps.rho(j) - std::exp(-2.0) * ps.rho_max(), [&] { return "rho_" + std::to_string(j); });
    eqmax.record(std::abs(ps.finite(j)) + ps.rho(j) - ps.rho_max(), [&] { return "E_" + std::to_string(j); });
    for (std::size_t k = j + 1; k < ps.outer(); ++k)
      eqmax.record(ps.rho(j) + ps.rho(k) - std::abs(ps.finite(j) - ps.finite(k)),
                   [&] { return "E_" + std::to_string(j) + " E_" + std::to_string(k); });
  }

  // Same node set and edge set; only the density differs.
  {
    MeshOptions mo;
    mo.h = ps.rho_min() / 8.0;
    mo.m = 64;
    const MeshGraph gt = build_mesh(ps, mo);
    mo.density = Density::Delta;
    const MeshGraph gd = build_mesh(ps, mo);
    for (std::size_t s = 0; s < std::max<std::size_t>(1, samples / 100); ++s) {
      const Complex z1 = sample_mixed(ps, rng), z2 = sample_mixed(ps, rng);
      if (z1 == z2) continue;
      const double qt = q_hat(ps, gt, z1, z2), qd = q_hat(ps, gd, z1, z2);
      qq.record(std::max(qd - qt, qt - 2.0 * qd) / std::max(1.0, qt), [&] { return fmt(z1) + " " + fmt(z2); });
    }
  }
  return {jr.done(), sc.done(), tri.done(), sand.done(), ends.done(), interior.done(), bw.done(), aff.done(),
          vor.done(), mvor.done(), rho.done(), eqmax.done(), qq.done()};
}

struct TriangleStudy {
  std::size_t triples = 0;
  std::size_t violations = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  /// max over sampled pairs of (value at m) - (value at 8m), refinement on.
  double tolerance_m = 0.0;
  double tolerance_2m = 0.0;
  std::string counterexample;
};

/// Triangle inequality of d_X on mixed-region triples, with the slack allowed
/// up to the measured crossing-point discretization error.
inline TriangleStudy glue_triangle_study(const GluedMetric& gm, std::size_t triples,
                                         std::uint64_t seed, std::size_t tolerance_pairs = 200) {
  using namespace testing_support;
  const PunctureSet& ps = gm.puncture_set();
  TriangleStudy st;
  Rng rng(seed);

  // Computed distances never undercut the infimum, so max(d_m - d_ref) bounds
  // the triangle slack of the metric as evaluated.
  GlueOptions grid_m = gm.options();
  GlueOptions grid_2m = grid_m;
  grid_2m.m_glue *= 2;
  GlueOptions ref = gm.options();
  ref.m_glue *= 8;
  if (gm.flavor() == Flavor::QHat) {
    // The crossing points are the mesh nodes; the tolerance is mesh-level.
    st.tolerance_m = st.tolerance_2m = 0.0;
  } else {
    const GluedMetric a(ps, gm.flavor(), grid_m), b(ps, gm.flavor(), grid_2m), r(ps, gm.flavor(), ref);
    for (std::size_t s = 0; s < tolerance_pairs; ++s) {
      const Complex z1 = sample_mixed(ps, rng), z2 = sample_mixed(ps, rng);
      if (z1 == z2) continue;
      const double dr = r.distance(z1, z2);
      st.tolerance_m = std::max(st.tolerance_m, a.distance(z1, z2) - dr);
      st.tolerance_2m = std::max(st.tolerance_2m, b.distance(z1, z2) - dr);
    }
  }
  for (std::size_t s = 0; s < triples; ++s) {
    const Complex x = sample_mixed(ps, rng), y = sample_mixed(ps, rng), z = sample_mixed(ps, rng);
    if (x == y || y == z || x == z) continue;
    ++st.triples;
    const double excess = gm.distance(x, y) - gm.distance(x, z) - gm.distance(z, y);
    st.worst_excess = std::max(st.worst_excess, excess);
    if (excess > st.tolerance_m + 1e-12) {
      if (st.violations == 0) st.counterexample = fmt(x) + " " + fmt(y) + " via " + fmt(z);
      ++st.violations;
    }
  }
  return st;
}

inline std::vector<PropertyResult> suite_glue(const GluedMetric& gm, std::size_t samples,
                                              std::uint64_t seed) {
  using namespace testing_support;
  const PunctureSet& ps = gm.puncture_set();
  Rng rng(seed);
  // Mesh chords undercut circle arcs by O(h^2), so q-hat agrees only to mesh accuracy.
  const double circle_tol = gm.flavor() == Flavor::QHat ? 1e-4 : 1e-10;
  Tally restr("glue", "region_restriction", 1e-10), bnd("glue", "boundary_agreement", circle_tol),
      mu("glue", "mu_matches_circle_profile", 1e-10), sym("glue", "symmetry_identity", 0.0),
      mono("glue", "monotone_in_m_glue", 1e-9), cons("glue", "constants_order", 0.0),
      tri("glue", "triangle", 0.0);
  const std::size_t pairs = gm.flavor() == Flavor::QHat ? std::max<std::size_t>(1, samples / 20) : samples;

  for (std::size_t s = 0; s < pairs; ++s) {
    // Same region: both in one cell, or both in W.
    std::uniform_int_distribution<std::size_t> pick(0, ps.size());
    const std::size_t r = pick(rng);
    Complex z1, z2;
    if (r == ps.size()) {
      z1 = sample_in_w(ps, rng);
      z2 = sample_in_w(ps, rng);
    } else {
      z1 = sample_in_cell(ps, r, rng);
      z2 = sample_in_cell(ps, r, rng);
    }
    const double d = gm.distance(z1, z2);
    const double expected = r == ps.size() ? gm.mu(z1, z2) : gm.cell_metric(r, z1, z2);
    restr.record(std::abs(d - expected), [&] { return fmt(z1) + " " + fmt(z2); });

    const Complex x = sample_mixed(ps, rng), y = sample_mixed(ps, rng);
    const double dxy = gm.distance(x, y), dyx = gm.distance(y, x);
    sym.record(std::abs(dxy - dyx) + (x != y && dxy <= 0.0 ? 1.0 : 0.0) + gm.distance(x, x),
               [&] { return fmt(x) + " " + fmt(y); });
  }

  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    for (std::size_t s = 0; s < std::max<std::size_t>(1, pairs / 10); ++s) {
      const Complex z1 = gm.circle_point(j, ang(rng)), z2 = gm.circle_point(j, ang(rng));
      const double cv = gm.circle_value(j, z1, z2);
      bnd.record(std::abs(gm.distance(z1, z2) - cv) / (gm.flavor() == Flavor::QHat ? std::max(1.0, cv) : 1.0),
                 [&] { return "circle " + std::to_string(j) + " " + fmt(z1) + " " + fmt(z2); });
    }
  }
  const double mismatch = gm.circle_mismatch();
  mu.record(mismatch, [&] { return "max |mu - S f(theta)| = " + std::to_string(mismatch); });

  if (gm.flavor() != Flavor::QHat) {
    GlueOptions twice = gm.options();
    twice.m_glue *= 2;
    const GluedMetric fine(ps, gm.flavor(), twice);
    for (std::size_t s = 0; s < std::max<std::size_t>(1, samples / 10); ++s) {
      const Complex z1 = sample_mixed(ps, rng), z2 = sample_mixed(ps, rng);
      if (z1 == z2) continue;
      const double coarse = gm.distance(z1, z2);
      mono.record((fine.distance(z1, z2) - coarse) / std::max(1.0, coarse), [&] { return fmt(z1) + " " + fmt(z2); });
    }
  }

  const FlavorConstants fc = flavor_constants(gm);
  if (fc.explicit_bounds())
    cons.record(*fc.b1 <= *fc.b2 && *fc.b1 > 0.0 ? 0.0 : 1.0, [] { return std::string("B1 > B2"); });

  const TriangleStudy st = glue_triangle_study(gm, pairs, seed + 1, std::max<std::size_t>(1, pairs / 10));
  tri.record(static_cast<double>(st.violations), [&] { return st.counterexample; });
  return {restr.done(), bnd.done(), mu.done(), sym.done(), mono.done(), cons.done(), tri.done()};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"crossratio", "invariants", "ringmetrics",
                                              "basemetrics", "glue", "all"};
  return names;
}

}  // namespace psphere
