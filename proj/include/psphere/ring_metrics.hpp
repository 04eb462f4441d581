// The two-point function D^f on the punctured disk 0 < |z| <= 1/e and the
// catalog of profile functions f that drive it.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "psphere/sphere_core.hpp"

namespace psphere {

/// f on [0, pi] with L1*t <= f(t) <= L2*t and f <= sup_bound.
struct RingProfile {
  std::string name;
  std::function<double(double)> f;
  double l1 = 0.0;
  double l2 = 0.0;
  double sup_bound = 0.0;

  double operator()(double t) const { return f(t); }
  /// f <= 2 is what makes D^f a metric.
  bool triangle_guarantee() const { return sup_bound <= 2.0; }
};

inline RingProfile profile_sin2() {
  return {"sin2", [](double t) { return 2.0 * std::sin(t / 2.0); }, 2.0 / std::numbers::pi, 1.0,
          2.0};
}

inline RingProfile profile_id() {
  return {"id", [](double t) { return t; }, 1.0, 1.0, std::numbers::pi};
}

inline RingProfile profile_linear_2pi() {
  const double k = 2.0 / std::numbers::pi;
  return {"linear_2pi", [k](double t) { return k * t; }, k, k, 2.0};
}

// L1 = f(pi)/pi and L2 = f'(0) by concavity.
inline RingProfile profile_log2() {
  return {"log2", [](double t) { return std::log1p(2.0 * std::sin(t / 2.0)); },
          std::log(3.0) / std::numbers::pi, 1.0, std::log(3.0)};
}

inline RingProfile profile_log4() {
  return {"log4", [](double t) { return std::log1p(4.0 * std::sin(t / 2.0)); },
          std::log(5.0) / std::numbers::pi, 2.0, std::log(5.0)};
}

inline std::vector<RingProfile> profile_catalog() {
  return {profile_sin2(), profile_id(), profile_linear_2pi(), profile_log2(), profile_log4()};
}

inline std::optional<RingProfile> profile_by_name(const std::string& name) {
  for (auto& p : profile_catalog())
    if (p.name == name) return p;
  return std::nullopt;
}

/// Max is the metric; Min is the variant that breaks the triangle inequality.
enum class TauRule { Max, Min };

inline constexpr double kRingRadius = 1.0 / std::numbers::e;

inline void require_ring_domain(Complex z) {
  const double r = std::abs(z);
  if (!(r > 0.0)) throw Error(ErrorCode::OutOfRingDomain, "z = 0 is the puncture");
  if (r > kRingRadius * (1.0 + 1e-12))
    throw Error(ErrorCode::OutOfRingDomain, "|z| exceeds 1/e");
}

inline double d_f(const RingProfile& f, Complex z1, Complex z2, TauRule rule = TauRule::Max) {
  require_ring_domain(z1);
  require_ring_domain(z2);
  if (z1 == z2) return 0.0;
  // tau >= 1 up to the domain tolerance.
  const double tau1 = std::max(1.0, -std::log(std::abs(z1)));
  const double tau2 = std::max(1.0, -std::log(std::abs(z2)));
  const double tau = rule == TauRule::Max ? std::max(tau1, tau2) : std::min(tau1, tau2);
  return f(angle_between(z1, z2)) / tau + std::abs(std::log(tau1) - std::log(tau2));
}

struct ProfileReport {
  std::string name;
  bool f_zero = false;
  bool monotone = false;
  bool subadditive = false;
  bool linear_bounds = false;
  bool sup_bound = false;
  bool triangle_guarantee = false;

  bool all_pass() const { return f_zero && monotone && subadditive && linear_bounds && sup_bound; }
};

/// Grid certification of the profile axioms on [0, pi].
inline ProfileReport check_profile(const RingProfile& f, std::size_t grid_size = 10000,
                                   double tol = 1e-12) {
  if (grid_size < 100) throw Error(ErrorCode::InvalidArgument, "grid_size must be at least 100");
  ProfileReport r;
  r.name = f.name;
  r.triangle_guarantee = f.triangle_guarantee();
  r.f_zero = std::abs(f(0.0)) <= tol;
  const double step = std::numbers::pi / static_cast<double>(grid_size);
  std::vector<double> v(grid_size + 1);
  for (std::size_t i = 0; i <= grid_size; ++i) v[i] = f(step * static_cast<double>(i));

  r.monotone = true;
  r.linear_bounds = true;
  r.sup_bound = true;
  for (std::size_t i = 0; i <= grid_size; ++i) {
    const double t = step * static_cast<double>(i);
    if (i > 0 && v[i] < v[i - 1] - tol) r.monotone = false;
    if (v[i] < f.l1 * t - tol || v[i] > f.l2 * t + tol) r.linear_bounds = false;
    if (v[i] > f.sup_bound + tol) r.sup_bound = false;
  }
  // Pairs i + k <= grid_size on the same grid, so f(t_i + t_k) is v[i + k].
  r.subadditive = true;
  const std::size_t stride = std::max<std::size_t>(1, grid_size / 1000);
  for (std::size_t i = 0; i <= grid_size && r.subadditive; i += stride)
    for (std::size_t k = 0; i + k <= grid_size; k += stride)
      if (v[i + k] > v[i] + v[k] + tol) {
        r.subadditive = false;
        break;
      }
  return r;
}

/// Uniform angle, log(tau) uniform on [0, log 60].
template <class Rng>
Complex sample_ring_point(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tau = std::exp(u(rng) * std::log(60.0));
  const double phi = (2.0 * u(rng) - 1.0) * std::numbers::pi;
  return std::polar(std::exp(-tau), phi);
}

struct BoundsCheckReport {
  std::size_t samples = 0;
  /// Violations of L1 * D^id <= D^f <= L2 * D^id.
  std::size_t violations = 0;
  double worst_excess = 0.0;
  /// Violations of min(L1,1) * D^id <= D^f <= max(L2,1) * D^id. The shared
  /// log term only scales with L when L1 <= 1 <= L2.
  std::size_t envelope_violations = 0;
  /// Comparison against the true hyperbolic distances is out of numeric scope.
  bool hyperbolic_checked = false;
};

inline BoundsCheckReport d_f_bounds_check(const RingProfile& f, std::size_t samples,
                                          std::uint64_t seed, double tol = 1e-12) {
  std::mt19937_64 rng(seed);
  const RingProfile id = profile_id();
  BoundsCheckReport r;
  r.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex z1 = sample_ring_point(rng), z2 = sample_ring_point(rng);
    const double d = d_f(f, z1, z2), base = d_f(id, z1, z2);
    const double excess = std::max(f.l1 * base - d, d - f.l2 * base);
    if (excess > tol * std::max(1.0, base)) ++r.violations;
    r.worst_excess = std::max(r.worst_excess, excess);
    const double env = std::max(std::min(f.l1, 1.0) * base - d, d - std::max(f.l2, 1.0) * base);
    if (env > tol * std::max(1.0, base)) ++r.envelope_violations;
  }
  return r;
}

struct TriangleWitness {
  Complex z1, z2, z;
  /// d(z1,z2) - d(z1,z) - d(z,z2); positive means a violation.
  double excess = 0.0;
};

struct TriangleReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::optional<TriangleWitness> witness;
};

inline TriangleReport triangle_search(const RingProfile& f, TauRule rule, std::size_t samples,
                                      std::uint64_t seed, double slack = 1e-12) {
  std::mt19937_64 rng(seed);
  TriangleReport r;
  r.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex z1 = sample_ring_point(rng), z2 = sample_ring_point(rng),
                  z = sample_ring_point(rng);
    const double excess = d_f(f, z1, z2, rule) - d_f(f, z1, z, rule) - d_f(f, z, z2, rule);
    if (excess > slack) {
      ++r.violations;
      if (!r.witness || excess > r.witness->excess) r.witness = TriangleWitness{z1, z2, z, excess};
    }
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  return r;
}

}  // namespace psphere
