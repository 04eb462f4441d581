// Cross-ratio invariants of a finite puncture set: mQ(A), P(A1,A2), Q(A),
// separating round annuli and systole brackets.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psphere/sphere_core.hpp"

namespace psphere {

inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

inline constexpr std::size_t kDefaultPartitionLimit = 20;

/// Systole of the thrice punctured sphere, 2 log(1+sqrt 2).
inline const double kThricePuncturedSystole = 2.0 * std::log(1.0 + std::numbers::sqrt2);

/// A split A = A1 u A2 with each part holding at least two points.
struct AdmissiblePartition {
  std::vector<ExtendedPoint> part1;
  std::vector<ExtendedPoint> part2;

  void validate(double eps = kDefaultEqTolerance) const {
    if (part1.size() < 2 || part2.size() < 2) {
      throw Error(ErrorCode::PartitionTooSmall, "each part needs at least two points");
    }
    std::vector<ExtendedPoint> all(part1);
    all.insert(all.end(), part2.begin(), part2.end());
    require_distinct(all, eps);
  }
};

/// Concentric ring r1 < |z - center| < r2, in the chart given by `normalizer`.
struct RoundAnnulus {
  Complex center{};
  double r1 = 0.0;
  double r2 = 0.0;
  MobiusTransform normalizer;

  double modulus() const { return std::log(r2 / r1); }
};

struct SystoleBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;
  double q = 0.0;
  std::vector<std::string> notes;
};

struct QInvariant {
  double value = 0.0;
  std::optional<AdmissiblePartition> partition;
  std::vector<std::size_t> part1_indices;
  std::vector<std::size_t> part2_indices;
};

namespace detail {

// log+|CR| over all ordered quadruples of distinct indices; +inf on the diagonal.
class LogCrossRatioTable {
 public:
  explicit LogCrossRatioTable(std::span<const ExtendedPoint> pts) : n_(pts.size()) {
    table_.assign(n_ * n_ * n_ * n_, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        for (std::size_t k = 0; k < n_; ++k) {
          if (k == i || k == j) continue;
          for (std::size_t l = 0; l < n_; ++l) {
            if (l == i || l == j || l == k) continue;
            at(i, j, k, l) = log_plus(std::abs(cross_ratio(pts[i], pts[j], pts[k], pts[l])));
          }
        }
      }
  }

  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return table_[((i * n_ + j) * n_ + k) * n_ + l];
  }

 private:
  double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return table_[((i * n_ + j) * n_ + k) * n_ + l];
  }

  std::size_t n_;
  std::vector<double> table_;
};

// min over the partition's quadruples, stopping as soon as the running
// minimum drops to `stop_at` or below.
inline double partition_min(const LogCrossRatioTable& t, std::span<const std::size_t> p1,
                            std::span<const std::size_t> p2, double stop_at) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : p1)
    for (std::size_t j : p1) {
      if (i == j) continue;
      for (std::size_t k : p2)
        for (std::size_t l : p2) {
          if (k == l) continue;
          best = std::min(best, t(i, j, k, l));
          if (best <= stop_at) return best;
        }
    }
  return best;
}

}  // namespace detail

/// max over ordered quadruples of distinct points of log+|CR|; 0 when card(A) < 4.
inline double m_q(std::span<const ExtendedPoint> pts, double eps = kDefaultEqTolerance) {
  require_distinct(pts, eps);
  const std::size_t n = pts.size();
  if (n < 4) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          best = std::max(best, log_plus(std::abs(cross_ratio(pts[i], pts[j], pts[k], pts[l]))));
        }
      }
    }
  return best;
}

/// P(A1,A2): min over a1 != a1' in A1 and a2 != a2' in A2 of log+|CR(a1,a1',a2,a2')|.
inline double partition_p(const AdmissiblePartition& p, double eps = kDefaultEqTolerance) {
  p.validate(eps);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.part1.size(); ++i)
    for (std::size_t j = 0; j < p.part1.size(); ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < p.part2.size(); ++k)
        for (std::size_t l = 0; l < p.part2.size(); ++l) {
          if (k == l) continue;
          const Complex cr = cross_ratio(p.part1[i], p.part1[j], p.part2[k], p.part2[l], eps);
          best = std::min(best, log_plus(std::abs(cr)));
        }
    }
  return best;
}

/// Q(A) = max of P over all admissible partitions, with an argmax partition.
///
/// Partitions are enumerated as bitmasks with the last point pinned to the
/// second part, so each unordered split is visited once. Ties keep the
/// partition with the smallest mask.
inline QInvariant q_invariant(std::span<const ExtendedPoint> pts,
                              std::size_t partition_limit = kDefaultPartitionLimit,
                              double eps = kDefaultEqTolerance) {
  require_distinct(pts, eps);
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorCode::TooFewPunctures, "need at least three points");
  if (n > partition_limit || n > 31) {
    throw Error(ErrorCode::TooManyPunctures,
                std::to_string(n) + " points exceed the partition limit " +
                    std::to_string(partition_limit));
  }
  QInvariant out;
  if (n < 4) return out;

  const detail::LogCrossRatioTable table(pts);
  const std::uint32_t n_masks = std::uint32_t{1} << (n - 1);
  double best = -1.0;
  std::uint32_t best_mask = 0;
  std::vector<std::size_t> p1, p2;
  p1.reserve(n);
  p2.reserve(n);
  for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
    p1.clear();
    p2.clear();
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? p1 : p2).push_back(i);
    if (p1.size() < 2 || p2.size() < 2) continue;
    const double value = detail::partition_min(table, p1, p2, best);
    if (value > best) {
      best = value;
      best_mask = mask;
    }
  }

  out.value = best;
  AdmissiblePartition part;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best_mask >> i) & 1u) {
      out.part1_indices.push_back(i);
      part.part1.push_back(pts[i]);
    } else {
      out.part2_indices.push_back(i);
      part.part2.push_back(pts[i]);
    }
  }
  out.partition = std::move(part);
  return out;
}

/// P(A1,A2) for parts separated on the real line, via the extreme points only.
/// The point at infinity, if present, counts as +infinity.
inline double p_collinear(const AdmissiblePartition& p, double eps = kDefaultEqTolerance) {
  p.validate(eps);
  auto key = [&](const ExtendedPoint& z) {
    if (z.is_infinite()) return std::numeric_limits<double>::infinity();
    if (std::abs(z.value().imag()) > eps) {
      throw Error(ErrorCode::NotSeparatedOnLine, "collinear formula needs real points");
    }
    return z.value().real();
  };
  auto extremes = [&](const std::vector<ExtendedPoint>& part) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < part.size(); ++i) {
      if (key(part[i]) < key(part[lo])) lo = i;
      if (key(part[i]) > key(part[hi])) hi = i;
    }
    return std::pair{part[lo], part[hi]};
  };
  auto [min1, max1] = extremes(p.part1);
  auto [min2, max2] = extremes(p.part2);
  if (!(key(max1) < key(min2))) {
    if (key(max2) < key(min1)) {
      std::swap(min1, min2);
      std::swap(max1, max2);
    } else {
      throw Error(ErrorCode::NotSeparatedOnLine, "parts interleave on the line");
    }
  }
  const double cr = cross_ratio(min1, max1, min2, max2, eps).real();
  return log_plus(cr - 1.0);
}

/// The round annulus separating A1 from A2 in the chart where the first point
/// of A1 sits at 0, the second at 1 and the first point of A2 at infinity.
/// Empty when P(A1,A2) = 0.
inline std::optional<RoundAnnulus> separating_round_annulus(const AdmissiblePartition& p,
                                                            double eps = kDefaultEqTolerance) {
  if (partition_p(p, eps) <= 0.0) return std::nullopt;
  const MobiusTransform t = mobius_from_triple(p.part1[0], p.part1[1], p.part2[0], eps);
  RoundAnnulus ring;
  ring.normalizer = t;
  ring.r1 = 0.0;
  for (std::size_t i = 1; i < p.part1.size(); ++i) {
    ring.r1 = std::max(ring.r1, std::abs(t(p.part1[i]).value()));
  }
  ring.r2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.part2.size(); ++i) {
    ring.r2 = std::min(ring.r2, std::abs(t(p.part2[i]).value()));
  }
  return ring;
}

/// (2 log sinh(m/2), m - 2 log(1+sqrt 2)): lower bounds for P given a
/// separating circular annulus of modulus m.
inline std::pair<double, double> annulus_p_lower_bound(double modulus) {
  if (!(modulus > 0.0)) throw Error(ErrorCode::NonpositiveModulus, "modulus must be positive");
  return {2.0 * std::log(std::sinh(modulus / 2.0)), modulus - kThricePuncturedSystole};
}

/// Hyperbolic length of the core curve of an annulus: pi^2 / mod.
inline double core_curve_length(double modulus) {
  if (!(modulus > 0.0)) throw Error(ErrorCode::NonpositiveModulus, "modulus must be positive");
  return std::numbers::pi * std::numbers::pi / modulus;
}

struct SystoleOptions {
  std::size_t partition_limit = kDefaultPartitionLimit;
  /// Use 1.28/(Q+1) as the lower bound. Only valid when sys(X) <= 1.
  bool conditional_lower = false;
};

inline SystoleBracket systole_bracket(std::span<const ExtendedPoint> pts,
                                      const SystoleOptions& opts = {}) {
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorCode::TooFewPunctures, "need at least three punctures");
  require_distinct(pts);
  SystoleBracket b;
  if (n == 3) {
    b.exact = kThricePuncturedSystole;
    b.lower = b.upper = kThricePuncturedSystole;
    b.notes.emplace_back("exact: thrice punctured sphere, 2 log(1+sqrt 2)");
    return b;
  }
  const double q = q_invariant(pts, opts.partition_limit).value;
  b.q = q;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double schmutz = 2.0 * std::acosh(3.0 - 6.0 / static_cast<double>(n));
  const double q_cap = (pi2 + 2.0 * kThricePuncturedSystole) / (q + 1.0);
  b.upper = std::min(schmutz, q_cap);
  b.notes.emplace_back("upper: Schmutz 2 arccosh(3-6/n) = " + std::to_string(schmutz));
  b.notes.emplace_back("upper: (pi^2 + 4 log(1+sqrt 2))/(Q+1) = " + std::to_string(q_cap));
  if (q > 0.0) {
    b.upper = std::min(b.upper, pi2 / q);
    b.notes.emplace_back("upper: pi^2/Q = " + std::to_string(pi2 / q));
  }
  if (opts.conditional_lower) {
    b.lower = 1.28 / (q + 1.0);
    b.notes.emplace_back("lower: 1.28/(Q+1), valid only if sys(X) <= 1");
  } else {
    b.lower = 1.0 / (q + 1.0);
    b.notes.emplace_back("lower: 1/(Q+1)");
  }
  return b;
}

}  // namespace psphere
