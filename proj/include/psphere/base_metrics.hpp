// Closed-form base distances: euclidean, j and its modified version, the
// quasihyperbolic distance of the punctured plane, and the in-cell form of
// the modified quasihyperbolic distance.
#pragma once

#include <algorithm>
#include <cmath>

#include "psphere/geometry.hpp"

namespace psphere {

inline double euclid(Complex z1, Complex z2) { return std::abs(z1 - z2); }

inline double j_dist(const PunctureSet& ps, Complex z1, Complex z2) {
  require_not_puncture(ps, z1);
  require_not_puncture(ps, z2);
  if (z1 == z2) return 0.0;
  return std::log1p(std::abs(z1 - z2) / std::min(delta(ps, z1), delta(ps, z2)));
}

inline double j_hat(const PunctureSet& ps, Complex z1, Complex z2) {
  require_not_puncture(ps, z1);
  require_not_puncture(ps, z2);
  if (z1 == z2) return 0.0;
  return std::log1p(std::abs(z1 - z2) / std::min(delta_tilde(ps, z1), delta_tilde(ps, z2)));
}

/// Quasihyperbolic distance of C \ {0}.
inline double mo_quasihyperbolic(Complex z1, Complex z2) {
  const double r1 = std::abs(z1), r2 = std::abs(z2);
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw Error(ErrorCode::ZeroArgument, "q needs nonzero points");
  const double radial = std::log(r1) - std::log(r2);
  return std::hypot(radial, angle_between(z1, z2));
}

/// Weight used by the path metric: 1/delta~ (the modified distance) or 1/delta.
enum class Density { DeltaTilde, Delta };

/// Distance inside the closed cell E_j. delta~ = |z|/2 on the origin and
/// outer cells, so the modified distance there is 2q.
inline double cell_q(const PunctureSet& ps, std::size_t j, Complex z1, Complex z2,
                     Density density = Density::DeltaTilde) {
  if (j > ps.outer()) throw Error(ErrorCode::InvalidArgument, "cell index out of range");
  for (Complex z : {z1, z2}) {
    require_not_puncture(ps, z);
    if (!in_closed_cell(ps, j, z)) throw Error(ErrorCode::NotInCell, "point outside E_j");
  }
  if (z1 == z2) return 0.0;
  if (j == 0 || j == ps.outer()) {
    const double q = mo_quasihyperbolic(z1, z2);
    return density == Density::DeltaTilde ? 2.0 * q : q;
  }
  return mo_quasihyperbolic(z1 - ps.finite(j), z2 - ps.finite(j));
}

inline double q_hat_cell(const PunctureSet& ps, std::size_t j, Complex z1, Complex z2) {
  return cell_q(ps, j, z1, z2, Density::DeltaTilde);
}

}  // namespace psphere
