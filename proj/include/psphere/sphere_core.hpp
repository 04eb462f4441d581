// Extended complex arithmetic on the Riemann sphere: points, cross ratios and
// Moebius transformations. Everything else in psphere is built on this layer.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psphere {

using Complex = std::complex<double>;

inline constexpr double kDefaultEqTolerance = 1e-12;

enum class ErrorCode {
  DuplicatePoint,
  MultipleInfinity,
  InvalidMobius,
  NonFiniteCoordinate,
  PartitionTooSmall,
  TooManyPunctures,
  TooFewPunctures,
  NotSeparatedOnLine,
  NonpositiveModulus,
  PointIsPuncture,
  MissingOriginPuncture,
  NotNormalized,
  OutOfRingDomain,
  NotInCell,
  ZeroArgument,
  MeshMismatch,
  ResolutionTooCoarse,
  MismatchedPunctureSets,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::MultipleInfinity: return "MultipleInfinity";
    case ErrorCode::InvalidMobius: return "InvalidMobius";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::PartitionTooSmall: return "PartitionTooSmall";
    case ErrorCode::TooManyPunctures: return "TooManyPunctures";
    case ErrorCode::TooFewPunctures: return "TooFewPunctures";
    case ErrorCode::NotSeparatedOnLine: return "NotSeparatedOnLine";
    case ErrorCode::NonpositiveModulus: return "NonpositiveModulus";
    case ErrorCode::PointIsPuncture: return "PointIsPuncture";
    case ErrorCode::MissingOriginPuncture: return "MissingOriginPuncture";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OutOfRingDomain: return "OutOfRingDomain";
    case ErrorCode::NotInCell: return "NotInCell";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::MismatchedPunctureSets: return "MismatchedPunctureSets";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A point of the Riemann sphere: a finite complex number or infinity.
class ExtendedPoint {
 public:
  ExtendedPoint() = default;
  ExtendedPoint(Complex z) : value_(z) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFiniteCoordinate, "finite points need finite coordinates");
    }
  }
  ExtendedPoint(double re, double im = 0.0) : ExtendedPoint(Complex(re, im)) {}

  static ExtendedPoint infinity() {
    ExtendedPoint p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// The finite value. Calling this on infinity is a logic error.
  Complex value() const {
    if (infinite_) throw Error(ErrorCode::InvalidArgument, "value() of the point at infinity");
    return value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedPoint& p) {
    if (p.infinite_) return os << "inf";
    return os << p.value_.real() << ',' << p.value_.imag();
  }

 private:
  Complex value_{};
  bool infinite_ = false;
};

inline ExtendedPoint inf() { return ExtendedPoint::infinity(); }

/// Exact for infinity, absolute tolerance `eps` for finite points.
inline bool approx_equal(const ExtendedPoint& a, const ExtendedPoint& b,
                         double eps = kDefaultEqTolerance) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return std::abs(a.value() - b.value()) <= eps;
}

/// Throws DuplicatePoint / MultipleInfinity if the list is not a valid puncture list.
inline void require_distinct(std::span<const ExtendedPoint> pts, double eps = kDefaultEqTolerance) {
  std::size_t n_inf = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].is_infinite()) ++n_inf;
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      if (approx_equal(pts[i], pts[k], eps)) {
        throw Error(ErrorCode::DuplicatePoint,
                    "points " + std::to_string(i) + " and " + std::to_string(k) + " coincide");
      }
    }
  }
  if (n_inf > 1) throw Error(ErrorCode::MultipleInfinity, "more than one point at infinity");
}

/// CR(a1,a2,a3,a4) = (a1-a3)(a2-a4) / ((a1-a2)(a3-a4)); a point at infinity is
/// handled by cancelling the two factors that contain it.
inline Complex cross_ratio(const ExtendedPoint& a1, const ExtendedPoint& a2,
                           const ExtendedPoint& a3, const ExtendedPoint& a4,
                           double eps = kDefaultEqTolerance) {
  const std::array<ExtendedPoint, 4> q{a1, a2, a3, a4};
  require_distinct(q, eps);
  if (a1.is_infinite()) {
    const Complex z2 = a2.value(), z3 = a3.value(), z4 = a4.value();
    return (z2 - z4) / (z3 - z4);
  }
  if (a2.is_infinite()) {
    const Complex z1 = a1.value(), z3 = a3.value(), z4 = a4.value();
    return -(z1 - z3) / (z3 - z4);
  }
  if (a3.is_infinite()) {
    const Complex z1 = a1.value(), z2 = a2.value(), z4 = a4.value();
    return -(z2 - z4) / (z1 - z2);
  }
  if (a4.is_infinite()) {
    const Complex z1 = a1.value(), z2 = a2.value(), z3 = a3.value();
    return (z1 - z3) / (z1 - z2);
  }
  const Complex z1 = a1.value(), z2 = a2.value(), z3 = a3.value(), z4 = a4.value();
  return ((z1 - z3) * (z2 - z4)) / ((z1 - z2) * (z3 - z4));
}

/// z -> (az+b)/(cz+d). Coefficients are stored scaled to unit max magnitude.
class MobiusTransform {
 public:
  MobiusTransform() : MobiusTransform(1.0, 0.0, 0.0, 1.0) {}

  MobiusTransform(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
    const double scale = std::max({std::abs(a_), std::abs(b_), std::abs(c_), std::abs(d_)});
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw Error(ErrorCode::InvalidMobius, "coefficients must be finite and not all zero");
    }
    a_ /= scale;
    b_ /= scale;
    c_ /= scale;
    d_ /= scale;
    if (std::abs(a_ * d_ - b_ * c_) <= 1e-14) {
      throw Error(ErrorCode::InvalidMobius, "determinant ad-bc vanishes");
    }
  }

  static MobiusTransform identity() { return {}; }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }
  Complex determinant() const { return a_ * d_ - b_ * c_; }

  ExtendedPoint operator()(const ExtendedPoint& z) const {
    if (z.is_infinite()) {
      if (std::abs(c_) <= 1e-15 * std::max(std::abs(a_), 1e-300)) return inf();
      return a_ / c_;
    }
    const Complex w = z.value();
    const Complex num = a_ * w + b_;
    const Complex den = c_ * w + d_;
    const double den_scale = std::max(std::abs(c_ * w), std::abs(d_));
    if (std::abs(den) <= 1e-14 * den_scale) return inf();
    return num / den;
  }

  MobiusTransform inverse() const { return {d_, -b_, -c_, a_}; }

  /// (this * other)(z) = this(other(z)).
  MobiusTransform operator*(const MobiusTransform& o) const {
    return {a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
            c_ * o.b_ + d_ * o.d_};
  }

 private:
  Complex a_, b_, c_, d_;
};

inline ExtendedPoint mobius_apply(const MobiusTransform& t, const ExtendedPoint& z) { return t(z); }

/// The transform sending p -> 0, q -> 1, r -> infinity.
inline MobiusTransform mobius_from_triple(const ExtendedPoint& p, const ExtendedPoint& q,
                                          const ExtendedPoint& r,
                                          double eps = kDefaultEqTolerance) {
  const std::array<ExtendedPoint, 3> t{p, q, r};
  require_distinct(t, eps);
  if (p.is_infinite()) {
    const Complex zq = q.value(), zr = r.value();
    return {0.0, zq - zr, 1.0, -zr};
  }
  if (q.is_infinite()) {
    const Complex zp = p.value(), zr = r.value();
    return {1.0, -zp, 1.0, -zr};
  }
  if (r.is_infinite()) {
    const Complex zp = p.value(), zq = q.value();
    return {1.0, -zp, 0.0, zq - zp};
  }
  const Complex zp = p.value(), zq = q.value(), zr = r.value();
  return {zq - zr, -zp * (zq - zr), zq - zp, -zr * (zq - zp)};
}

/// theta = |arg(z2 conj z1)| in [0, pi]; exactly symmetric in its arguments.
inline double angle_between(Complex z1, Complex z2) {
  const double re = z2.real() * z1.real() + z2.imag() * z1.imag();
  const double im = z2.imag() * z1.real() - z2.real() * z1.imag();
  return std::clamp(std::abs(std::atan2(im, re)), 0.0, std::numbers::pi);
}

inline std::vector<ExtendedPoint> apply_all(const MobiusTransform& t,
                                            std::span<const ExtendedPoint> pts) {
  std::vector<ExtendedPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(t(p));
  return out;
}

}  // namespace psphere
