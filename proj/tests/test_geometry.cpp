#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle_values.hpp"
#include "psphere/geometry.hpp"
#include "psphere/verify.hpp"

namespace psphere {
namespace {

constexpr double kE = std::numbers::e;

PunctureSet three() {
  std::vector<ExtendedPoint> a{0.0, 1.0, inf()};
  return PunctureSet::from_points(a);
}

PunctureSet with_ten() {
  std::vector<ExtendedPoint> a{0.0, 1.0, 10.0, inf()};
  return PunctureSet::from_points(a);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no psphere::Error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(PunctureSet, OrdersOriginFirstAndInfinityLast) {
  std::vector<ExtendedPoint> a{10.0, inf(), 1.0, 0.0};
  const PunctureSet ps = PunctureSet::from_points(a);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(ps.finite(0), Complex(0.0));
  EXPECT_EQ(ps.outer(), 3u);
  EXPECT_EQ(ps.source_index()[0], 3u);
  EXPECT_EQ(ps.source_index()[3], 1u);
  EXPECT_TRUE(ps.contains_one());
}

TEST(PunctureSet, RadiiForTenConfiguration) {
  const PunctureSet ps = with_ten();
  EXPECT_NEAR(ps.rho(0), oracle::kRho10_0, 1e-15);
  EXPECT_NEAR(ps.rho(1), oracle::kRho10_0, 1e-15);
  EXPECT_NEAR(ps.rho(2), oracle::kRho10_2, 1e-14);
  EXPECT_NEAR(ps.rho(3), oracle::kRho10_inf, 1e-13);
  EXPECT_NEAR(ps.rho_min(), 1.0 / kE, 1e-15);
  EXPECT_NEAR(ps.rho_max(), 10.0 * kE, 1e-13);
}

TEST(PunctureSet, RejectsUnnormalizedInput) {
  std::vector<ExtendedPoint> no_origin{1.0, 2.0, inf()};
  EXPECT_EQ(code_of([&] { PunctureSet::from_points(no_origin); }), ErrorCode::MissingOriginPuncture);
  std::vector<ExtendedPoint> no_inf{0.0, 1.0, 2.0};
  EXPECT_EQ(code_of([&] { PunctureSet::from_points(no_inf); }), ErrorCode::NotNormalized);
  std::vector<ExtendedPoint> two{0.0, inf()};
  EXPECT_EQ(code_of([&] { PunctureSet::from_points(two); }), ErrorCode::TooFewPunctures);
}

TEST(Normalize, SendsAnchorsExactlyAndKeepsQ) {
  std::vector<ExtendedPoint> raw{Complex(2, 1), 3.0, Complex(-1, 4), 7.0, Complex(0, -2)};
  const Normalized n = normalize(raw);
  const auto pts = n.ps.points();
  EXPECT_TRUE(n.ps.contains_one());
  EXPECT_NEAR(q_invariant(pts).value, q_invariant(raw).value, 1e-10);
  std::array<std::size_t, 3> anchor{4, 2, 0};
  const Normalized m = normalize(raw, anchor);
  EXPECT_EQ(m.transform(raw[4]).value(), Complex(0.0));
  EXPECT_TRUE(m.transform(raw[0]).is_infinite());
}

TEST(Classify, RegionsOnThreePunctures) {
  const PunctureSet ps = three();
  EXPECT_EQ(classify(ps, 0.1).kind, Region::Kind::Cell);
  EXPECT_EQ(classify(ps, 0.1).index, 0u);
  EXPECT_EQ(classify(ps, Complex(1.1, 0.1)).index, 1u);
  EXPECT_EQ(classify(ps, -1.0).kind, Region::Kind::Wild);
  EXPECT_EQ(classify(ps, 3.0).index, ps.outer());
  const Region b = classify(ps, Complex(0, 1.0 / kE));
  EXPECT_EQ(b.kind, Region::Kind::Boundary);
  EXPECT_EQ(b.index, 0u);
  EXPECT_EQ(code_of([&] { classify(ps, 1.0); }), ErrorCode::PointIsPuncture);
}

TEST(Delta, ModifiedDistanceIsBetweenHalfAndFull) {
  const PunctureSet ps = with_ten();
  EXPECT_NEAR(delta(ps, Complex(4, 0)), 3.0, 1e-15);
  EXPECT_NEAR(delta_tilde(ps, Complex(4, 0)), 2.0, 1e-15);
  EXPECT_NEAR(delta_tilde(ps, Complex(0.2, 0)), 0.1, 1e-15);
}

TEST(Delta, InteriorCellFormFailsInASliver) {
  // z = 0.64 lies in the closed cell of 1 (radius 1/e) yet |z|/2 < |z - 1|.
  const PunctureSet ps = three();
  const Complex z = 0.64;
  ASSERT_TRUE(in_closed_cell(ps, 1, z));
  EXPECT_NEAR(delta_tilde(ps, z), 0.32, 1e-15);
  EXPECT_GT(std::abs(z - 1.0), delta_tilde(ps, z));
  // The origin and outer cells do satisfy delta~ = |z|/2.
  EXPECT_NEAR(delta_tilde(ps, 0.3), 0.15, 1e-15);
  EXPECT_NEAR(delta_tilde(ps, Complex(0, 3)), 1.5, 1e-15);
}

TEST(Voronoi, PlainCellsOfThreePuncturesShareTheBisector) {
  const auto cells = voronoi_cells(three());
  ASSERT_EQ(cells.size(), 2u);
  for (const auto& cell : cells) {
    EXPECT_TRUE(cell.unbounded);
    bool bisector = false;
    for (const auto& pl : cell.polylines)
      for (Complex z : pl) bisector = bisector || std::abs(z.real() - 0.5) < 1e-12;
    EXPECT_TRUE(bisector);
  }
}

TEST(Voronoi, OwnersMatchNearestPuncture) {
  const PunctureSet ps = with_ten();
  EXPECT_EQ(voronoi_owner(ps, Complex(0.4, 0.1)), 0u);
  EXPECT_EQ(voronoi_owner(ps, Complex(6.0, 0.1)), 2u);
  // Modified: 4 is closer to 1 than to 0 but |4 - 1| > 4/2.
  EXPECT_EQ(modified_voronoi_owner(ps, 4.0), 0u);
}

TEST(Voronoi, ModifiedCellOfOneIsTheApollonianCircle) {
  const auto cells = modified_voronoi_cells(three());
  ASSERT_EQ(cells.size(), 2u);
  const auto& one = cells[1];
  EXPECT_TRUE(one.closed);
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& pl : one.polylines)
    for (Complex z : pl) {
      worst = std::max(worst, std::abs(std::abs(z - 4.0 / 3.0) - 2.0 / 3.0));
      ++count;
    }
  EXPECT_GE(count, 512u);
  EXPECT_LT(worst, 1e-12);
  EXPECT_FALSE(cells[0].closed);
}

TEST(Voronoi, ModifiedCellsNeedTheOrigin) {
  std::vector<ExtendedPoint> a{1.0, 2.0, inf()};
  EXPECT_EQ(code_of([&] { PunctureSet::from_points(a); }), ErrorCode::MissingOriginPuncture);
}

TEST(BeardonPommerenke, DensityAtMinusOneIsBracketed) {
  const auto [lo, hi] = bp_density_bounds(three(), -1.0);
  EXPECT_LE(lo, 0.114237);
  EXPECT_GE(hi, 0.114237);
  EXPECT_EQ(beta(three(), -1.0), 0.0);
}

TEST(BeardonPommerenke, BetaIsAffineInvariant) {
  const std::vector<Complex> a{0.0, 1.0, Complex(2, 3)};
  const Complex k(1.5, -0.7), l(3, 2), z(0.7, 1.9);
  std::vector<Complex> b;
  for (Complex x : a) b.push_back(k * x + l);
  EXPECT_NEAR(beta(a, z), beta(b, k * z + l), 1e-13);
}

TEST(BeardonPommerenke, WBoundForZeroQ) {
  EXPECT_NEAR(beta_w_bound(three()), std::log(1.0 + 2.0 * kE), 1e-15);
  EXPECT_NEAR(kBetaShift, 0.0122168, 1e-7);
}

TEST(RhoBrackets, HoldOnTenConfiguration) {
  for (const auto& b : rho_brackets(with_ten())) EXPECT_TRUE(b.ok) << b.name;
  std::vector<ExtendedPoint> a{0.0, 2.0, 5.0, inf()};
  EXPECT_EQ(code_of([&] { rho_brackets(PunctureSet::from_points(a)); }), ErrorCode::NotNormalized);
}

TEST(RhoBrackets, HoldOnRandomNormalizedSets) {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 50; ++s) {
    const PunctureSet ps = testing_support::random_normalized(rng, 4 + s % 5);
    for (const auto& b : rho_brackets(ps)) EXPECT_TRUE(b.ok) << b.name;
  }
}

}  // namespace
}  // namespace psphere
