#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle_values.hpp"
#include "psphere/invariants.hpp"
#include "psphere/verify.hpp"

namespace psphere {
namespace {

std::vector<ExtendedPoint> integers(int n) {
  std::vector<ExtendedPoint> a;
  for (int k = 0; k <= n; ++k) a.emplace_back(static_cast<double>(k));
  return a;
}

TEST(LogPlus, ClampsBelowOne) {
  EXPECT_EQ(log_plus(0.5), 0.0);
  EXPECT_EQ(log_plus(1.0), 0.0);
  EXPECT_NEAR(log_plus(std::numbers::e), 1.0, 1e-15);
}

TEST(QInvariant, ThreePointsGiveZero) {
  std::vector<ExtendedPoint> a{0.0, 1.0, inf()};
  EXPECT_EQ(q_invariant(a).value, 0.0);
  EXPECT_EQ(m_q(a), 0.0);
}

TEST(QInvariant, IntegerRowsHaveClosedForms) {
  for (int n = 3; n <= 12; ++n) {
    const auto a = integers(n);
    EXPECT_NEAR(q_invariant(a).value, std::log(n / (n - 2.0)), 1e-12) << n;
    EXPECT_NEAR(m_q(a), 2.0 * std::log(n - 1.0), 1e-12) << n;
  }
}

TEST(QInvariant, FourPointsWithTenMatchBruteForce) {
  std::vector<ExtendedPoint> a{0.0, 1.0, 10.0, inf()};
  const QInvariant q = q_invariant(a);
  EXPECT_NEAR(q.value, oracle::kQ_0_1_10_inf, 1e-13);
  EXPECT_NEAR(m_q(a), oracle::kMQ_0_1_10_inf, 1e-13);
  ASSERT_TRUE(q.partition.has_value());
  EXPECT_NEAR(partition_p(*q.partition), q.value, 1e-13);
  EXPECT_EQ(q.part1_indices.size() + q.part2_indices.size(), 4u);
}

TEST(QInvariant, FivePointComplexSetMatchesBruteForce) {
  std::vector<ExtendedPoint> a{0.0, 1.0, Complex(2, 1), Complex(-1, 3), inf()};
  EXPECT_NEAR(q_invariant(a).value, oracle::kQ_five, 1e-13);
  EXPECT_NEAR(m_q(a), oracle::kMQ_five, 1e-13);
}

TEST(QInvariant, EquilateralSetIsZero) {
  const Complex w = std::polar(1.0, std::numbers::pi / 3.0);
  std::vector<ExtendedPoint> a{0.0, 1.0, w, inf()};
  EXPECT_NEAR(q_invariant(a).value, 0.0, 1e-12);
}

TEST(QInvariant, PartitionLimitIsEnforced) {
  const auto a = integers(20);  // 21 points
  try {
    q_invariant(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyPunctures);
  }
  EXPECT_NO_THROW(q_invariant(a, 21));
}

TEST(PartitionP, RejectsSmallParts) {
  AdmissiblePartition p{{0.0}, {1.0, 2.0, inf()}};
  try {
    partition_p(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PartitionTooSmall);
  }
}

TEST(Collinear, NeedsSeparatedRealParts) {
  AdmissiblePartition interleaved{{0.0, 2.0}, {1.0, 3.0}};
  try {
    p_collinear(interleaved);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSeparatedOnLine);
  }
  AdmissiblePartition ok{{0.0, 1.0}, {3.0, 7.0, 8.5}};
  EXPECT_NEAR(p_collinear(ok), partition_p(ok), 1e-14);
}

TEST(Annulus, LowerBoundsAtFixedModuli) {
  const auto [a, b] = annulus_p_lower_bound(4.0);
  EXPECT_NEAR(a, oracle::kAnnulus4First, 1e-13);
  EXPECT_NEAR(b, oracle::kAnnulus4Second, 1e-13);
  EXPECT_NEAR(annulus_p_lower_bound(0.5).first, oracle::kAnnulusHalfFirst, 1e-13);
  EXPECT_THROW(annulus_p_lower_bound(0.0), Error);
  EXPECT_NEAR(core_curve_length(std::numbers::pi), std::numbers::pi, 1e-15);
}

TEST(Annulus, ConcentricSeparationBoundsP) {
  AdmissiblePartition p{{0.1, Complex(0, 0.2)}, {Complex(3, 1), -4.0, inf()}};
  const auto ring = separating_round_annulus(p);
  ASSERT_TRUE(ring.has_value());
  EXPECT_GE(ring->modulus() + 1e-10, partition_p(p));
}

TEST(Systole, ThreePointsExact) {
  std::vector<ExtendedPoint> a{0.0, 1.0, inf()};
  const SystoleBracket b = systole_bracket(a);
  ASSERT_TRUE(b.exact.has_value());
  EXPECT_NEAR(*b.exact, 1.76275, 1e-5);
  EXPECT_NEAR(*b.exact, 2.0 * std::log(1.0 + std::sqrt(2.0)), 1e-14);
}

TEST(Systole, FourPointsWithTen) {
  std::vector<ExtendedPoint> a{0.0, 1.0, 10.0, inf()};
  const SystoleBracket b = systole_bracket(a);
  EXPECT_NEAR(b.lower, oracle::kSystoleLower_0_1_10, 1e-13);
  EXPECT_NEAR(b.upper, oracle::kSchmutz4, 1e-13);
  SystoleOptions o;
  o.conditional_lower = true;
  EXPECT_NEAR(systole_bracket(a, o).lower, 1.28 * oracle::kSystoleLower_0_1_10, 1e-13);
}

TEST(Systole, ZeroQAtFivePointsUsesSchmutzCap) {
  // Fifth roots of unity: all cross ratios have modulus near 1 in the best split.
  std::vector<ExtendedPoint> a;
  for (int k = 0; k < 5; ++k) a.emplace_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 5.0));
  const SystoleBracket b = systole_bracket(a);
  if (b.q == 0.0) {
    EXPECT_NEAR(b.upper, oracle::kSchmutz5, 1e-13);
  }
  EXPECT_LE(b.upper, oracle::kSchmutz5 + 1e-13);
  EXPECT_LE(b.lower, b.upper);
}

TEST(InvariantProperties, SuitePasses) {
  std::vector<ExtendedPoint> a{0.0, 1.0, 10.0, inf()};
  for (const auto& r : suite_invariants(a, 2000, 3)) EXPECT_TRUE(r.pass) << r.name << ": " << r.counterexample;
}

}  // namespace
}  // namespace psphere
