#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle_values.hpp"
#include "psphere/ring_metrics.hpp"
#include "psphere/verify.hpp"

namespace psphere {
namespace {

TEST(Profiles, CatalogConstants) {
  const double pi = std::numbers::pi;
  const auto s = profile_sin2(), i = profile_id(), l = profile_linear_2pi(), g2 = profile_log2(),
             g4 = profile_log4();
  EXPECT_DOUBLE_EQ(s.l1, 2.0 / pi);
  EXPECT_DOUBLE_EQ(s.sup_bound, 2.0);
  EXPECT_DOUBLE_EQ(i.sup_bound, pi);
  EXPECT_DOUBLE_EQ(l.l2, 2.0 / pi);
  EXPECT_DOUBLE_EQ(g2.sup_bound, std::log(3.0));
  EXPECT_DOUBLE_EQ(g4.l2, 2.0);
  EXPECT_FALSE(i.triangle_guarantee());
  EXPECT_TRUE(s.triangle_guarantee());
  EXPECT_TRUE(profile_by_name("log4").has_value());
  EXPECT_FALSE(profile_by_name("cubic").has_value());
}

TEST(Profiles, EveryCatalogEntryPassesTheAxioms) {
  for (const auto& f : profile_catalog()) EXPECT_TRUE(check_profile(f).all_pass()) << f.name;
}

TEST(Profiles, GridCheckRejectsBadProfiles) {
  RingProfile square{"square", [](double t) { return t * t; }, 0.0, std::numbers::pi, 10.0};
  EXPECT_FALSE(check_profile(square).subadditive);
  RingProfile bump{"bump", [](double t) { return std::sin(t); }, 0.0, 1.0, 1.0};
  EXPECT_FALSE(check_profile(bump).monotone);
  EXPECT_THROW(check_profile(profile_sin2(), 50), Error);
}

TEST(Df, ReferenceValues) {
  const Complex z1 = 0.1, z2(0, 0.01);
  EXPECT_NEAR(d_f(profile_sin2(), z1, z2), oracle::kDfSin2, 1e-14);
  EXPECT_NEAR(d_f(profile_log2(), z1, z2), oracle::kDfLog2, 1e-14);
  EXPECT_NEAR(d_f(profile_sin2(), z1, z2, TauRule::Min), oracle::kDfSin2Min, 1e-14);
}

TEST(Df, DomainIsThePuncturedDisk) {
  EXPECT_THROW(d_f(profile_sin2(), 0.0, 0.1), Error);
  EXPECT_THROW(d_f(profile_sin2(), 0.5, 0.1), Error);
  EXPECT_NO_THROW(d_f(profile_sin2(), 1.0 / std::numbers::e, 0.1));
}

TEST(Df, SameRadiusReducesToProfileOverTau) {
  const double r = std::exp(-3.0);
  const Complex z1 = std::polar(r, 0.3), z2 = std::polar(r, 2.1);
  EXPECT_NEAR(d_f(profile_sin2(), z1, z2), 2.0 * std::sin(0.9) / 3.0, 1e-14);
}

TEST(Df, ExactlySymmetric) {
  const Complex z1(0.0031, -0.2), z2(-0.17, 0.04);
  EXPECT_EQ(d_f(profile_log4(), z1, z2), d_f(profile_log4(), z2, z1));
}

TEST(Df, TriangleHoldsForBoundedProfilesOnManyTriples) {
  for (const auto& f : profile_catalog()) {
    if (!f.triangle_guarantee()) continue;
    const TriangleReport r = triangle_search(f, TauRule::Max, 20000, 5);
    EXPECT_EQ(r.violations, 0u) << f.name;
  }
}

TEST(Df, MinimumVariantBreaksTheTriangle) {
  const TriangleReport r = triangle_search(profile_sin2(), TauRule::Min, 20000, 5);
  EXPECT_GT(r.violations, 0u);
  ASSERT_TRUE(r.witness.has_value());
  const auto& w = *r.witness;
  EXPECT_GT(d_f(profile_sin2(), w.z1, w.z2, TauRule::Min),
            d_f(profile_sin2(), w.z1, w.z, TauRule::Min) + d_f(profile_sin2(), w.z, w.z2, TauRule::Min));
}

TEST(Df, ScalingChainFailsOnlyWhenL2IsBelowOne) {
  for (const auto& f : profile_catalog()) {
    const BoundsCheckReport r = d_f_bounds_check(f, 5000, 9);
    EXPECT_EQ(r.envelope_violations, 0u) << f.name;
    if (f.l1 <= 1.0 && f.l2 >= 1.0) {
      EXPECT_EQ(r.violations, 0u) << f.name;
    }
    EXPECT_FALSE(r.hyperbolic_checked);
  }
  // linear_2pi has L2 = 2/pi < 1 and the unscaled log term exceeds L2 * D^id.
  EXPECT_GT(d_f_bounds_check(profile_linear_2pi(), 5000, 9).violations, 0u);
}

TEST(RingProperties, SuitePasses) {
  for (const auto& r : suite_ringmetrics(5000, 17)) EXPECT_TRUE(r.pass) << r.name << ": " << r.counterexample;
}

}  // namespace
}  // namespace psphere
