#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "psphere/mesh.hpp"

namespace psphere {
namespace {

PunctureSet three() {
  std::vector<ExtendedPoint> a{0.0, 1.0, inf()};
  return PunctureSet::from_points(a);
}

class MeshOnThree : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ps_ = new PunctureSet(three());
    g_ = new MeshGraph(build_mesh(*ps_));
  }
  static void TearDownTestSuite() {
    delete g_;
    delete ps_;
  }
  static PunctureSet* ps_;
  static MeshGraph* g_;
};
PunctureSet* MeshOnThree::ps_ = nullptr;
MeshGraph* MeshOnThree::g_ = nullptr;

TEST_F(MeshOnThree, DefaultsAndCounts) {
  EXPECT_NEAR(g_->h(), ps_->rho_min() / 20.0, 1e-15);
  EXPECT_EQ(g_->m(), 256u);
  EXPECT_GT(g_->grid_node_count(), 1000u);
  EXPECT_EQ(g_->node_count(), g_->grid_node_count() + 3 * 256u);
  EXPECT_GT(g_->edge_count(), g_->node_count());
  EXPECT_GT(g_->shortcut_count(), 0u);
}

TEST_F(MeshOnThree, CircleNodesLieOnTheCircles) {
  for (std::size_t j = 0; j < ps_->size(); ++j) {
    for (std::size_t k = 0; k < g_->m(); k += 17) {
      const std::uint32_t i = g_->circle_node(j, k);
      EXPECT_EQ(g_->circle_of(i), static_cast<int>(j));
      EXPECT_NEAR(std::abs(g_->node(i) - ps_->center(j)), ps_->rho(j), 1e-12 * ps_->rho(j));
    }
  }
}

TEST_F(MeshOnThree, SameCellPairsUseTheClosedForm) {
  const double r = ps_->rho(1);
  EXPECT_NEAR(q_hat(*ps_, *g_, 1.0 + r, 1.0 - r), std::numbers::pi, 1e-14);
  EXPECT_NEAR(q_hat(*ps_, *g_, 0.1, Complex(0, 0.2)), 2.0 * mo_quasihyperbolic(0.1, Complex(0, 0.2)), 1e-14);
}

TEST_F(MeshOnThree, WPairsAreBoundedByTheClosedFormsAndSymmetric) {
  // q-hat >= q on C \ {0, 1}; the straight segment is an upper bound only
  // up to trapezoid error, so allow a little slack.
  const Complex a(-1, 0), b(2, 0);
  const double d = q_hat(*ps_, *g_, a, b);
  EXPECT_NEAR(d, q_hat(*ps_, *g_, b, a), 1e-12);
  EXPECT_GT(d, mo_quasihyperbolic(a, b));
  EXPECT_LT(d, 2.0 * std::log(2.0 / 1.0) + 2.0 * std::numbers::pi);
}

TEST_F(MeshOnThree, RejectsAMeshOfAnotherSet) {
  std::vector<ExtendedPoint> other{0.0, 1.0, 3.0, inf()};
  try {
    q_hat(PunctureSet::from_points(other), *g_, -1.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MeshMismatch);
  }
}

// Not monotone: 1/delta~ is concave near its peaks, where the trapezoid rule
// underestimates, so a finer mesh can come out slightly longer.
TEST(Mesh, HalvingTheResolutionChangesDistancesByLessThanTwoPercent) {
  const PunctureSet ps = three();
  MeshOptions o;
  o.h = ps.rho_min() / 10.0;
  const MeshGraph coarse = build_mesh(ps, o);
  o.h /= 2.0;
  const MeshGraph fine = build_mesh(ps, o);
  for (auto [a, b] : {std::pair<Complex, Complex>{-1.0, 2.0}, {Complex(0.5, 0.5), Complex(0.5, -0.5)},
                      {Complex(-0.5, 1.5), Complex(1.5, 0.2)}}) {
    const double dc = q_hat(ps, coarse, a, b), df = q_hat(ps, fine, a, b);
    EXPECT_LT(std::abs(dc - df) / df, 0.02);
  }
}

TEST(Mesh, DeltaDensityGivesSmallerDistances) {
  const PunctureSet ps = three();
  MeshOptions o;
  o.h = ps.rho_min() / 8.0;
  o.m = 64;
  const MeshGraph gt = build_mesh(ps, o);
  o.density = Density::Delta;
  const MeshGraph gd = build_mesh(ps, o);
  const double qt = q_hat(ps, gt, -1.0, 2.0), qd = q_hat(ps, gd, -1.0, 2.0);
  EXPECT_LE(qd, qt);
  EXPECT_LE(qt, 2.0 * qd);
}

TEST(Mesh, RejectsBadOptions) {
  MeshOptions o;
  o.m = 8;
  EXPECT_THROW(build_mesh(three(), o), Error);
  o.m = 64;
  o.h = -1.0;
  EXPECT_THROW(build_mesh(three(), o), Error);
}

}  // namespace
}  // namespace psphere
