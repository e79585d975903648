#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vjoint/grid_sweep.hpp"

namespace vjoint {
namespace {

using testing::demo_grid;
using testing::demo_model;

GridSpec coarse_demo() {
  GridSpec g = demo_grid();
  g.Bx = 7;
  g.By = 7;
  g.Dx = 100.0;
  g.Dy = 100.0;
  return g;
}

TEST(GridSpec, PointsFollowBoxFrame) {
  GridSpec g;
  g.C = {Rotation::about(Axis::Z, kPi / 2), Vec3(100, 200, 300)};
  g.Dx = 10;
  g.Dy = 20;
  EXPECT_LT((g.point(1, 1) - Vec3(100, 200, 300)).norm(), 1e-12);
  EXPECT_LT((g.point(3, 1) - Vec3(100, 220, 300)).norm(), 1e-12);
  EXPECT_LT((g.point(1, 2) - Vec3(80, 200, 300)).norm(), 1e-12);
}

TEST(GridSpec, OrientationComposesBoxAndRelative) {
  GridSpec g;
  g.C = {Rotation::about(Axis::Z, 0.5), Vec3::Zero()};
  g.Q_rel = Rotation::about(Axis::X, kPi);
  EXPECT_LT(Rotation::angle_between(g.orientation(), Rotation::about(Axis::Z, 0.5) * Rotation::about(Axis::X, kPi)),
            1e-12);
}

TEST(GridSpec, ValidationNamesEachProblem) {
  GridSpec g;
  g.Bx = 0;
  g.Dx = -1;
  const auto p = g.validate();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NE(p[0].find("Bx"), std::string::npos);
  EXPECT_NE(p[1].find("Dx"), std::string::npos);
  EXPECT_TRUE(demo_grid().validate().empty());
}

TEST(ClassifyPose, BlackForReachableInLimits) {
  std::mt19937_64 rng(31);
  const RobotModel m = demo_model();
  for (int n = 0; n < 200; ++n) {
    const JointVector q = testing::random_regular_joints(rng, m);
    const Configuration s = *config_of(m, q);
    EXPECT_EQ(classify_pose(m, forward_tcp(m, q), s), PoseClass::Black);
  }
}

TEST(ClassifyPose, BlueWhenJointOneBeyondLimit) {
  const RobotModel m = demo_model();
  JointVector q{{deg_to_rad(175.0), 0.3, 0.4, 0.2, 0.8, -0.3}};
  const Configuration s = *config_of(m, q);
  const PoseAssessment a = assess_pose(m, forward_tcp(m, q), s);
  EXPECT_EQ(a.cls, PoseClass::Blue);
  EXPECT_NEAR(a.v, 0.0, 1e-9);
}

TEST(ClassifyPose, RedOutsideShell) {
  const RobotModel m = demo_model();
  const PoseAssessment a = assess_pose(m, Frame::translation(2000, 0, 0), Configuration(0));
  EXPECT_EQ(a.cls, PoseClass::Red);
  EXPECT_NEAR(a.v, std::hypot(1850.0, 100.0) - 875.0, 1e-9);
}

TEST(ClassifyPose, RedOnShoulderAxisWithDiagnostic) {
  const RobotModel m = RobotModel::defaults();
  const PoseAssessment a = assess_pose(m, Frame::translation(0, 0, 500), Configuration(0));
  EXPECT_EQ(a.cls, PoseClass::Red);
  ASSERT_TRUE(a.diagnostic);
  EXPECT_EQ(a.diagnostic->kind, IkErrorKind::SingularShoulder);
}

TEST(ClassifyMotion, WorstFrameWinsAndStartModeOnlySeesFirst) {
  const RobotModel m = RobotModel::defaults();
  MotionTask t;
  t.P0 = Vec3(800, 0, 0);
  t.delta_z = 500;  // top frame leaves the shell
  EXPECT_EQ(classify_motion(m, t, {}, ClassificationMode::FullMotion), PoseClass::Red);
  EXPECT_EQ(classify_motion(m, t, {}, ClassificationMode::StartFrame), PoseClass::Black);
  const MotionAssessment a = assess_motion(m, t, {});
  EXPECT_NEAR(a.max_abs_v, std::hypot(800.0, 500.0) - 875.0, 1e-9);
}

TEST(Sweep, SinglePointGrid) {
  const RobotModel m = demo_model();
  GridSpec g = demo_grid();
  g.Bx = g.By = 1;
  const GridReport r = sweep(m, g);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.before.red() + r.before.blue() + r.before.black(), 1);
  EXPECT_EQ(r.at(1, 1).position, g.point(1, 1));
}

TEST(Sweep, PointOrderIsKMajor) {
  const RobotModel m = demo_model();
  GridSpec g = coarse_demo();
  g.Bx = 2;
  g.By = 3;
  const GridReport r = sweep(m, g);
  ASSERT_EQ(r.points.size(), 6u);
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 3; ++l) {
      EXPECT_EQ(r.at(k, l).k, k);
      EXPECT_EQ(r.at(k, l).l, l);
    }
}

class CoarseSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    report_ = new GridReport(sweep(demo_model(), coarse_demo()));
  }
  static void TearDownTestSuite() { delete report_; }
  static GridReport* report_;
};
GridReport* CoarseSweep::report_ = nullptr;

TEST_F(CoarseSweep, ClassNeverGetsWorse) {
  for (const auto& p : report_->points) EXPECT_GE(p.class_after, p.class_before) << p.k << "," << p.l;
}

TEST_F(CoarseSweep, AdmissiblePointsKeepTaughtOrientation) {
  for (const auto& p : report_->points) {
    if (p.class_before != PoseClass::Black) continue;
    EXPECT_EQ(p.alpha, Alpha{});
    EXPECT_FALSE(p.optimized);
  }
}

TEST_F(CoarseSweep, UnreachablePointsDoNotMoveAway) {
  for (const auto& p : report_->points)
    if (p.class_after == PoseClass::Red) EXPECT_LE(p.residual_v, p.residual_v_initial);
}

TEST_F(CoarseSweep, CountsMatchPoints) {
  ClassCounts before, after;
  for (const auto& p : report_->points) {
    before.add(p.class_before);
    after.add(p.class_after);
  }
  EXPECT_EQ(before, report_->before);
  EXPECT_EQ(after, report_->after);
  EXPECT_GT(report_->after.black(), report_->before.black());
  EXPECT_GE(report_->wall_time, 0.0);
}

TEST_F(CoarseSweep, ReportedClassMatchesReclassification) {
  const RobotModel m = demo_model();
  const GridSpec g = coarse_demo();
  for (const auto& p : report_->points) {
    const MotionTask t = make_task(g, p.k, p.l, SweepOptions{});
    EXPECT_EQ(classify_motion(m, t, p.alpha), p.class_after);
  }
}

TEST_F(CoarseSweep, IndependentOfThreadCount) {
  SweepOptions o;
  o.threads = 4;
  const GridReport r = sweep(demo_model(), coarse_demo(), o);
  ASSERT_EQ(r.points.size(), report_->points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    EXPECT_EQ(r.points[i].alpha, report_->points[i].alpha);
    EXPECT_EQ(r.points[i].objective, report_->points[i].objective);
    EXPECT_EQ(r.points[i].class_after, report_->points[i].class_after);
  }
}

TEST(Sweep, StartFrameModeIsNoStricterThanFullMotion) {
  const RobotModel m = demo_model();
  SweepOptions o;
  o.mode = ClassificationMode::StartFrame;
  const GridReport start = sweep(m, coarse_demo(), o);
  o.mode = ClassificationMode::FullMotion;
  const GridReport full = sweep(m, coarse_demo(), o);
  for (std::size_t i = 0; i < start.points.size(); ++i)
    EXPECT_GE(start.points[i].class_before, full.points[i].class_before);
}

}  // namespace
}  // namespace vjoint
