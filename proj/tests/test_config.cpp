#include <gtest/gtest.h>

#include <cstring>

#include "vjoint/io/config.hpp"

namespace vjoint::io {
namespace {

constexpr const char* kMinimal = R"(
robot:
  l23_mm: 455
  l35_mm: 420
box:
  position_mm: [400, -400, -100]
  bx: 3
  by: 2
  dx_mm: 25
  dy_mm: 25
)";

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& m : e.messages)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(ParseConfig, MinimalConfigGetsDefaults) {
  const auto c = parse_config(kMinimal);
  ASSERT_TRUE(c) << c.error().what();
  EXPECT_EQ(c->solver.n, 10);
  EXPECT_EQ(c->solver.eps, 0.1);
  EXPECT_EQ(c->solver.grid_m, 8);
  EXPECT_EQ(c->solver.k_oracle, 181);
  EXPECT_FALSE(c->solver.success_tol);
  EXPECT_EQ(c->output.mode, ClassificationMode::FullMotion);
  EXPECT_EQ(c->tool.position, Vec3::Zero());
  EXPECT_EQ(c->box.bx, 3);
  EXPECT_EQ(c->box.position, Vec3(400, -400, -100));
}

TEST(ParseConfig, DegreesStoredAsRadians) {
  const auto c = parse_config(std::string(kMinimal) + R"(
  q_rel_rpy_deg: [180, 0, 90]
)");
  ASSERT_TRUE(c) << c.error().what();
  EXPECT_DOUBLE_EQ(c->box.q_rel.values[0], kPi);
  EXPECT_DOUBLE_EQ(c->box.q_rel.values[2], kPi / 2);
}

TEST(ParseConfig, JointLimitsInDegrees) {
  const auto c = parse_config(R"(
robot:
  q_min_deg: [-170, -170, -170, -170, -170, -170]
  q_max_rad: [1, 1, 1, 1, 1, 1]
box: {bx: 1, by: 1}
)");
  ASSERT_TRUE(c) << c.error().what();
  EXPECT_DOUBLE_EQ(c->robot.q_min[3], deg_to_rad(-170));
  EXPECT_EQ(c->robot.q_max[5], 1.0);
  EXPECT_DOUBLE_EQ(c->robot_model().q_min(0), deg_to_rad(-170));
}

TEST(ParseConfig, ToolRoundTripsBitIdentically) {
  auto c = parse_config(std::string(kMinimal) + R"(
tool:
  position_mm: [150, 0, 100]
  rpy_deg: [10, 20, 30]
)");
  ASSERT_TRUE(c) << c.error().what();
  const auto back = parse_config(save_config(*c));
  ASSERT_TRUE(back) << back.error().what();
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(bit_equal(back->tool.position[i], c->tool.position[i]));
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(bit_equal(back->tool.orientation.values[i], c->tool.orientation.values[i]));
  EXPECT_EQ(back->tool.position, Vec3(150, 0, 100));
}

TEST(ParseConfig, FullRoundTrip) {
  ScenarioConfig c;
  c.robot.l23 = 455.123456789;
  c.robot.q_min.fill(-1.0 / 3.0);
  c.tool.orientation = {OrientationSpec::Kind::Quaternion, {0.1, 0.2, 0.3, 0.4}};
  c.box.q_rel = OrientationSpec::rpy(kPi, 0.1, -0.7);
  c.box.config = 5;
  c.solver.success_tol = 1e-7;
  c.solver.limit_weight = 0.0;
  c.output.mode = ClassificationMode::StartFrame;
  c.output.threads = 8;
  const auto back = parse_config(save_config(c));
  ASSERT_TRUE(back) << back.error().what();
  EXPECT_TRUE(bit_equal(back->robot.l23, c.robot.l23));
  EXPECT_TRUE(bit_equal(back->robot.q_min[2], c.robot.q_min[2]));
  EXPECT_EQ(back->tool.orientation.kind, OrientationSpec::Kind::Quaternion);
  EXPECT_EQ(back->tool.orientation.values, c.tool.orientation.values);
  EXPECT_EQ(back->box.q_rel.values, c.box.q_rel.values);
  EXPECT_EQ(back->box.config, 5);
  EXPECT_EQ(back->solver.success_tol, 1e-7);
  EXPECT_EQ(back->output.mode, ClassificationMode::StartFrame);
  EXPECT_EQ(back->output.threads, 8);
  EXPECT_EQ(save_config(*back), save_config(c));
}

TEST(ParseConfig, NegativeSpacingNamesKey) {
  const auto c = parse_config(R"(
robot: {}
box: {bx: 2, by: 2, dx_mm: -5, dy_mm: 0}
)");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().kind, ConfigError::Kind::Validation);
  EXPECT_TRUE(mentions(c.error(), "box.dx_mm"));
  EXPECT_TRUE(mentions(c.error(), "box.dy_mm"));
}

TEST(ParseConfig, UnknownKeyReportedWithLine) {
  const auto c = parse_config("robot: {}\nbox:\n  bx: 2\n  colour: red\n");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().kind, ConfigError::Kind::Parse);
  EXPECT_TRUE(mentions(c.error(), "line 4"));
  EXPECT_TRUE(mentions(c.error(), "box.colour"));
}

TEST(ParseConfig, UnknownSectionRejected) {
  const auto c = parse_config(std::string(kMinimal) + "plotting: {dpi: 300}\n");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "'plotting'"));
}

TEST(ParseConfig, DegreesAndRadiansTogetherRejected) {
  const auto c = parse_config(std::string(kMinimal) + "  rpy_deg: [0, 0, 0]\n  rpy_rad: [0, 0, 0]\n");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "mutually exclusive"));
}

TEST(ParseConfig, UnitlessAngleKeyRejected) {
  const auto c = parse_config(std::string(kMinimal) + "  rpy: [0, 0, 0]\n");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "box.rpy"));
}

TEST(ParseConfig, WrongTypesReported) {
  const auto c = parse_config(R"(
robot: {l23_mm: long}
box: {bx: 2.5, position_mm: [1, 2]}
)");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "robot.l23_mm"));
  EXPECT_TRUE(mentions(c.error(), "box.bx"));
  EXPECT_TRUE(mentions(c.error(), "box.position_mm"));
}

TEST(ParseConfig, SyntaxErrorHasLine) {
  const auto c = parse_config("robot:\n  l23_mm: [1, 2\nbox: {}\n");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().kind, ConfigError::Kind::Parse);
  EXPECT_TRUE(mentions(c.error(), "line "));
}

TEST(ParseConfig, MissingSectionsReported) {
  const auto c = parse_config("solver: {n: 5}\n");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "'robot'"));
  EXPECT_TRUE(mentions(c.error(), "'box'"));
}

TEST(ParseConfig, AllValidationProblemsListed) {
  const auto c = parse_config(R"(
robot: {l23_mm: -1, q_min_deg: [10, 0, 0, 0, 0, 0], q_max_deg: [0, 0, 0, 0, 0, 0]}
box: {config: 9}
solver: {n: 0, eps_mm: 0, grid_m: 0}
output: {threads: 0}
)");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().kind, ConfigError::Kind::Validation);
  for (const char* key : {"robot.l23_mm", "robot.q_min[0]", "box.config", "solver.n", "solver.eps_mm",
                          "solver.grid_m", "output.threads"})
    EXPECT_TRUE(mentions(c.error(), key)) << key;
}

TEST(ParseConfig, BadModeRejected) {
  const auto c = parse_config(std::string(kMinimal) + "output: {mode: sideways}\n");
  ASSERT_FALSE(c);
  EXPECT_TRUE(mentions(c.error(), "output.mode"));
}

TEST(ParseConfig, QuaternionNormalized) {
  const auto c = parse_config(std::string(kMinimal) + "tool: {quaternion_wxyz: [2, 0, 0, 2]}\n");
  ASSERT_TRUE(c) << c.error().what();
  const Rotation r = c->tool.orientation.rotation();
  EXPECT_LT(Rotation::angle_between(r, Rotation::about(Axis::Z, kPi / 2)), 1e-12);
}

TEST(LoadConfig, MissingFile) {
  const auto c = load_config("/nonexistent/scenario.yaml");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().kind, ConfigError::Kind::Io);
  EXPECT_TRUE(mentions(c.error(), "/nonexistent/scenario.yaml"));
}

TEST(LoadConfig, BundledDemo) {
  const auto c = load_config(std::string(VJOINT_DATA_DIR) + "/demo.yaml");
  ASSERT_TRUE(c) << c.error().what();
  EXPECT_EQ(c->box.bx, 25);
  EXPECT_EQ(c->box.by, 25);
  EXPECT_EQ(c->box.config, 6);
  EXPECT_EQ(c->tool.position, Vec3(150, 0, 100));
  const GridSpec g = c->grid();
  EXPECT_TRUE(g.validate().empty());
  EXPECT_EQ(c->sweep_options().N, 10);
}

}  // namespace
}  // namespace vjoint::io
