#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vjoint/expected.hpp"
#include "vjoint/frame.hpp"

namespace vjoint {

enum class JointType { Revolute, Prismatic };

/// One Denavit-Hartenberg row: A = Rz(theta) * Tz(d) * Tx(a) * Rx(alpha).
/// The joint variable is added to theta (revolute) or d (prismatic).
struct DHRow {
  double theta_offset = 0.0;  // rad
  double d = 0.0;             // mm
  double a = 0.0;             // mm
  double alpha = 0.0;         // rad
  JointType type = JointType::Revolute;
};

inline Frame dh_transform(const DHRow& row, double joint_value) {
  const bool revolute = row.type == JointType::Revolute;
  const double theta = row.theta_offset + (revolute ? joint_value : 0.0);
  const double d = row.d + (revolute ? 0.0 : joint_value);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Mat3 r;
  r << ct, -st * ca, st * sa,  //
      st, ct * ca, -ct * sa,   //
      0.0, sa, ca;
  return {Rotation::from_matrix_unchecked(r), Vec3(row.a * ct, row.a * st, d)};
}

/// Joint angles of the 6R arm, rad.
struct JointVector {
  std::array<double, 6> q{};

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }

  JointVector wrapped() const {
    JointVector out;
    for (std::size_t i = 0; i < 6; ++i) out.q[i] = wrap_angle(q[i]);
    return out;
  }
};

/// (q1, q2, q3, v, q4, q5, q6): the arm joints with the prismatic slack v (mm)
/// inserted between joints 3 and 4.
struct VirtualJointVector {
  std::array<double, 7> q{};

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }

  double slack() const { return q[3]; }

  static VirtualJointVector embed(const JointVector& j, double v) {
    return {{j[0], j[1], j[2], v, j[3], j[4], j[5]}};
  }

  JointVector arm() const { return {{q[0], q[1], q[2], q[4], q[5], q[6]}}; }
};

struct RobotParams {
  double l23 = 455.0;  // upper arm, mm
  double l35 = 420.0;  // forearm, mm
  std::array<double, 6> q_min{-0.95 * kPi, -0.95 * kPi, -0.95 * kPi,
                              -0.95 * kPi, -0.95 * kPi, -0.95 * kPi};
  std::array<double, 6> q_max{0.95 * kPi, 0.95 * kPi, 0.95 * kPi,
                              0.95 * kPi, 0.95 * kPi, 0.95 * kPi};
  Frame tool = Frame::identity();
};

/// 6R arm with a central wrist and the zero-offset geometry of
///
///   i | theta | d   | a   | alpha
///   1 | q1    | 0   | 0   |  pi/2
///   2 | q2    | 0   | l23 |  0
///   3 | q3    | 0   | 0   | -pi/2
///   4 | q4    | l35 | 0   |  pi/2
///   5 | q5    | 0   | 0   | -pi/2
///   6 | q6    | 0   | 0   |  0
///
/// The virtual arm inserts a prismatic row (theta 0, d = v) after row 3.
class RobotModel {
 public:
  static Expected<RobotModel, std::vector<std::string>> create(const RobotParams& p) {
    std::vector<std::string> problems;
    if (!(std::isfinite(p.l23) && p.l23 > 0.0)) problems.push_back("l23 must be > 0");
    if (!(std::isfinite(p.l35) && p.l35 > 0.0)) problems.push_back("l35 must be > 0");
    for (std::size_t i = 0; i < 6; ++i) {
      const std::string idx = std::to_string(i + 1);
      if (!(p.q_min[i] >= -kPi)) problems.push_back("q_min[" + idx + "] must be >= -pi");
      if (!(p.q_max[i] <= kPi)) problems.push_back("q_max[" + idx + "] must be <= pi");
      if (!(p.q_min[i] <= p.q_max[i])) problems.push_back("q_min[" + idx + "] must be <= q_max[" + idx + "]");
    }
    if (!p.tool.rotation.is_valid(1e-9)) problems.push_back("tool rotation is not orthonormal");
    if (!p.tool.position.allFinite()) problems.push_back("tool position must be finite");
    if (!problems.empty()) return make_unexpected(std::move(problems));
    return RobotModel(p);
  }

  /// Defaults: l23 = 455 mm, l35 = 420 mm, limits +-0.95 pi, identity tool.
  static RobotModel defaults() { return RobotModel(RobotParams{}); }

  const RobotParams& params() const { return p_; }
  double l23() const { return p_.l23; }
  double l35() const { return p_.l35; }
  const Frame& tool() const { return p_.tool; }
  const Frame& tool_inverse() const { return tool_inv_; }
  double q_min(std::size_t i) const { return p_.q_min[i]; }
  double q_max(std::size_t i) const { return p_.q_max[i]; }

  /// Wrist points reachable by joints 1-3 form the shell r_inner <= |w| <= r_outer.
  double r_inner() const { return std::abs(p_.l23 - p_.l35); }
  double r_outer() const { return p_.l23 + p_.l35; }

  const std::array<DHRow, 6>& dh() const { return dh_; }
  const std::array<DHRow, 7>& virtual_dh() const { return vdh_; }

  RobotModel with_tool(const Frame& tool) const {
    RobotParams p = p_;
    p.tool = tool;
    return RobotModel(p);
  }

 private:
  explicit RobotModel(const RobotParams& p) : p_(p), tool_inv_(p.tool.inverse()) {
    const double h = kPi / 2.0;
    dh_ = {{{0, 0, 0, h, JointType::Revolute},
            {0, 0, p.l23, 0, JointType::Revolute},
            {0, 0, 0, -h, JointType::Revolute},
            {0, p.l35, 0, h, JointType::Revolute},
            {0, 0, 0, -h, JointType::Revolute},
            {0, 0, 0, 0, JointType::Revolute}}};
    vdh_ = {{dh_[0], dh_[1], dh_[2], {0, 0, 0, 0, JointType::Prismatic}, dh_[3], dh_[4], dh_[5]}};
  }

  RobotParams p_;
  Frame tool_inv_;
  std::array<DHRow, 6> dh_{};
  std::array<DHRow, 7> vdh_{};
};

/// A1(q1) * ... * A6(q6); the flange frame, whose origin is the wrist point.
inline Frame forward_flange(const RobotModel& model, const JointVector& q) {
  Frame f = dh_transform(model.dh()[0], q[0]);
  for (std::size_t i = 1; i < 6; ++i) f = f * dh_transform(model.dh()[i], q[i]);
  return f;
}

inline Frame forward_tcp(const RobotModel& model, const JointVector& q) {
  return forward_flange(model, q) * model.tool();
}

/// Seven-row virtual chain composed with the tool.
inline Frame forward_virtual(const RobotModel& model, const VirtualJointVector& q) {
  Frame f = dh_transform(model.virtual_dh()[0], q[0]);
  for (std::size_t i = 1; i < 7; ++i) f = f * dh_transform(model.virtual_dh()[i], q[i]);
  return f * model.tool();
}

}  // namespace vjoint
