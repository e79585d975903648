#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vjoint/expected.hpp"
#include "vjoint/frame.hpp"
#include "vjoint/kinematics.hpp"

namespace vjoint {

/// One of the eight backward-transform branches.
///   bit0: shoulder  (0 = wrist in front of joint 1, 1 = behind)
///   bit1: elbow     (0 = cos q3 >= 0, 1 = cos q3 < 0)
///   bit2: wrist     (0 = q5 >= 0, 1 = q5 < 0)
class Configuration {
 public:
  constexpr Configuration() = default;
  constexpr explicit Configuration(int s) : s_(s & 7) {}
  static constexpr Configuration from_bits(bool shoulder_behind, bool elbow_down, bool wrist_flipped) {
    return Configuration((shoulder_behind ? 1 : 0) | (elbow_down ? 2 : 0) | (wrist_flipped ? 4 : 0));
  }

  constexpr int value() const { return s_; }
  constexpr bool shoulder_behind() const { return (s_ & 1) != 0; }
  constexpr bool elbow_down() const { return (s_ & 2) != 0; }
  constexpr bool wrist_flipped() const { return (s_ & 4) != 0; }

  constexpr bool operator==(const Configuration&) const = default;

 private:
  int s_ = 0;
};

enum class IkErrorKind { WristUnreachable, SingularShoulder, SingularWrist };

struct IkError {
  IkErrorKind kind = IkErrorKind::WristUnreachable;
  /// Distance of the wrist point from the reachable shell (WristUnreachable), mm.
  double radial_defect = 0.0;

  std::string name() const {
    switch (kind) {
      case IkErrorKind::WristUnreachable: return "WristUnreachable";
      case IkErrorKind::SingularShoulder: return "SingularShoulder";
      case IkErrorKind::SingularWrist: return "SingularWrist";
    }
    return "Unknown";
  }
};

inline constexpr double kShoulderSingularRadius = 1e-7;  // mm, wrist xy-radius
inline constexpr double kWristSingularSine = 1e-10;       // |sin q5|

struct LimitReport {
  std::array<double, 6> violation{};  // rad, >= 0
  bool within_limits = true;

  double max_violation() const { return *std::max_element(violation.begin(), violation.end()); }
};

inline LimitReport check_limits(const RobotModel& model, const JointVector& q) {
  LimitReport r;
  for (std::size_t i = 0; i < 6; ++i) {
    r.violation[i] = std::max({0.0, model.q_min(i) - q[i], q[i] - model.q_max(i)});
    if (r.violation[i] > 0.0) r.within_limits = false;
  }
  return r;
}

/// Flange origin for a desired TCP frame. With d5 = d6 = a4 = a5 = a6 = 0 this
/// is the intersection of the wrist axes.
inline Vec3 wrist_point(const RobotModel& model, const Frame& tcp_target) {
  return tcp_target.position + tcp_target.rotation * model.tool_inverse().position;
}

/// What to do when q5 is singular: report SingularWrist, or fix q4 = 0 and let
/// q6 take the residual rotation.
enum class WristPolicy { Strict, Resolve };

namespace detail {

struct ArmSolution {
  double q1, q2, q3;
};

/// Joints 1-3 placing the wrist at `wrist` with forearm length `forearm`.
/// The triangle cosine is clamped, so callers must check reachability first.
/// `on_shell` marks a wrist known to lie on the shell boundary: the arm is then
/// fully stretched or folded and s3 is exactly +-1.
inline Expected<ArmSolution, IkError> solve_arm(double l23, double forearm, const Vec3& wrist,
                                                Configuration config, bool on_shell = false) {
  const double rxy = std::hypot(wrist.x(), wrist.y());
  if (rxy < kShoulderSingularRadius) return make_unexpected(IkError{IkErrorKind::SingularShoulder, 0.0});
  double q1, rho;
  if (config.shoulder_behind()) {
    q1 = std::atan2(-wrist.y(), -wrist.x());
    rho = -rxy;
  } else {
    q1 = std::atan2(wrist.y(), wrist.x());
    rho = rxy;
  }
  const double z = wrist.z();
  const double r2 = rho * rho + z * z;
  // r^2 = l23^2 + L^2 - 2 l23 L sin q3
  double s3 = forearm > 0.0 ? (l23 * l23 + forearm * forearm - r2) / (2.0 * l23 * forearm) : 0.0;
  s3 = on_shell ? std::copysign(1.0, s3) : std::clamp(s3, -1.0, 1.0);
  double c3 = std::sqrt(std::max(0.0, 1.0 - s3 * s3));
  if (config.elbow_down()) c3 = -c3;
  const double q3 = std::atan2(s3, c3);
  // (rho, z) = Rot(q2) * (l23 - L s3, L c3)
  const double q2 = std::atan2(z, rho) - std::atan2(forearm * c3, l23 - forearm * s3);
  return ArmSolution{q1, q2, q3};
}

/// Orientation of frame 3 (after joint 3) relative to the base.
inline Mat3 frame3_rotation(double q1, double q23) {
  const double c1 = std::cos(q1), s1 = std::sin(q1);
  const double c = std::cos(q23), s = std::sin(q23);
  // Rz(q1) Rx(pi/2) Rz(q2+q3) Rx(-pi/2)
  Mat3 r;
  r << c1 * c, -s1, -c1 * s,  //
      s1 * c, c1, -s1 * s,    //
      s, 0.0, c;
  return r;
}

struct WristSolution {
  double q4, q5, q6;
  bool singular = false;
};

/// Joints 4-6 from the wrist rotation M = R03^T R_flange = Rz(q4) Ry(-q5) Rz(q6).
/// Under WristPolicy::Resolve a singular wrist gets q4 = 0 and q6 absorbs the
/// remaining rotation about z.
inline Expected<WristSolution, IkError> solve_wrist(const Mat3& m, Configuration config,
                                                    WristPolicy policy) {
  const double sin_abs = std::hypot(m(0, 2), m(1, 2));
  if (sin_abs < kWristSingularSine) {
    if (policy == WristPolicy::Strict) return make_unexpected(IkError{IkErrorKind::SingularWrist, 0.0});
    const double q5 = std::atan2(0.0, m(2, 2));  // 0 or pi
    // Rz(q6) = (Ry(-q5))^T M with q4 = 0
    const double c5 = std::cos(q5), s5 = std::sin(q5);
    const double x00 = c5 * m(0, 0) + s5 * m(2, 0);
    const double x10 = m(1, 0);
    return WristSolution{0.0, q5, std::atan2(x10, x00), true};
  }
  const double sign = config.wrist_flipped() ? -1.0 : 1.0;
  const double s5 = sign * sin_abs;
  const double q5 = std::atan2(s5, m(2, 2));
  const double q4 = std::atan2(-m(1, 2) * sign, -m(0, 2) * sign);
  const double q6 = std::atan2(-m(2, 1) * sign, m(2, 0) * sign);
  return WristSolution{q4, q5, q6, false};
}

}  // namespace detail

/// Closed-form backward transform for one configuration. Joint limits are not
/// enforced; see check_limits().
inline Expected<JointVector, IkError> inverse_kinematics(const RobotModel& model, const Frame& tcp_target,
                                                         Configuration config) {
  const Frame flange = tcp_target * model.tool_inverse();
  const Vec3& w = flange.position;
  const double r = w.norm();
  if (r > model.r_outer() || r < model.r_inner()) {
    const double defect = std::max(r - model.r_outer(), model.r_inner() - r);
    return make_unexpected(IkError{IkErrorKind::WristUnreachable, defect});
  }
  auto arm = detail::solve_arm(model.l23(), model.l35(), w, config);
  if (!arm) return make_unexpected(arm.error());
  const Mat3 r03 = detail::frame3_rotation(arm->q1, arm->q2 + arm->q3);
  auto wrist = detail::solve_wrist(r03.transpose() * flange.rotation.matrix(), config,
                                   WristPolicy::Strict);
  if (!wrist) return make_unexpected(wrist.error());
  return JointVector{{arm->q1, arm->q2, arm->q3, wrist->q4, wrist->q5, wrist->q6}}.wrapped();
}

/// Branch of the backward transform that produces q.
inline Expected<Configuration, IkError> config_of(const RobotModel& model, const JointVector& q) {
  const double s5 = std::sin(q[4]);
  if (std::abs(s5) < kWristSingularSine) return make_unexpected(IkError{IkErrorKind::SingularWrist, 0.0});
  // signed horizontal reach of the wrist point in the joint-1 plane
  const double rho = model.l23() * std::cos(q[1]) - model.l35() * std::sin(q[1] + q[2]);
  if (std::abs(rho) < kShoulderSingularRadius) {
    return make_unexpected(IkError{IkErrorKind::SingularShoulder, 0.0});
  }
  return Configuration::from_bits(rho < 0.0, std::cos(q[2]) < 0.0, s5 < 0.0);
}

}  // namespace vjoint
