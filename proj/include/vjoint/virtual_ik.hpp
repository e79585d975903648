#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "vjoint/analytic_ik.hpp"
#include "vjoint/expected.hpp"
#include "vjoint/frame.hpp"
#include "vjoint/kinematics.hpp"

namespace vjoint {

struct WorkspaceRadii {
  double inner = 0.0;  // mm
  double outer = 0.0;  // mm
};

inline WorkspaceRadii workspace_radii(const RobotModel& model) { return {model.r_inner(), model.r_outer()}; }

/// Signed length change of the forearm that makes a wrist point reachable.
///
/// The arm reaches distance r iff |l23 - L| <= r <= l23 + L for forearm L, so the
/// smallest |v| is the clamp of l35 into [|l23 - r|, l23 + r], minus l35.
/// |v| = max(0, r - r_outer, r_inner - r).
inline double virtual_distance(const RobotModel& model, const Vec3& wrist) {
  const double r = wrist.norm();
  const double l23 = model.l23(), l35 = model.l35();
  return std::clamp(l35, std::abs(l23 - r), l23 + r) - l35;
}

/// Smooth hinge (x + sqrt(x^2 + eps^2)) / 2: C-infinity, tends to max(0, x).
inline double smooth_hinge(double x, double eps) {
  const double s = std::hypot(x, eps);
  // avoid cancellation for large negative x
  return x >= 0.0 ? 0.5 * (x + s) : 0.5 * eps * eps / (s - x);
}

/// Smoothed square of the slack: h(r - r_outer)^2 + h(r_inner - r)^2, mm^2.
inline double smoothed_vsq(const RobotModel& model, const Vec3& wrist, double eps) {
  const double r = wrist.norm();
  const double outer = smooth_hinge(r - model.r_outer(), eps);
  const double inner = smooth_hinge(model.r_inner() - r, eps);
  return outer * outer + inner * inner;
}

struct VirtualSolution {
  VirtualJointVector q;
  double v = 0.0;  // mm
  LimitReport limits;
  bool wrist_singular = false;
};

/// Backward transform of the virtual arm. Succeeds for every frame off the
/// joint-1 axis: the prismatic slack takes the smallest |v| for which the
/// triangle closes, and joints 4-6 match the orientation exactly.
inline Expected<VirtualSolution, IkError> virtual_inverse(const RobotModel& model, const Frame& tcp_target,
                                                          Configuration config,
                                                          WristPolicy policy = WristPolicy::Strict) {
  const Frame flange = tcp_target * model.tool_inverse();
  const Vec3& w = flange.position;
  const double v = virtual_distance(model, w);
  auto arm = detail::solve_arm(model.l23(), model.l35() + v, w, config, v != 0.0);
  if (!arm) return make_unexpected(arm.error());
  const Mat3 r03 = detail::frame3_rotation(arm->q1, arm->q2 + arm->q3);
  auto wrist = detail::solve_wrist(r03.transpose() * flange.rotation.matrix(), config, policy);
  if (!wrist) return make_unexpected(wrist.error());

  const JointVector q = JointVector{{arm->q1, arm->q2, arm->q3, wrist->q4, wrist->q5, wrist->q6}}.wrapped();
  VirtualSolution out;
  out.q = VirtualJointVector::embed(q, v);
  out.v = v;
  out.limits = check_limits(model, q);
  out.wrist_singular = wrist->singular;
  return out;
}

}  // namespace vjoint
