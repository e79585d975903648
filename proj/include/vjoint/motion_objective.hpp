#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "vjoint/analytic_ik.hpp"
#include "vjoint/expected.hpp"
#include "vjoint/frame.hpp"
#include "vjoint/kinematics.hpp"
#include "vjoint/virtual_ik.hpp"

namespace vjoint {

/// Rotations about the tool z axis at the start and end of the lift, rad.
struct Alpha {
  double a0 = 0.0;
  double a1 = 0.0;

  Alpha wrapped() const { return {wrap_angle(a0), wrap_angle(a1)}; }
  Eigen::Vector2d vec() const { return {a0, a1}; }
  static Alpha from(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }

  bool operator==(const Alpha&) const = default;
};

/// Linear lift from P0 to P0 + (0, 0, delta_z) at one grid point.
struct MotionTask {
  Rotation Q;                       // orientation before the free rotation
  Vec3 P0 = Vec3::Zero();           // mm
  double delta_z = 100.0;           // mm
  int N = 10;                       // N + 1 interpolation frames
  Configuration config;
  double eps = 0.1;                 // mm, slack smoothing
  double limit_weight = 1.0;        // 0 disables the joint-limit term
  double limit_scale = 1e4;         // mm^2 per rad^2
  double limit_eps = 1e-3;          // rad, limit smoothing
};

/// F_i = (Q * Rz(a0 + l_i (a1 - a0)), P0 + (0, 0, l_i dz)) with l_i = i / N.
/// Angles are wrapped into (-pi, pi] first.
inline Frame motion_frame(const MotionTask& task, const Alpha& a, int i) {
  const Alpha w = a.wrapped();
  const double lambda = static_cast<double>(i) / task.N;
  const double angle = w.a0 + lambda * (w.a1 - w.a0);
  return {task.Q * rot_axis(Axis::Z, angle), task.P0 + Vec3(0.0, 0.0, lambda * task.delta_z)};
}

inline std::vector<Frame> motion_frames(const MotionTask& task, const Alpha& a) {
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(task.N) + 1);
  for (int i = 0; i <= task.N; ++i) frames.push_back(motion_frame(task, a, i));
  return frames;
}

/// Smoothed squared excess over the joint limits: sum_j h(qmin - q)^2 + h(q - qmax)^2.
inline double smoothed_limit_sq(const RobotModel& model, const JointVector& q, double eps) {
  double sum = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    const double lo = smooth_hinge(model.q_min(j) - q[j], eps);
    const double hi = smooth_hinge(q[j] - model.q_max(j), eps);
    sum += lo * lo + hi * hi;
  }
  return sum;
}

struct ObjectiveTerms {
  double slack = 0.0;   // 1/2 sum of smoothed v_i^2
  double limits = 0.0;  // weighted limit penalty
  double total() const { return slack + limits; }
};

inline Expected<ObjectiveTerms, IkError> objective_terms(const MotionTask& task, const Alpha& a,
                                                         const RobotModel& model) {
  ObjectiveTerms t;
  for (int i = 0; i <= task.N; ++i) {
    const Frame f = motion_frame(task, a, i);
    const Vec3 w = wrist_point(model, f);
    if (std::hypot(w.x(), w.y()) < kShoulderSingularRadius)
      return make_unexpected(IkError{IkErrorKind::SingularShoulder, 0.0});
    t.slack += 0.5 * smoothed_vsq(model, w, task.eps);
    if (task.limit_weight > 0.0) {
      const auto sol = virtual_inverse(model, f, task.config, WristPolicy::Resolve);
      if (!sol) return make_unexpected(sol.error());
      t.limits += task.limit_weight * task.limit_scale * smoothed_limit_sq(model, sol->q.arm(), task.limit_eps);
    }
  }
  return t;
}

/// 1/2 sum_i h(v_i)^2 (+ weighted limit penalty). With limit_weight = 0 this is
/// exactly the smoothed slack objective.
inline Expected<double, IkError> objective(const MotionTask& task, const Alpha& a, const RobotModel& model) {
  auto t = objective_terms(task, a, model);
  if (!t) return make_unexpected(t.error());
  return t->total();
}

/// Objective value below which no frame of the motion can carry slack, and,
/// with the limit term active, no joint can exceed its limits: a single
/// violating frame contributes at least eps^2 / 8 (slack) or
/// weight * scale * limit_eps^2 / 4 (limits).
inline double admissibility_threshold(const MotionTask& task) {
  double t = task.eps * task.eps / 8.0;
  if (task.limit_weight > 0.0)
    t = std::min(t, task.limit_weight * task.limit_scale * task.limit_eps * task.limit_eps / 4.0);
  return t;
}

inline constexpr double kGradientStep = 1e-6;  // rad

/// Central-difference gradient with respect to (a0, a1).
inline Expected<Eigen::Vector2d, IkError> gradient(const MotionTask& task, const Alpha& a, const RobotModel& model,
                                                   double step = kGradientStep) {
  Eigen::Vector2d g;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e[k] = step;
    const auto fp = objective(task, Alpha::from(a.vec() + e), model);
    const auto fm = objective(task, Alpha::from(a.vec() - e), model);
    if (!fp) return make_unexpected(fp.error());
    if (!fm) return make_unexpected(fm.error());
    g[k] = (*fp - *fm) / (2.0 * step);
  }
  return g;
}

}  // namespace vjoint
