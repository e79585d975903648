#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vjoint/analytic_ik.hpp"
#include "vjoint/frame.hpp"
#include "vjoint/kinematics.hpp"
#include "vjoint/motion_objective.hpp"
#include "vjoint/optimizer.hpp"
#include "vjoint/virtual_ik.hpp"

namespace vjoint {

/// Ordered Red < Blue < Black so that the worst class of a motion is the minimum.
enum class PoseClass { Red = 0, Blue = 1, Black = 2 };

inline const char* to_string(PoseClass c) {
  switch (c) {
    case PoseClass::Red: return "red";
    case PoseClass::Blue: return "blue";
    case PoseClass::Black: return "black";
  }
  return "unknown";
}

/// Box of Bx x By identical parts. Grid point (k, l), 1-based, sits at
/// C * ((k - 1) Dx, (l - 1) Dy, 0).
struct GridSpec {
  Frame C;
  int Bx = 1;
  int By = 1;
  double Dx = 10.0;  // mm
  double Dy = 10.0;  // mm
  double delta_z = 100.0;  // mm
  Rotation Q_rel;
  Configuration config;

  std::vector<std::string> validate() const {
    std::vector<std::string> problems;
    if (Bx < 1) problems.push_back("Bx must be >= 1");
    if (By < 1) problems.push_back("By must be >= 1");
    if (!(Dx > 0.0)) problems.push_back("Dx must be > 0");
    if (!(Dy > 0.0)) problems.push_back("Dy must be > 0");
    if (!std::isfinite(delta_z)) problems.push_back("delta_z must be finite");
    if (!C.rotation.is_valid()) problems.push_back("box rotation is not orthonormal");
    if (!Q_rel.is_valid()) problems.push_back("Q_rel is not orthonormal");
    return problems;
  }

  Vec3 point(int k, int l) const { return C.apply(Vec3((k - 1) * Dx, (l - 1) * Dy, 0.0)); }
  Rotation orientation() const { return C.rotation * Q_rel; }
};

enum class ClassificationMode { FullMotion, StartFrame };

struct PoseAssessment {
  PoseClass cls = PoseClass::Red;
  double v = 0.0;  // mm, exact slack
  std::optional<IkError> diagnostic;
};

/// Slack larger than this (mm) means the wrist cannot reach the frame.
inline constexpr double kDefaultSlackTolerance = 1e-6;

inline PoseAssessment assess_pose(const RobotModel& model, const Frame& frame, Configuration config,
                                  double v_tol = kDefaultSlackTolerance) {
  const auto sol = virtual_inverse(model, frame, config, WristPolicy::Resolve);
  if (!sol) return {PoseClass::Red, std::numeric_limits<double>::infinity(), sol.error()};
  if (std::abs(sol->v) > v_tol) return {PoseClass::Red, sol->v, std::nullopt};
  if (!sol->limits.within_limits) return {PoseClass::Blue, sol->v, std::nullopt};
  return {PoseClass::Black, sol->v, std::nullopt};
}

/// Red: wrist outside the shell; Blue: reachable but outside joint limits; Black: admissible.
inline PoseClass classify_pose(const RobotModel& model, const Frame& frame, Configuration config,
                               double v_tol = kDefaultSlackTolerance) {
  return assess_pose(model, frame, config, v_tol).cls;
}

struct MotionAssessment {
  PoseClass cls = PoseClass::Black;
  double max_abs_v = 0.0;  // mm
};

inline MotionAssessment assess_motion(const RobotModel& model, const MotionTask& task, const Alpha& a,
                                      ClassificationMode mode = ClassificationMode::FullMotion,
                                      double v_tol = kDefaultSlackTolerance) {
  MotionAssessment out;
  const int last = mode == ClassificationMode::StartFrame ? 0 : task.N;
  for (int i = 0; i <= last; ++i) {
    const PoseAssessment p = assess_pose(model, motion_frame(task, a, i), task.config, v_tol);
    out.cls = std::min(out.cls, p.cls);
    out.max_abs_v = std::max(out.max_abs_v, std::abs(p.v));
  }
  return out;
}

/// Worst class over the motion frames (or the first frame only in StartFrame mode).
inline PoseClass classify_motion(const RobotModel& model, const MotionTask& task, const Alpha& a,
                                 ClassificationMode mode = ClassificationMode::FullMotion,
                                 double v_tol = kDefaultSlackTolerance) {
  return assess_motion(model, task, a, mode, v_tol).cls;
}

struct SweepOptions {
  SolverOptions solver{.stop_on_success = true};
  int grid_m = 8;
  ClassificationMode mode = ClassificationMode::FullMotion;
  int threads = 1;
  double v_tol = kDefaultSlackTolerance;
  // task parameters shared by all grid points
  int N = 10;
  double eps = 0.1;
  double limit_weight = 1.0;
  double limit_scale = 1e4;
  double limit_eps = 1e-3;
};

inline MotionTask make_task(const GridSpec& grid, int k, int l, const SweepOptions& opts) {
  MotionTask t;
  t.Q = grid.orientation();
  t.P0 = grid.point(k, l);
  t.delta_z = grid.delta_z;
  t.N = opts.N;
  t.config = grid.config;
  t.eps = opts.eps;
  t.limit_weight = opts.limit_weight;
  t.limit_scale = opts.limit_scale;
  t.limit_eps = opts.limit_eps;
  return t;
}

struct GridPointResult {
  int k = 1;
  int l = 1;
  Vec3 position = Vec3::Zero();
  PoseClass class_before = PoseClass::Red;
  PoseClass class_after = PoseClass::Red;
  Alpha alpha;
  double objective = 0.0;
  double residual_v = 0.0;          // max |v_i| at alpha, mm
  double residual_v_initial = 0.0;  // max |v_i| at (0, 0), mm
  bool optimized = false;
  int iterations = 0;
  int starts_tried = 0;
  std::string diagnostic;
};

struct ClassCounts {
  std::array<int, 3> n{};  // indexed by PoseClass
  int red() const { return n[0]; }
  int blue() const { return n[1]; }
  int black() const { return n[2]; }
  void add(PoseClass c) { ++n[static_cast<std::size_t>(c)]; }
  bool operator==(const ClassCounts&) const = default;
};

struct GridReport {
  int Bx = 0;
  int By = 0;
  std::vector<GridPointResult> points;  // k-major: index (k - 1) * By + (l - 1)
  ClassCounts before;
  ClassCounts after;
  double wall_time = 0.0;  // s

  const GridPointResult& at(int k, int l) const {
    return points[static_cast<std::size_t>((k - 1) * By + (l - 1))];
  }
};

/// Optimizes one grid point. The taught orientation (0, 0) is kept when it is
/// already admissible, and also when the optimum would be classified worse or,
/// for points that stay unreachable, would leave the wrist farther away.
inline GridPointResult solve_grid_point(const RobotModel& model, const GridSpec& grid, int k, int l,
                                        const SweepOptions& opts) {
  GridPointResult r;
  r.k = k;
  r.l = l;
  r.position = grid.point(k, l);
  const MotionTask task = make_task(grid, k, l, opts);
  const Alpha zero{};
  const MotionAssessment initial = assess_motion(model, task, zero, opts.mode, opts.v_tol);
  r.class_before = initial.cls;
  r.residual_v_initial = initial.max_abs_v;

  auto keep_initial = [&](std::string why) {
    r.alpha = zero;
    r.class_after = initial.cls;
    r.residual_v = initial.max_abs_v;
    const auto f = objective(task, zero, model);
    r.objective = f ? *f : std::numeric_limits<double>::infinity();
    if (!why.empty()) r.diagnostic = std::move(why);
  };

  if (initial.cls == PoseClass::Black) {
    keep_initial("");
    return r;
  }

  const SolveReport sol = multistart(task, model, opts.grid_m, opts.solver);
  r.optimized = true;
  r.iterations = sol.iterations;
  r.starts_tried = sol.starts_tried;
  if (!std::isfinite(sol.value)) {
    keep_initial("no start could be evaluated");
    return r;
  }
  const MotionAssessment best = assess_motion(model, task, sol.best, opts.mode, opts.v_tol);
  if (best.cls < initial.cls) {
    keep_initial("optimum classified worse than the initial orientation");
    return r;
  }
  if (best.cls == PoseClass::Red && initial.cls == PoseClass::Red && best.max_abs_v > initial.max_abs_v) {
    keep_initial("optimum increases the wrist distance");
    return r;
  }
  r.alpha = sol.best;
  r.objective = sol.value;
  r.class_after = best.cls;
  r.residual_v = best.max_abs_v;
  return r;
}

/// Optimizes every grid point. Points are independent; the result does not
/// depend on the thread count.
inline GridReport sweep(const RobotModel& model, const GridSpec& grid, const SweepOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  GridReport report;
  report.Bx = grid.Bx;
  report.By = grid.By;
  const std::size_t total = static_cast<std::size_t>(grid.Bx) * static_cast<std::size_t>(grid.By);
  report.points.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int k = static_cast<int>(idx / static_cast<std::size_t>(grid.By)) + 1;
      const int l = static_cast<int>(idx % static_cast<std::size_t>(grid.By)) + 1;
      report.points[idx] = solve_grid_point(model, grid, k, l, opts);
    }
  };
  const int n_threads = std::clamp(opts.threads, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  for (const auto& p : report.points) {
    report.before.add(p.class_before);
    report.after.add(p.class_after);
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace vjoint
