#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vjoint/expected.hpp"
#include "vjoint/motion_objective.hpp"

namespace vjoint {

struct SolverOptions {
  /// Stop as soon as the objective drops below this. Defaults to
  /// admissibility_threshold(task).
  std::optional<double> success_tol;
  double grad_tol = 1e-8;
  int max_iter = 200;
  double fd_step = kGradientStep;
  /// Longest step taken in one iteration, rad.
  double max_step = kPi / 2.0;
  /// Multistart: skip the remaining starts once one reaches success_tol.
  bool stop_on_success = false;

  double success_threshold(const MotionTask& task) const {
    return success_tol ? *success_tol : admissibility_threshold(task);
  }
};

enum class StopReason { Success, SmallGradient, MaxIterations, Stagnation };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Success: return "success";
    case StopReason::SmallGradient: return "small-gradient";
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::Stagnation: return "stagnation";
  }
  return "unknown";
}

struct LocalResult {
  Alpha alpha;
  double value = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::Success;
  std::vector<double> trace;  // objective after each accepted step, starting value first
};

struct SolveError {
  IkError cause;
  Alpha at;
};

namespace detail {

inline Eigen::Matrix2d scaled_identity(const Eigen::Vector2d& g) {
  // first step of length 0.1 rad along -g
  const double n = g.norm();
  return Eigen::Matrix2d::Identity() * (n > 0.0 ? 0.1 / n : 1.0);
}

}  // namespace detail

/// Quasi-Newton (BFGS) descent with Armijo backtracking on the torus
/// (-pi, pi]^2. The recorded values never increase.
inline Expected<LocalResult, SolveError> minimize_from(const MotionTask& task, const RobotModel& model,
                                                        const Alpha& start, const SolverOptions& opts = {}) {
  const double tol = opts.success_threshold(task);
  Alpha x = start.wrapped();
  auto f0 = objective(task, x, model);
  if (!f0) return make_unexpected(SolveError{f0.error(), x});

  LocalResult out;
  double f = *f0;
  out.trace.push_back(f);
  auto finish = [&](StopReason reason) {
    out.alpha = x;
    out.value = f;
    out.reason = reason;
    return out;
  };
  if (f < tol) return finish(StopReason::Success);

  auto g0 = gradient(task, x, model, opts.fd_step);
  if (!g0) return make_unexpected(SolveError{g0.error(), x});
  Eigen::Vector2d g = *g0;
  Eigen::Matrix2d H = detail::scaled_identity(g);
  bool curvature_seen = false;
  int consecutive_failures = 0;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 30;
  constexpr double kMinStep = 1e-10;  // rad

  for (out.iterations = 0; out.iterations < opts.max_iter;) {
    if (g.norm() < opts.grad_tol) return finish(StopReason::SmallGradient);

    Eigen::Vector2d d = -H * g;
    if (g.dot(d) >= 0.0) {
      H = detail::scaled_identity(g);
      d = -H * g;
    }
    if (d.norm() > opts.max_step) d *= opts.max_step / d.norm();
    const double slope = g.dot(d);

    double t = 1.0;
    bool accepted = false;
    Alpha xn;
    double fn = 0.0;
    for (int ls = 0; ls < kMaxBacktracks && t * d.norm() > kMinStep; ++ls, t *= 0.5) {
      xn = Alpha::from(x.vec() + t * d).wrapped();
      const auto trial = objective(task, xn, model);
      if (trial && *trial < f && *trial <= f + kArmijo * t * slope) {
        fn = *trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // restart curvature once, then give up
      if (++consecutive_failures >= 2) return finish(StopReason::Stagnation);
      H = detail::scaled_identity(g);
      curvature_seen = false;
      continue;
    }
    consecutive_failures = 0;

    const auto gn = gradient(task, xn, model, opts.fd_step);
    ++out.iterations;
    const Eigen::Vector2d s = t * d;
    x = xn;
    f = fn;
    out.trace.push_back(f);
    if (f < tol) return finish(StopReason::Success);
    if (!gn) return finish(StopReason::Stagnation);

    const Eigen::Vector2d y = *gn - g;
    g = *gn;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!curvature_seen) {
        H = Eigen::Matrix2d::Identity() * (sy / y.dot(y));
        curvature_seen = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::Matrix2d V = Eigen::Matrix2d::Identity() - rho * y * s.transpose();
      H = V.transpose() * H * V + rho * s * s.transpose();
    }
  }
  return finish(StopReason::MaxIterations);
}

/// Start angles 0, 2pi/m, ..., wrapped into (-pi, pi]; the first is 0.
inline std::vector<double> start_angles(int m) {
  std::vector<double> a;
  for (int j = 0; j < m; ++j) a.push_back(wrap_angle(kTwoPi * j / m));
  return a;
}

struct StartRecord {
  Alpha start;
  Alpha alpha;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool ok = false;
  StopReason reason = StopReason::Stagnation;
  std::string diagnostic;
  std::vector<double> trace;
};

struct SolveReport {
  Alpha best;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;  // summed over starts
  int starts_tried = 0;
  bool converged = false;
  std::vector<StartRecord> history;
};

/// Values within this of the best count as ties; the earliest start wins.
inline constexpr double kTieTolerance = 1e-12;

/// Runs minimize_from from an m x m grid of starts (row-major, (0, 0) first)
/// and keeps the best result.
inline SolveReport multistart(const MotionTask& task, const RobotModel& model, int grid_m,
                              const SolverOptions& opts = {}) {
  SolveReport report;
  const std::vector<double> angles = start_angles(std::max(grid_m, 1));
  const double tol = opts.success_threshold(task);
  bool done = false;
  for (double a0 : angles) {
    for (double a1 : angles) {
      StartRecord rec;
      rec.start = {a0, a1};
      auto r = minimize_from(task, model, rec.start, opts);
      ++report.starts_tried;
      if (r) {
        rec.ok = true;
        rec.alpha = r->alpha;
        rec.value = r->value;
        rec.iterations = r->iterations;
        rec.reason = r->reason;
        rec.trace = std::move(r->trace);
        report.iterations += rec.iterations;
      } else {
        rec.diagnostic = r.error().cause.name();
      }
      report.history.push_back(std::move(rec));
      if (opts.stop_on_success && report.history.back().ok && report.history.back().value < tol) {
        done = true;
        break;
      }
    }
    if (done) break;
  }

  double min_value = std::numeric_limits<double>::infinity();
  for (const auto& h : report.history)
    if (h.ok) min_value = std::min(min_value, h.value);
  for (const auto& h : report.history) {
    if (h.ok && h.value <= min_value + kTieTolerance) {
      report.best = h.alpha;
      report.value = h.value;
      report.converged = h.reason != StopReason::MaxIterations;
      break;
    }
  }
  return report;
}

struct BruteForceResult {
  Alpha best;
  double value = std::numeric_limits<double>::infinity();
};

/// Grid angles -pi + 2pi (j + 1) / K, j = 0..K-1 (so pi is included, -pi is not).
inline double oracle_angle(int j, int K) { return -kPi + kTwoPi * (j + 1) / K; }

/// Exhaustive K x K evaluation; ties go to the smallest (a0, then a1).
inline BruteForceResult brute_force(const MotionTask& task, const RobotModel& model, int K) {
  BruteForceResult out;
  bool first = true;
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const Alpha a{oracle_angle(i, K), oracle_angle(j, K)};
      const auto f = objective(task, a, model);
      const double v = f ? *f : std::numeric_limits<double>::infinity();
      if (first || v < out.value) {
        out.best = a;
        out.value = v;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace vjoint
