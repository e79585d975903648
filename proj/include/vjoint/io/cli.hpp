#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vjoint/analytic_ik.hpp"
#include "vjoint/grid_sweep.hpp"
#include "vjoint/io/config.hpp"
#include "vjoint/io/report.hpp"
#include "vjoint/optimizer.hpp"
#include "vjoint/virtual_ik.hpp"

namespace vjoint::io {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

/// Absolute tolerance of the `oracle` check: multistart <= brute force + this.
inline constexpr double kOracleTolerance = 1e-6;

namespace detail {

using Json = nlohmann::ordered_json;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> mode;
  bool paper_strict = false;
  std::optional<int> threads;
};

inline void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("scenario", f.config_path, "Scenario YAML file")->required();
  cmd->add_option("--mode", f.mode, "Classification: full-motion or start-frame")
      ->check(CLI::IsMember({"full-motion", "start-frame"}));
  cmd->add_flag("--paper-strict", f.paper_strict, "Drop the joint-limit term (limit_weight = 0)");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
}

inline std::optional<ScenarioConfig> load(const CommonFlags& f, std::ostream& err) {
  auto cfg = load_config(f.config_path);
  if (!cfg) {
    err << "error: invalid configuration '" << f.config_path << "'\n" << cfg.error().what();
    return std::nullopt;
  }
  ScenarioConfig c = *cfg;
  if (f.mode) c.output.mode = *parse_mode(*f.mode);
  if (f.paper_strict) c.solver.limit_weight = 0.0;
  if (f.threads) c.output.threads = *f.threads;
  return c;
}

inline bool check_point(const ScenarioConfig& c, int k, int l, std::ostream& err) {
  if (k < 1 || k > c.box.bx || l < 1 || l > c.box.by) {
    err << "error: grid point (" << k << ", " << l << ") outside 1.." << c.box.bx << " x 1.." << c.box.by << "\n";
    return false;
  }
  return true;
}

inline Json counts_json(const ClassCounts& c) {
  return Json{{"red", c.red()}, {"blue", c.blue()}, {"black", c.black()}};
}

inline Json alpha_json(const Alpha& a) { return Json::array({a.a0, a.a1}); }

inline std::string resolve(const std::string& dir, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() || dir.empty() ? file : (std::filesystem::path(dir) / p).string();
}

inline int run_sweep(const ScenarioConfig& c, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const RobotModel model = c.robot_model();
  const GridReport report = sweep(model, c.grid(), c.sweep_options());
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      err << "error: " << out_dir << ": " << ec.message() << "\n";
      return kExitRuntime;
    }
  }
  const std::string csv = resolve(out_dir, c.output.csv);
  const std::string map = resolve(out_dir, c.output.map_svg);
  const std::string field = resolve(out_dir, c.output.field_svg);
  if (auto r = write_report_csv(report, csv); !r) {
    err << "error: " << r.error().what() << "\n";
    return kExitRuntime;
  }
  if (auto r = write_maps_svg(report, map, field); !r) {
    err << "error: " << r.error().what() << "\n";
    return kExitRuntime;
  }
  Json j{{"grid", {report.Bx, report.By}},
         {"mode", to_string(c.output.mode)},
         {"before", counts_json(report.before)},
         {"after", counts_json(report.after)},
         {"wall_time_s", report.wall_time},
         {"files", {csv, map, field}}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int run_point(const ScenarioConfig& c, int k, int l, std::ostream& out) {
  const RobotModel model = c.robot_model();
  const GridSpec grid = c.grid();
  const SweepOptions opts = c.sweep_options();
  const MotionTask task = make_task(grid, k, l, opts);
  const SolveReport rep = multistart(task, model, opts.grid_m, opts.solver);
  const GridPointResult gp = solve_grid_point(model, grid, k, l, opts);

  Json starts = Json::array();
  for (const auto& h : rep.history) {
    Json s{{"start", alpha_json(h.start)}, {"ok", h.ok}};
    if (h.ok) {
      s["alpha"] = alpha_json(h.alpha);
      s["value"] = h.value;
      s["iterations"] = h.iterations;
      s["reason"] = to_string(h.reason);
    } else {
      s["error"] = h.diagnostic;
    }
    starts.push_back(s);
  }
  Json j{{"k", k},
         {"l", l},
         {"position_mm", {gp.position.x(), gp.position.y(), gp.position.z()}},
         {"success_threshold", opts.solver.success_threshold(task)},
         {"solve",
          {{"best_alpha_rad", alpha_json(rep.best)},
           {"value", std::isfinite(rep.value) ? Json(rep.value) : Json(nullptr)},
           {"iterations", rep.iterations},
           {"starts_tried", rep.starts_tried},
           {"converged", rep.converged},
           {"starts", starts}}},
         {"grid_point",
          {{"class_before", to_string(gp.class_before)},
           {"class_after", to_string(gp.class_after)},
           {"alpha_rad", alpha_json(gp.alpha)},
           {"objective", gp.objective},
           {"residual_v_mm", gp.residual_v},
           {"note", gp.diagnostic}}}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int run_oracle(const ScenarioConfig& c, int k, int l, int K, std::ostream& out) {
  const RobotModel model = c.robot_model();
  SweepOptions opts = c.sweep_options();
  // full minimization from every start
  opts.solver.success_tol = 0.0;
  opts.solver.stop_on_success = false;
  const MotionTask task = make_task(c.grid(), k, l, opts);
  const SolveReport ms = multistart(task, model, opts.grid_m, opts.solver);
  const BruteForceResult bf = brute_force(task, model, K);
  const double diff = ms.value - bf.value;
  Json j{{"k", k},
         {"l", l},
         {"grid_m", opts.grid_m},
         {"K", K},
         {"multistart", {{"alpha_rad", alpha_json(ms.best)}, {"value", ms.value}}},
         {"brute_force", {{"alpha_rad", alpha_json(bf.best)}, {"value", bf.value}}},
         {"difference", diff},
         {"abs_difference", std::abs(diff)},
         {"tolerance", kOracleTolerance},
         {"multistart_not_worse", ms.value <= bf.value + kOracleTolerance}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int run_ik(const ScenarioConfig& c, const std::vector<double>& fr, int s, std::ostream& out) {
  const RobotModel model = c.robot_model();
  const Frame target{Rotation::from_rpy(deg_to_rad(fr[3]), deg_to_rad(fr[4]), deg_to_rad(fr[5])),
                     Vec3(fr[0], fr[1], fr[2])};
  const Configuration config(s);
  const auto q = inverse_kinematics(model, target, config);
  const auto vs = virtual_inverse(model, target, config, WristPolicy::Resolve);
  Json j{{"config", s}};
  if (vs) j["virtual"] = {{"v_mm", vs->v}, {"within_limits", vs->limits.within_limits}};
  if (!q) {
    j["error"] = {{"kind", q.error().name()}, {"radial_defect_mm", q.error().radial_defect}};
    out << j.dump(2) << "\n";
    return kExitRuntime;
  }
  Json rad = Json::array(), deg = Json::array(), viol = Json::array();
  const LimitReport lim = check_limits(model, *q);
  for (std::size_t i = 0; i < 6; ++i) {
    rad.push_back((*q)[i]);
    deg.push_back(rad_to_deg((*q)[i]));
    viol.push_back(lim.violation[i]);
  }
  j["q_rad"] = rad;
  j["q_deg"] = deg;
  j["within_limits"] = lim.within_limits;
  j["limit_violation_rad"] = viol;
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace detail

/// Command line driver. args excludes the program name.
/// Exit codes: 0 success, 2 usage or configuration error, 3 runtime error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Virtual-joint reachability sweeps for 6R pick-and-place lifts", "vjoint"};
  app.require_subcommand(1);

  detail::CommonFlags sweep_f, point_f, oracle_f, ik_f;
  std::string out_dir;
  int k = 0, l = 0, s = 0;
  std::optional<int> K;
  std::vector<double> frame;

  auto* sweep_cmd = app.add_subcommand("sweep", "Optimize every grid point and write CSV and SVG reports");
  detail::add_common(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--out-dir", out_dir, "Directory for relative output paths");

  auto* point_cmd = app.add_subcommand("point", "Solve one grid point and print the solver report");
  detail::add_common(point_cmd, point_f);
  point_cmd->add_option("--k", k, "Grid index along x (1-based)")->required();
  point_cmd->add_option("--l", l, "Grid index along y (1-based)")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare multistart with a brute-force grid search");
  detail::add_common(oracle_cmd, oracle_f);
  oracle_cmd->add_option("--k", k, "Grid index along x (1-based)")->required();
  oracle_cmd->add_option("--l", l, "Grid index along y (1-based)")->required();
  oracle_cmd->add_option("--K", K, "Brute-force samples per axis")->check(CLI::Range(2, 100000));

  auto* ik_cmd = app.add_subcommand("ik", "Backward transform of one TCP frame");
  detail::add_common(ik_cmd, ik_f);
  ik_cmd->add_option("--frame", frame, "x y z (mm) roll pitch yaw (deg)")->expected(6)->required();
  ik_cmd->add_option("--config", s, "Configuration 0..7")->required()->check(CLI::Range(0, 7));

  std::vector<std::string> argv_store{"vjoint"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*sweep_cmd) {
      auto c = detail::load(sweep_f, err);
      return c ? detail::run_sweep(*c, out_dir, out, err) : kExitConfig;
    }
    if (*point_cmd) {
      auto c = detail::load(point_f, err);
      if (!c || !detail::check_point(*c, k, l, err)) return kExitConfig;
      return detail::run_point(*c, k, l, out);
    }
    if (*oracle_cmd) {
      auto c = detail::load(oracle_f, err);
      if (!c || !detail::check_point(*c, k, l, err)) return kExitConfig;
      return detail::run_oracle(*c, k, l, K.value_or(c->solver.k_oracle), out);
    }
    if (*ik_cmd) {
      auto c = detail::load(ik_f, err);
      return c ? detail::run_ik(*c, frame, s, out) : kExitConfig;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace vjoint::io
