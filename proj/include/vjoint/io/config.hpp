#pragma once

// Scenario files: YAML with unit-suffixed keys. Lengths are *_mm; angles are
// either *_deg or *_rad (never both) and are stored in radians.
//
//   robot:  l23_mm, l35_mm, q_min_deg|rad [6], q_max_deg|rad [6]
//   tool:   position_mm [3], rpy_deg|rpy_rad [3] | quaternion_wxyz [4]
//   box:    position_mm [3], rpy_deg|rpy_rad [3] | quaternion_wxyz [4], bx, by,
//           dx_mm, dy_mm, delta_z_mm, q_rel_rpy_deg|q_rel_rpy_rad [3] |
//           q_rel_quaternion_wxyz [4], config
//   solver: n, eps_mm, limit_weight, limit_scale_mm2_per_rad2, limit_eps_rad,
//           grid_m, k_oracle, success_tol, grad_tol, max_iter, v_tol_mm
//   output: csv, map_svg, field_svg, mode (full-motion|start-frame), threads
//
// RPY angles compose as Rz(yaw) * Ry(pitch) * Rx(roll).

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "vjoint/expected.hpp"
#include "vjoint/frame.hpp"
#include "vjoint/grid_sweep.hpp"
#include "vjoint/kinematics.hpp"

namespace vjoint::io {

struct OrientationSpec {
  enum class Kind { Rpy, Quaternion };
  Kind kind = Kind::Rpy;
  std::array<double, 4> values{};  // roll, pitch, yaw (rad) or w, x, y, z

  static OrientationSpec rpy(double roll, double pitch, double yaw) { return {Kind::Rpy, {roll, pitch, yaw, 0.0}}; }

  Rotation rotation() const {
    if (kind == Kind::Quaternion) return Rotation::from_quaternion(values[0], values[1], values[2], values[3]);
    return Rotation::from_rpy(values[0], values[1], values[2]);
  }
};

struct ScenarioConfig {
  struct Robot {
    double l23 = RobotParams{}.l23;
    double l35 = RobotParams{}.l35;
    std::array<double, 6> q_min = RobotParams{}.q_min;
    std::array<double, 6> q_max = RobotParams{}.q_max;
  } robot;

  struct Tool {
    Vec3 position = Vec3::Zero();
    OrientationSpec orientation;
  } tool;

  struct Box {
    Vec3 position = Vec3::Zero();
    OrientationSpec orientation;
    int bx = 1;
    int by = 1;
    double dx = 10.0;
    double dy = 10.0;
    double delta_z = 100.0;
    OrientationSpec q_rel;
    int config = 0;
  } box;

  struct Solver {
    int n = 10;
    double eps = 0.1;
    double limit_weight = 1.0;
    double limit_scale = 1e4;
    double limit_eps = 1e-3;
    int grid_m = 8;
    int k_oracle = 181;
    std::optional<double> success_tol;
    double grad_tol = 1e-8;
    int max_iter = 200;
    double v_tol = kDefaultSlackTolerance;
  } solver;

  struct Output {
    std::string csv = "report.csv";
    std::string map_svg = "reachability.svg";
    std::string field_svg = "direction_field.svg";
    ClassificationMode mode = ClassificationMode::FullMotion;
    int threads = 1;
  } output;

  RobotModel robot_model() const {
    RobotParams p;
    p.l23 = robot.l23;
    p.l35 = robot.l35;
    p.q_min = robot.q_min;
    p.q_max = robot.q_max;
    p.tool = Frame{tool.orientation.rotation(), tool.position};
    return RobotModel::create(p).value();
  }

  GridSpec grid() const {
    GridSpec g;
    g.C = Frame{box.orientation.rotation(), box.position};
    g.Bx = box.bx;
    g.By = box.by;
    g.Dx = box.dx;
    g.Dy = box.dy;
    g.delta_z = box.delta_z;
    g.Q_rel = box.q_rel.rotation();
    g.config = Configuration(box.config);
    return g;
  }

  SweepOptions sweep_options() const {
    SweepOptions o;
    o.solver.success_tol = solver.success_tol;
    o.solver.grad_tol = solver.grad_tol;
    o.solver.max_iter = solver.max_iter;
    o.grid_m = solver.grid_m;
    o.mode = output.mode;
    o.threads = output.threads;
    o.v_tol = solver.v_tol;
    o.N = solver.n;
    o.eps = solver.eps;
    o.limit_weight = solver.limit_weight;
    o.limit_scale = solver.limit_scale;
    o.limit_eps = solver.limit_eps;
    return o;
  }
};

struct ConfigError {
  enum class Kind { Parse, Validation, Io };
  Kind kind = Kind::Parse;
  std::vector<std::string> messages;

  std::string what() const {
    std::string out;
    for (const auto& m : messages) out += m + "\n";
    return out;
  }
};

inline const char* to_string(ClassificationMode m) {
  return m == ClassificationMode::StartFrame ? "start-frame" : "full-motion";
}

inline std::optional<ClassificationMode> parse_mode(const std::string& s) {
  if (s == "full-motion") return ClassificationMode::FullMotion;
  if (s == "start-frame") return ClassificationMode::StartFrame;
  return std::nullopt;
}

namespace detail {

inline std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? std::string() : "line " + std::to_string(m.line + 1) + ": ";
}

/// One YAML mapping; remembers which keys were read so leftovers can be flagged.
class Section {
 public:
  Section(YAML::Node node, std::string path, std::vector<std::string>& errors)
      : node_(std::move(node)), path_(std::move(path)), errors_(&errors) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      error(node_, path_ + " must be a mapping");
      node_ = YAML::Node();
    }
  }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key]; }

  Section child(const std::string& key) {
    used_.insert(key);
    return Section(node_.IsMap() ? node_[key] : YAML::Node(), qualified(key), *errors_);
  }

  void number(const std::string& key, double& out) {
    if (auto n = fetch(key)) convert(*n, key, out);
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (auto n = fetch(key)) {
      double v = 0.0;
      if (convert(*n, key, v)) out = v;
    }
  }

  void integer(const std::string& key, int& out) {
    if (auto n = fetch(key)) {
      try {
        out = n->as<int>();
      } catch (const YAML::Exception&) {
        error(*n, "key '" + qualified(key) + "': expected an integer");
      }
    }
  }

  void text(const std::string& key, std::string& out) {
    if (auto n = fetch(key)) {
      if (!n->IsScalar()) {
        error(*n, "key '" + qualified(key) + "': expected a string");
        return;
      }
      out = n->Scalar();
    }
  }

  template <std::size_t N>
  bool numbers(const std::string& key, std::array<double, N>& out, double scale = 1.0) {
    auto n = fetch(key);
    if (!n) return false;
    if (!n->IsSequence() || n->size() != N) {
      error(*n, "key '" + qualified(key) + "': expected a list of " + std::to_string(N) + " numbers");
      return false;
    }
    std::array<double, N> tmp{};
    for (std::size_t i = 0; i < N; ++i)
      if (!convert((*n)[i], key, tmp[i])) return false;
    for (std::size_t i = 0; i < N; ++i) out[i] = tmp[i] * scale;
    return true;
  }

  void vec3(const std::string& key, Vec3& out) {
    std::array<double, 3> a{};
    if (numbers(key, a)) out = Vec3(a[0], a[1], a[2]);
  }

  /// Reads base_deg or base_rad into radians.
  template <std::size_t N>
  bool angles(const std::string& base, std::array<double, N>& out) {
    const bool deg = has(base + "_deg"), rad = has(base + "_rad");
    if (deg && rad) {
      error(node_[base + "_deg"], "keys '" + qualified(base + "_deg") + "' and '" + qualified(base + "_rad") +
                                      "' are mutually exclusive");
      used_.insert(base + "_deg");
      used_.insert(base + "_rad");
      return false;
    }
    if (deg) return numbers(base + "_deg", out, kPi / 180.0);
    if (rad) return numbers(base + "_rad", out);
    return false;
  }

  void orientation(const std::string& prefix, OrientationSpec& out) {
    std::array<double, 3> rpy{};
    const std::string rpy_key = prefix + "rpy";
    const std::string quat_key = prefix + "quaternion_wxyz";
    const bool has_rpy = has(rpy_key + "_deg") || has(rpy_key + "_rad");
    if (has_rpy && has(quat_key)) {
      error(node_[quat_key], "key '" + qualified(quat_key) + "' conflicts with '" + qualified(rpy_key) + "_*'");
      used_.insert(quat_key);
    }
    if (angles(rpy_key, rpy)) out = OrientationSpec::rpy(rpy[0], rpy[1], rpy[2]);
    std::array<double, 4> q{};
    if (!has_rpy && numbers(quat_key, q)) {
      if (!(std::hypot(std::hypot(q[0], q[1]), std::hypot(q[2], q[3])) > 0.0))
        error(node_[quat_key], "key '" + qualified(quat_key) + "': quaternion must be non-zero");
      else
        out = {OrientationSpec::Kind::Quaternion, q};
    }
  }

  /// Flags keys that were never read.
  void finish() {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!used_.count(key)) error(kv.first, "unknown key '" + qualified(key) + "'");
    }
  }

 private:
  std::optional<YAML::Node> fetch(const std::string& key) {
    used_.insert(key);
    if (!node_.IsMap()) return std::nullopt;
    YAML::Node n = node_[key];
    if (!n) return std::nullopt;
    return n;
  }

  bool convert(const YAML::Node& n, const std::string& key, double& out) {
    try {
      out = n.as<double>();
      return true;
    } catch (const YAML::Exception&) {
      error(n, "key '" + qualified(key) + "': expected a number");
      return false;
    }
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void error(const YAML::Node& n, const std::string& msg) { errors_->push_back(where(n) + msg); }

  YAML::Node node_;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> used_;
};

inline std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> v;
  auto need = [&v](bool ok, const std::string& msg) {
    if (!ok) v.push_back(msg);
  };
  need(std::isfinite(c.robot.l23) && c.robot.l23 > 0.0, "robot.l23_mm must be > 0");
  need(std::isfinite(c.robot.l35) && c.robot.l35 > 0.0, "robot.l35_mm must be > 0");
  for (std::size_t i = 0; i < 6; ++i) {
    const std::string j = "[" + std::to_string(i) + "]";
    need(c.robot.q_min[i] >= -kPi - 1e-12, "robot.q_min" + j + " must be >= -180 deg");
    need(c.robot.q_max[i] <= kPi + 1e-12, "robot.q_max" + j + " must be <= 180 deg");
    need(c.robot.q_min[i] <= c.robot.q_max[i], "robot.q_min" + j + " must be <= robot.q_max" + j);
  }
  need(c.tool.position.allFinite(), "tool.position_mm must be finite");
  need(c.box.position.allFinite(), "box.position_mm must be finite");
  need(c.box.bx >= 1, "box.bx must be >= 1");
  need(c.box.by >= 1, "box.by must be >= 1");
  need(std::isfinite(c.box.dx) && c.box.dx > 0.0, "box.dx_mm must be > 0");
  need(std::isfinite(c.box.dy) && c.box.dy > 0.0, "box.dy_mm must be > 0");
  need(std::isfinite(c.box.delta_z), "box.delta_z_mm must be finite");
  need(c.box.config >= 0 && c.box.config <= 7, "box.config must be in 0..7");
  need(c.solver.n >= 1, "solver.n must be >= 1");
  need(c.solver.eps > 0.0, "solver.eps_mm must be > 0");
  need(c.solver.limit_weight >= 0.0, "solver.limit_weight must be >= 0");
  need(c.solver.limit_scale > 0.0, "solver.limit_scale_mm2_per_rad2 must be > 0");
  need(c.solver.limit_eps > 0.0, "solver.limit_eps_rad must be > 0");
  need(c.solver.grid_m >= 1, "solver.grid_m must be >= 1");
  need(c.solver.k_oracle >= 2, "solver.k_oracle must be >= 2");
  need(!c.solver.success_tol || *c.solver.success_tol >= 0.0, "solver.success_tol must be >= 0");
  need(c.solver.grad_tol >= 0.0, "solver.grad_tol must be >= 0");
  need(c.solver.max_iter >= 0, "solver.max_iter must be >= 0");
  need(c.solver.v_tol >= 0.0, "solver.v_tol_mm must be >= 0");
  need(c.output.threads >= 1, "output.threads must be >= 1");
  return v;
}

}  // namespace detail

inline Expected<ScenarioConfig, ConfigError> parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    return make_unexpected(ConfigError{ConfigError::Kind::Parse,
                                       {"line " + std::to_string(e.mark.line + 1) + ": " + e.msg}});
  }

  ScenarioConfig c;
  std::vector<std::string> errors;
  detail::Section top(root, "", errors);
  if (!top.has("robot")) errors.push_back("missing section 'robot'");
  if (!top.has("box")) errors.push_back("missing section 'box'");

  detail::Section robot = top.child("robot");
  robot.number("l23_mm", c.robot.l23);
  robot.number("l35_mm", c.robot.l35);
  robot.angles("q_min", c.robot.q_min);
  robot.angles("q_max", c.robot.q_max);
  robot.finish();

  detail::Section tool = top.child("tool");
  tool.vec3("position_mm", c.tool.position);
  tool.orientation("", c.tool.orientation);
  tool.finish();

  detail::Section box = top.child("box");
  box.vec3("position_mm", c.box.position);
  box.orientation("", c.box.orientation);
  box.integer("bx", c.box.bx);
  box.integer("by", c.box.by);
  box.number("dx_mm", c.box.dx);
  box.number("dy_mm", c.box.dy);
  box.number("delta_z_mm", c.box.delta_z);
  box.orientation("q_rel_", c.box.q_rel);
  box.integer("config", c.box.config);
  box.finish();

  detail::Section solver = top.child("solver");
  solver.integer("n", c.solver.n);
  solver.number("eps_mm", c.solver.eps);
  solver.number("limit_weight", c.solver.limit_weight);
  solver.number("limit_scale_mm2_per_rad2", c.solver.limit_scale);
  solver.number("limit_eps_rad", c.solver.limit_eps);
  solver.integer("grid_m", c.solver.grid_m);
  solver.integer("k_oracle", c.solver.k_oracle);
  solver.optional_number("success_tol", c.solver.success_tol);
  solver.number("grad_tol", c.solver.grad_tol);
  solver.integer("max_iter", c.solver.max_iter);
  solver.number("v_tol_mm", c.solver.v_tol);
  solver.finish();

  detail::Section output = top.child("output");
  output.text("csv", c.output.csv);
  output.text("map_svg", c.output.map_svg);
  output.text("field_svg", c.output.field_svg);
  std::string mode = to_string(c.output.mode);
  output.text("mode", mode);
  if (auto m = parse_mode(mode))
    c.output.mode = *m;
  else
    errors.push_back("key 'output.mode': expected full-motion or start-frame, got '" + mode + "'");
  output.integer("threads", c.output.threads);
  output.finish();

  top.finish();
  if (!errors.empty()) return make_unexpected(ConfigError{ConfigError::Kind::Parse, std::move(errors)});

  auto problems = detail::validate(c);
  if (!problems.empty()) return make_unexpected(ConfigError{ConfigError::Kind::Validation, std::move(problems)});
  return c;
}

inline Expected<ScenarioConfig, ConfigError> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) return make_unexpected(ConfigError{ConfigError::Kind::Io, {"cannot open config file '" + path + "'"}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Serializes with radians and 17 significant digits, so that
/// parse_config(save_config(c)) reproduces every value bit for bit.
inline std::string save_config(const ScenarioConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  auto seq = [&e](const auto& values, std::size_t n) {
    e << YAML::Flow << YAML::BeginSeq;
    for (std::size_t i = 0; i < n; ++i) e << values[i];
    e << YAML::EndSeq;
  };
  auto orientation = [&](const std::string& prefix, const OrientationSpec& o) {
    if (o.kind == OrientationSpec::Kind::Quaternion) {
      e << YAML::Key << prefix + "quaternion_wxyz" << YAML::Value;
      seq(o.values, 4);
    } else {
      e << YAML::Key << prefix + "rpy_rad" << YAML::Value;
      seq(o.values, 3);
    }
  };
  auto vec = [&](const Vec3& v) { seq(std::array<double, 3>{v.x(), v.y(), v.z()}, 3); };

  e << YAML::BeginMap;
  e << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "l23_mm" << YAML::Value << c.robot.l23;
  e << YAML::Key << "l35_mm" << YAML::Value << c.robot.l35;
  e << YAML::Key << "q_min_rad" << YAML::Value;
  seq(c.robot.q_min, 6);
  e << YAML::Key << "q_max_rad" << YAML::Value;
  seq(c.robot.q_max, 6);
  e << YAML::EndMap;

  e << YAML::Key << "tool" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "position_mm" << YAML::Value;
  vec(c.tool.position);
  orientation("", c.tool.orientation);
  e << YAML::EndMap;

  e << YAML::Key << "box" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "position_mm" << YAML::Value;
  vec(c.box.position);
  orientation("", c.box.orientation);
  e << YAML::Key << "bx" << YAML::Value << c.box.bx;
  e << YAML::Key << "by" << YAML::Value << c.box.by;
  e << YAML::Key << "dx_mm" << YAML::Value << c.box.dx;
  e << YAML::Key << "dy_mm" << YAML::Value << c.box.dy;
  e << YAML::Key << "delta_z_mm" << YAML::Value << c.box.delta_z;
  orientation("q_rel_", c.box.q_rel);
  e << YAML::Key << "config" << YAML::Value << c.box.config;
  e << YAML::EndMap;

  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n" << YAML::Value << c.solver.n;
  e << YAML::Key << "eps_mm" << YAML::Value << c.solver.eps;
  e << YAML::Key << "limit_weight" << YAML::Value << c.solver.limit_weight;
  e << YAML::Key << "limit_scale_mm2_per_rad2" << YAML::Value << c.solver.limit_scale;
  e << YAML::Key << "limit_eps_rad" << YAML::Value << c.solver.limit_eps;
  e << YAML::Key << "grid_m" << YAML::Value << c.solver.grid_m;
  e << YAML::Key << "k_oracle" << YAML::Value << c.solver.k_oracle;
  if (c.solver.success_tol) e << YAML::Key << "success_tol" << YAML::Value << *c.solver.success_tol;
  e << YAML::Key << "grad_tol" << YAML::Value << c.solver.grad_tol;
  e << YAML::Key << "max_iter" << YAML::Value << c.solver.max_iter;
  e << YAML::Key << "v_tol_mm" << YAML::Value << c.solver.v_tol;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "csv" << YAML::Value << c.output.csv;
  e << YAML::Key << "map_svg" << YAML::Value << c.output.map_svg;
  e << YAML::Key << "field_svg" << YAML::Value << c.output.field_svg;
  e << YAML::Key << "mode" << YAML::Value << to_string(c.output.mode);
  e << YAML::Key << "threads" << YAML::Value << c.output.threads;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace vjoint::io
