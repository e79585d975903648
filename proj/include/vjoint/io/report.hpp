#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vjoint/expected.hpp"
#include "vjoint/grid_sweep.hpp"

namespace vjoint::io {

struct IoError {
  std::string path;
  std::string message;
  std::string what() const { return path + ": " + message; }
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string num(double v) { return fmt("%.12g", v); }

inline Expected<bool, IoError> write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return make_unexpected(IoError{path, "cannot open for writing"});
  out << content;
  out.flush();
  if (!out) return make_unexpected(IoError{path, "write failed"});
  return true;
}

inline const char* color(PoseClass c) {
  switch (c) {
    case PoseClass::Red: return "#d62728";
    case PoseClass::Blue: return "#1f4fd6";
    case PoseClass::Black: return "#111111";
  }
  return "#888888";
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "k,l,x,y,z,class_before,class_after,alpha0_rad,alpha1_rad,objective,residual_v_mm";

inline std::string format_report_csv(const GridReport& report) {
  using detail::num;
  std::string s = std::string(kCsvHeader) + "\n";
  for (const auto& p : report.points) {
    s += std::to_string(p.k) + "," + std::to_string(p.l) + "," + num(p.position.x()) + "," + num(p.position.y()) +
         "," + num(p.position.z()) + "," + to_string(p.class_before) + "," + to_string(p.class_after) + "," +
         num(p.alpha.a0) + "," + num(p.alpha.a1) + "," + num(p.objective) + "," + num(p.residual_v) + "\n";
  }
  return s;
}

inline Expected<bool, IoError> write_report_csv(const GridReport& report, const std::string& path) {
  return detail::write_file(path, format_report_csv(report));
}

struct CsvRow {
  int k = 0;
  int l = 0;
  Vec3 position = Vec3::Zero();
  PoseClass class_before = PoseClass::Red;
  PoseClass class_after = PoseClass::Red;
  Alpha alpha;
  double objective = 0.0;
  double residual_v = 0.0;
};

inline std::optional<PoseClass> parse_class(const std::string& s) {
  if (s == "red") return PoseClass::Red;
  if (s == "blue") return PoseClass::Blue;
  if (s == "black") return PoseClass::Black;
  return std::nullopt;
}

/// Reads back a file written by format_report_csv.
inline Expected<std::vector<CsvRow>, std::string> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) return make_unexpected(std::string("bad header"));
  std::vector<CsvRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    const std::string at = "line " + std::to_string(line_no);
    if (f.size() != 11) return make_unexpected(at + ": expected 11 fields");
    CsvRow r;
    try {
      r.k = std::stoi(f[0]);
      r.l = std::stoi(f[1]);
      r.position = Vec3(std::stod(f[2]), std::stod(f[3]), std::stod(f[4]));
      r.alpha = {std::stod(f[7]), std::stod(f[8])};
      r.objective = std::stod(f[9]);
      r.residual_v = std::stod(f[10]);
    } catch (const std::exception&) {
      return make_unexpected(at + ": malformed number");
    }
    const auto before = parse_class(f[5]);
    const auto after = parse_class(f[6]);
    if (!before || !after) return make_unexpected(at + ": unknown class");
    r.class_before = *before;
    r.class_after = *after;
    rows.push_back(r);
  }
  return rows;
}

namespace detail {

inline constexpr double kCell = 24.0;    // px per grid cell
inline constexpr double kMargin = 30.0;  // px
inline constexpr double kLegend = 130.0;

struct Canvas {
  int Bx;
  int By;
  double width() const { return 2 * kMargin + Bx * kCell + kLegend; }
  double height() const { return 2 * kMargin + std::max(By * kCell, 80.0); }
  // l grows upwards, like the box y axis
  double x0(int k) const { return kMargin + (k - 1) * kCell; }
  double y0(int l) const { return kMargin + (By - l) * kCell; }
};

inline std::string svg_open(const Canvas& c, const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.1f", c.width()) + "\" height=\"" +
         fmt("%.1f", c.height()) + "\" viewBox=\"0 0 " + fmt("%.1f", c.width()) + " " + fmt("%.1f", c.height()) +
         "\">\n<title>" + title + "</title>\n<rect class=\"background\" x=\"0\" y=\"0\" width=\"100%\" "
         "height=\"100%\" fill=\"white\"/>\n";
}

inline std::string legend_entry(double x, double y, const std::string& swatch, const std::string& label) {
  return "<g class=\"legend-entry\">" + swatch + "<text x=\"" + fmt("%.1f", x + 18) + "\" y=\"" +
         fmt("%.1f", y + 10) + "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text></g>\n";
}

inline std::string legend_box(double x, double y, PoseClass c) {
  return "<rect class=\"legend-swatch\" x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) +
         "\" width=\"12\" height=\"12\" fill=\"" + color(c) + "\"/>";
}

}  // namespace detail

/// Reachability map: one cell per grid point filled with its final class; a
/// dot marks the class before optimization where it differs.
inline std::string format_map_svg(const GridReport& report) {
  using namespace detail;
  const Canvas cv{report.Bx, report.By};
  std::string s = svg_open(cv, "Reachability map");
  s += "<g class=\"cells\">\n";
  for (const auto& p : report.points) {
    const double x = cv.x0(p.k), y = cv.y0(p.l);
    s += "<rect class=\"cell " + std::string(to_string(p.class_after)) + "\" data-k=\"" + std::to_string(p.k) +
         "\" data-l=\"" + std::to_string(p.l) + "\" x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) +
         "\" width=\"" + fmt("%.1f", kCell) + "\" height=\"" + fmt("%.1f", kCell) + "\" fill=\"" +
         color(p.class_after) + "\" stroke=\"white\" stroke-width=\"1\"/>\n";
    if (p.class_before != p.class_after)
      s += "<circle class=\"before " + std::string(to_string(p.class_before)) + "\" cx=\"" +
           fmt("%.1f", x + kCell / 2) + "\" cy=\"" + fmt("%.1f", y + kCell / 2) + "\" r=\"" +
           fmt("%.1f", kCell / 6) + "\" fill=\"" + color(p.class_before) + "\" stroke=\"white\"/>\n";
  }
  s += "</g>\n<g class=\"legend\">\n";
  const double lx = kMargin + cv.Bx * kCell + 15;
  double ly = kMargin;
  for (PoseClass c : {PoseClass::Black, PoseClass::Blue, PoseClass::Red}) {
    static const char* label[] = {"red: wrist unreachable", "blue: joint limits", "black: admissible"};
    s += legend_entry(lx, ly, legend_box(lx, ly, c), label[static_cast<int>(c)]);
    ly += 18;
  }
  s += legend_entry(lx, ly,
                    "<circle cx=\"" + fmt("%.1f", lx + 6) + "\" cy=\"" + fmt("%.1f", ly + 6) +
                        "\" r=\"4\" fill=\"#888888\"/>",
                    "dot: class before");
  s += "</g>\n</svg>\n";
  return s;
}

/// Direction field: a unit arrow per grid point at angle alpha0 in the box
/// plane, colored by final class.
inline std::string format_field_svg(const GridReport& report) {
  using namespace detail;
  const Canvas cv{report.Bx, report.By};
  std::string s = svg_open(cv, "Direction field");
  s += "<g class=\"arrows\">\n";
  const double half = 0.4 * kCell, head = 0.2 * kCell;
  for (const auto& p : report.points) {
    const double cx = cv.x0(p.k) + kCell / 2, cy = cv.y0(p.l) + kCell / 2;
    const double ux = std::cos(p.alpha.a0), uy = -std::sin(p.alpha.a0);
    const double tx = cx + half * ux, ty = cy + half * uy;
    const double bx = tx - head * ux, by = ty - head * uy;
    const double nx = -uy * head * 0.5, ny = ux * head * 0.5;
    s += "<g class=\"arrow " + std::string(to_string(p.class_after)) + "\" data-k=\"" + std::to_string(p.k) +
         "\" data-l=\"" + std::to_string(p.l) + "\" data-alpha0=\"" + num(p.alpha.a0) + "\">";
    s += "<line x1=\"" + fmt("%.3f", cx - half * ux) + "\" y1=\"" + fmt("%.3f", cy - half * uy) + "\" x2=\"" +
         fmt("%.3f", bx) + "\" y2=\"" + fmt("%.3f", by) + "\" stroke=\"" + color(p.class_after) +
         "\" stroke-width=\"1.5\"/>";
    s += "<polygon points=\"" + fmt("%.3f", tx) + "," + fmt("%.3f", ty) + " " + fmt("%.3f", bx + nx) + "," +
         fmt("%.3f", by + ny) + " " + fmt("%.3f", bx - nx) + "," + fmt("%.3f", by - ny) + "\" fill=\"" +
         color(p.class_after) + "\"/></g>\n";
  }
  s += "</g>\n<g class=\"legend\">\n";
  const double lx = kMargin + cv.Bx * kCell + 15;
  double ly = kMargin;
  for (PoseClass c : {PoseClass::Black, PoseClass::Blue, PoseClass::Red}) {
    s += legend_entry(lx, ly, legend_box(lx, ly, c), to_string(c));
    ly += 18;
  }
  s += legend_entry(lx, ly, "", "arrow: alpha0 (0 = +x)");
  s += "</g>\n</svg>\n";
  return s;
}

inline Expected<bool, IoError> write_maps_svg(const GridReport& report, const std::string& path_map,
                                              const std::string& path_field) {
  if (auto r = detail::write_file(path_map, format_map_svg(report)); !r) return r;
  return detail::write_file(path_field, format_field_svg(report));
}

}  // namespace vjoint::io
