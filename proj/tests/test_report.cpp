#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "vjoint/io/report.hpp"

namespace vjoint::io {
namespace {

namespace pt = boost::property_tree;

GridReport synthetic(int bx, int by, PoseClass cls, double alpha0) {
  GridReport r;
  r.Bx = bx;
  r.By = by;
  for (int k = 1; k <= bx; ++k)
    for (int l = 1; l <= by; ++l) {
      GridPointResult p;
      p.k = k;
      p.l = l;
      p.position = Vec3(10.0 * k, 20.0 * l, -5.5);
      p.class_before = PoseClass::Red;
      p.class_after = cls;
      p.alpha = {alpha0, -alpha0};
      p.objective = 0.125 * k + l;
      r.points.push_back(p);
      r.before.add(p.class_before);
      r.after.add(p.class_after);
    }
  return r;
}

pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

// Visits every element below `node`, calling f(tag, element).
template <class F>
void walk(const pt::ptree& node, F&& f) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    f(tag, child);
    walk(child, f);
  }
}

std::string attr(const pt::ptree& e, const std::string& name) {
  return e.get<std::string>("<xmlattr>." + name, "");
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("vjoint_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ReportCsv, HeaderAndOneRowPerPoint) {
  const std::string csv = format_report_csv(synthetic(2, 3, PoseClass::Black, 0.0));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "k,l,x,y,z,class_before,class_after,alpha0_rad,alpha1_rad,objective,residual_v_mm");
  EXPECT_EQ(lines[1].substr(0, 4), "1,1,");
  EXPECT_EQ(lines[2].substr(0, 4), "1,2,");
  EXPECT_EQ(lines[4].substr(0, 4), "2,1,");
}

TEST(ReportCsv, ParseBackReconstructsCounts) {
  const GridReport r = sweep(testing::demo_model(), [] {
    GridSpec g = testing::demo_grid();
    g.Bx = 5;
    g.By = 5;
    g.Dx = g.Dy = 120.0;
    return g;
  }());
  const auto rows = parse_report_csv(format_report_csv(r));
  ASSERT_TRUE(rows) << rows.error();
  ASSERT_EQ(rows->size(), r.points.size());
  ClassCounts before, after;
  for (std::size_t i = 0; i < rows->size(); ++i) {
    before.add((*rows)[i].class_before);
    after.add((*rows)[i].class_after);
    EXPECT_EQ((*rows)[i].k, r.points[i].k);
    EXPECT_NEAR((*rows)[i].alpha.a0, r.points[i].alpha.a0, 1e-11);
  }
  EXPECT_EQ(before, r.before);
  EXPECT_EQ(after, r.after);
}

TEST(ReportCsv, RejectsForeignFiles) {
  EXPECT_FALSE(parse_report_csv("a,b,c\n1,2,3\n"));
  EXPECT_FALSE(parse_report_csv(std::string(kCsvHeader) + "\n1,1,0,0,0,green,red,0,0,0,0\n"));
}

TEST(ReportCsv, WritesFileAndReportsIoErrors) {
  const auto dir = temp_dir("csv");
  const GridReport r = synthetic(2, 2, PoseClass::Blue, 0.5);
  ASSERT_TRUE(write_report_csv(r, (dir / "a.csv").string()));
  EXPECT_EQ(slurp(dir / "a.csv"), format_report_csv(r));
  const auto bad = write_report_csv(r, (dir / "missing" / "a.csv").string());
  ASSERT_FALSE(bad);
  EXPECT_NE(bad.error().what().find("missing/a.csv"), std::string::npos);
}

TEST(ReportCsv, SameReportSameBytes) {
  const GridReport r = synthetic(4, 3, PoseClass::Red, -1.25);
  EXPECT_EQ(format_report_csv(r), format_report_csv(r));
  GridReport timed = r;
  timed.wall_time = 123.0;
  EXPECT_EQ(format_report_csv(timed), format_report_csv(r));
}

TEST(MapSvg, WellFormedWithOneCellPerPoint) {
  const GridReport r = synthetic(4, 3, PoseClass::Black, 0.0);
  const pt::ptree tree = parse_xml(format_map_svg(r));
  int black_cells = 0, cells = 0, legends = 0;
  walk(tree, [&](const std::string& tag, const pt::ptree& e) {
    const std::string cls = attr(e, "class");
    if (tag == "rect" && cls.rfind("cell ", 0) == 0) ++cells;
    if (tag == "rect" && cls == "cell black") ++black_cells;
    if (tag == "g" && cls == "legend") ++legends;
  });
  EXPECT_EQ(cells, 12);
  EXPECT_EQ(black_cells, 12);
  EXPECT_EQ(legends, 1);
}

TEST(MapSvg, MarksClassChanges) {
  GridReport r = synthetic(2, 2, PoseClass::Black, 0.0);
  r.points[3].class_before = PoseClass::Black;
  int markers = 0;
  walk(parse_xml(format_map_svg(r)), [&](const std::string& tag, const pt::ptree& e) {
    if (tag == "circle" && attr(e, "class").rfind("before ", 0) == 0) ++markers;
  });
  EXPECT_EQ(markers, 3);
}

TEST(MapSvg, HigherRowsDrawnHigher) {
  const GridReport r = synthetic(1, 2, PoseClass::Blue, 0.0);
  std::map<std::string, double> y;
  walk(parse_xml(format_map_svg(r)), [&](const std::string& tag, const pt::ptree& e) {
    if (tag == "rect" && !attr(e, "data-l").empty()) y[attr(e, "data-l")] = std::stod(attr(e, "y"));
  });
  EXPECT_LT(y["2"], y["1"]);
}

TEST(FieldSvg, ZeroAlphaArrowsPointAlongX) {
  const GridReport r = synthetic(3, 3, PoseClass::Black, 0.0);
  int arrows = 0;
  walk(parse_xml(format_field_svg(r)), [&](const std::string& tag, const pt::ptree& e) {
    if (tag != "line") return;
    ++arrows;
    EXPECT_EQ(attr(e, "y1"), attr(e, "y2"));
    EXPECT_GT(std::stod(attr(e, "x2")), std::stod(attr(e, "x1")));
  });
  EXPECT_EQ(arrows, 9);
}

TEST(FieldSvg, QuarterTurnPointsUpOnScreen) {
  const GridReport r = synthetic(1, 1, PoseClass::Black, kPi / 2);
  walk(parse_xml(format_field_svg(r)), [&](const std::string& tag, const pt::ptree& e) {
    if (tag != "line") return;
    EXPECT_NEAR(std::stod(attr(e, "x1")), std::stod(attr(e, "x2")), 1e-3);
    EXPECT_LT(std::stod(attr(e, "y2")), std::stod(attr(e, "y1")));
  });
}

TEST(FieldSvg, HasLegendAndParses) {
  const std::string svg = format_field_svg(synthetic(2, 5, PoseClass::Red, 2.0));
  int legends = 0;
  walk(parse_xml(svg), [&](const std::string& tag, const pt::ptree& e) {
    if (tag == "g" && attr(e, "class") == "legend") ++legends;
  });
  EXPECT_EQ(legends, 1);
}

TEST(WriteMaps, WritesBothFiles) {
  const auto dir = temp_dir("svg");
  const GridReport r = synthetic(2, 2, PoseClass::Black, 0.0);
  ASSERT_TRUE(write_maps_svg(r, (dir / "m.svg").string(), (dir / "f.svg").string()));
  EXPECT_EQ(slurp(dir / "m.svg"), format_map_svg(r));
  EXPECT_EQ(slurp(dir / "f.svg"), format_field_svg(r));
  EXPECT_FALSE(write_maps_svg(r, (dir / "no" / "m.svg").string(), (dir / "f.svg").string()));
}

}  // namespace
}  // namespace vjoint::io
