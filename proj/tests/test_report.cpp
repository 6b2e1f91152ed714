#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "snumbers/report.hpp"

using namespace snumbers;

namespace {
std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}
}  // namespace

TEST_CASE("format_number round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.10132118364233778}) CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("write_atomic replaces the target and leaves no temporary") {
  const auto dir = std::filesystem::temp_directory_path() / "snumbers_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_atomic(path, "first");
  write_atomic(path, "second\n");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "second\n");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  CHECK_THROWS(write_atomic(dir / "missing" / "x.txt", "x"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("SVG plot structure") {
  PlotSpec spec;
  spec.title = "a & b";
  spec.x_label = "n";
  spec.y_label = "n^2 s_n";
  spec.series.push_back({"lower", {2, 3, 4}, {0.05, 0.06, 0.07}, "blue"});
  spec.series.push_back({"upper", {2, 3, 4}, {0.4, 0.2, 0.15}, "red"});
  spec.reference = 0.1;
  spec.reference_label = "limit";
  const std::string svg = render_svg(spec);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 2);
  CHECK(count(svg, "stroke-dasharray") == 2);
  CHECK(svg.find("a &amp; b") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(render_svg(spec) == svg);

  PlotSpec empty;
  CHECK(render_svg(empty).find("</svg>") != std::string::npos);
}
