#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snumbers {

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::optional<double> reference;  ///< horizontal line
  std::string reference_label;
};

/// SVG 1.1 line chart: axes with ticks, one polyline per series, legend.
std::string render_svg(const PlotSpec& spec);

}  // namespace snumbers
