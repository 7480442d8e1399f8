#pragma once

#include <string>
#include <vector>

namespace fdmsnn {

// Minimal SVG emitters for derived plot artifacts. CSV files remain the
// source of truth; any failure here should degrade to a warning.

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label, bool log_x = false);

void write_svg_histogram(const std::string& path, const std::vector<double>& values, int bins,
                         const std::string& title, const std::string& x_label);

// Grey-map of a row-major matrix, dark = low value.
void write_svg_greymap(const std::string& path, const std::vector<double>& values, int rows,
                       int cols, const std::string& title);

}  // namespace fdmsnn
