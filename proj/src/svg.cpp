#include "fdmsnn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fdmsnn {

namespace {

constexpr int kW = 720, kH = 440;
constexpr int kL = 70, kR = 20, kT = 40, kB = 50;

struct Range {
  double lo = 0.0, hi = 1.0;
  double map(double v, double px_lo, double px_hi) const {
    if (hi <= lo) return px_lo;
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

std::string axis_text(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

void header(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title << "</text>\n";
}

void axes(std::ofstream& out, const Range& rx, const Range& ry, const std::string& xl,
          const std::string& yl, bool log_x) {
  out << "<rect x='" << kL << "' y='" << kT << "' width='" << kW - kL - kR << "' height='"
      << kH - kT - kB << "' fill='none' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double px = kL + (kW - kL - kR) * i / 4.0;
    const double shown = log_x ? std::pow(10.0, fx) : fx;
    out << "<text x='" << px << "' y='" << kH - kB + 18 << "' text-anchor='middle' font-size='11'>"
        << axis_text(shown) << "</text>\n";
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    const double py = kH - kB - (kH - kT - kB) * i / 4.0;
    out << "<text x='" << kL - 8 << "' y='" << py + 4 << "' text-anchor='end' font-size='11'>"
        << axis_text(fy) << "</text>\n";
  }
  out << "<text x='" << kW / 2 << "' y='" << kH - 12 << "' text-anchor='middle' font-size='12'>" << xl
      << "</text>\n"
      << "<text x='16' y='" << kH / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
      << kH / 2 << ")'>" << yl << "</text>\n";
}

}  // namespace

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label, bool log_x) {
  std::ofstream out(path);
  if (!out) return;
  Range rx{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  Range ry = rx;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
      rx.lo = std::min(rx.lo, x);
      rx.hi = std::max(rx.hi, x);
      ry.lo = std::min(ry.lo, s.y[i]);
      ry.hi = std::max(ry.hi, s.y[i]);
    }
  }
  if (rx.lo > rx.hi) return;
  if (ry.hi == ry.lo) ry.hi = ry.lo + 1.0;
  header(out, title);
  axes(out, rx, ry, x_label, y_label, log_x);
  int legend_y = kT + 14;
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
      out << rx.map(x, kL, kW - kR) << ',' << ry.map(s.y[i], kH - kB, kT) << ' ';
    }
    out << "'/>\n";
    if (!s.label.empty()) {
      out << "<text x='" << kW - kR - 6 << "' y='" << legend_y << "' text-anchor='end' font-size='11' fill='"
          << s.color << "'>" << s.label << "</text>\n";
      legend_y += 14;
    }
  }
  out << "</svg>\n";
}

void write_svg_histogram(const std::string& path, const std::vector<double>& values, int bins,
                         const std::string& title, const std::string& x_label) {
  if (values.empty() || bins < 1) return;
  std::ofstream out(path);
  if (!out) return;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi == lo) hi = lo + 1.0;
  std::vector<int> count(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  const int peak = *std::max_element(count.begin(), count.end());
  header(out, title);
  Range rx{lo, hi};
  Range ry{0.0, static_cast<double>(peak)};
  axes(out, rx, ry, x_label, "count", false);
  const double bw = static_cast<double>(kW - kL - kR) / bins;
  for (int b = 0; b < bins; ++b) {
    const double h = (kH - kT - kB) * count[static_cast<std::size_t>(b)] / static_cast<double>(peak);
    out << "<rect x='" << kL + b * bw << "' y='" << kH - kB - h << "' width='" << bw * 0.95
        << "' height='" << h << "' fill='#1f77b4'/>\n";
  }
  out << "</svg>\n";
}

void write_svg_greymap(const std::string& path, const std::vector<double>& values, int rows,
                       int cols, const std::string& title) {
  if (values.size() != static_cast<std::size_t>(rows) * cols || rows < 1 || cols < 1) return;
  std::ofstream out(path);
  if (!out) return;
  const double hi = std::max(1e-300, *std::max_element(values.begin(), values.end()));
  header(out, title);
  const double cw = static_cast<double>(kW - kL - kR) / cols;
  const double ch = static_cast<double>(kH - kT - kB) / rows;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = values[static_cast<std::size_t>(i) * cols + j] / hi;
      const int grey = static_cast<int>(std::clamp(v, 0.0, 1.0) * 255.0);
      out << "<rect x='" << kL + j * cw << "' y='" << kT + i * ch << "' width='" << cw << "' height='"
          << ch << "' fill='rgb(" << grey << ',' << grey << ',' << grey << ")' stroke='#888'/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace fdmsnn
