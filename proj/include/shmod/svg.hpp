#pragma once
// Minimal self-contained SVG line charts (log-log axes, decade ticks, one
// polyline per series).  Reporting only; never affects exit codes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace shmod::io {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), positive entries only
};

namespace detail {
inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
inline std::string tick_label(int decade) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "1e%d", decade);
  return buf;
}
}  // namespace detail

inline void write_loglog_chart(const std::filesystem::path& path,
                               const std::string& title, const std::string& xlabel,
                               const std::string& ylabel,
                               const std::vector<ChartSeries>& series) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  const double width = 640, height = 480;
  const double ml = 70, mr = 150, mt = 40, mb = 50;

  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      const double lx = std::log10(x), ly = std::log10(y);
      if (!any) {
        x_lo = x_hi = lx;
        y_lo = y_hi = ly;
        any = true;
      }
      x_lo = std::min(x_lo, lx);
      x_hi = std::max(x_hi, lx);
      y_lo = std::min(y_lo, ly);
      y_hi = std::max(y_hi, ly);
    }
  if (!any) {
    x_lo = y_lo = -1;
    x_hi = y_hi = 1;
  }
  if (x_hi - x_lo < 1e-9) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi - y_lo < 1e-9) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double pad_x = 0.05 * (x_hi - x_lo), pad_y = 0.08 * (y_hi - y_lo);
  x_lo -= pad_x;
  x_hi += pad_x;
  y_lo -= pad_y;
  y_hi += pad_y;

  auto map_x = [&](double lx) {
    return ml + (lx - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  auto map_y = [&](double ly) {
    return height - mb - (ly - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) return;  // chart emission must never fail a run
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // frame
  out << "<rect x=\"" << detail::px(ml) << "\" y=\"" << detail::px(mt)
      << "\" width=\"" << detail::px(width - ml - mr) << "\" height=\""
      << detail::px(height - mt - mb)
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(x_lo)); d <= static_cast<int>(std::floor(x_hi)); ++d) {
    const double x = map_x(d);
    out << "<line x1=\"" << detail::px(x) << "\" y1=\"" << detail::px(mt)
        << "\" x2=\"" << detail::px(x) << "\" y2=\"" << detail::px(height - mb)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << detail::px(x) << "\" y=\"" << detail::px(height - mb + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::tick_label(d) << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y_lo)); d <= static_cast<int>(std::floor(y_hi)); ++d) {
    const double y = map_y(d);
    out << "<line x1=\"" << detail::px(ml) << "\" y1=\"" << detail::px(y)
        << "\" x2=\"" << detail::px(width - mr) << "\" y2=\"" << detail::px(y)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << detail::px(ml - 8) << "\" y=\"" << detail::px(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::tick_label(d) << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << ylabel
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = colors[si % 6];
    std::string poly;
    for (const auto& [x, y] : series[si].points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      poly += detail::px(map_x(std::log10(x))) + "," +
              detail::px(map_y(std::log10(y))) + " ";
      out << "<circle cx=\"" << detail::px(map_x(std::log10(x))) << "\" cy=\""
          << detail::px(map_y(std::log10(y))) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    out << "<polyline points=\"" << poly << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    const double ly = mt + 16 + 18 * static_cast<double>(si);
    out << "<line x1=\"" << detail::px(width - mr + 10) << "\" y1=\""
        << detail::px(ly - 4) << "\" x2=\"" << detail::px(width - mr + 34)
        << "\" y2=\"" << detail::px(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << detail::px(width - mr + 40) << "\" y=\"" << detail::px(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[si].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace shmod::io
