#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "dlse/errors.hpp"

namespace dlse {

/// Minimal static SVG line charts; no display server involved.
struct LineSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct LinePanel {
  std::string title;
  std::vector<LineSeries> series;
  bool log_y = false;
};

namespace detail {

inline const char* series_color(std::size_t idx) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  return palette[idx % 6];
}

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

/// Writes stacked panels into one SVG file.
inline void write_svg_chart(const std::string& path,
                            const std::vector<LinePanel>& panels,
                            const std::string& x_label) {
  if (panels.empty()) throw MissingMetrics("no panels to plot");
  const double width = 720, panel_h = 300, margin_l = 70, margin_r = 140,
               margin_t = 36, margin_b = 44;
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path);
  const double total_h = panel_h * panels.size();
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << total_h << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double top = p * panel_h;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : panel.series) {
      for (auto [x, y] : s.points) {
        double yy = panel.log_y ? std::log10(std::max(y, 1e-12)) : y;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, yy);
        ymax = std::max(ymax, yy);
      }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double plot_w = width - margin_l - margin_r;
    const double plot_h = panel_h - margin_t - margin_b;
    auto px = [&](double x) {
      return margin_l + (x - xmin) / (xmax - xmin) * plot_w;
    };
    auto py = [&](double y) {
      double yy = panel.log_y ? std::log10(std::max(y, 1e-12)) : y;
      return top + margin_t + plot_h - (yy - ymin) / (ymax - ymin) * plot_h;
    };

    out << "<text x=\"" << width / 2 << "\" y=\"" << top + 20
        << "\" text-anchor=\"middle\" font-size=\"14\">" << panel.title
        << "</text>\n";
    // axes
    out << "<rect x=\"" << margin_l << "\" y=\"" << top + margin_t
        << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + (xmax - xmin) * t / 4.0;
      const double yv = ymin + (ymax - ymin) * t / 4.0;
      out << "<text x=\"" << px(xv) << "\" y=\"" << top + panel_h - margin_b + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">"
          << detail::fmt_tick(xv) << "</text>\n";
      const double y_disp = panel.log_y ? std::pow(10.0, yv) : yv;
      out << "<text x=\"" << margin_l - 6 << "\" y=\""
          << top + margin_t + plot_h - plot_h * t / 4.0 + 4
          << "\" text-anchor=\"end\" font-size=\"11\">"
          << detail::fmt_tick(y_disp) << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << top + panel_h - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label
        << "</text>\n";

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const auto& series = panel.series[s];
      if (series.points.empty()) continue;
      out << "<polyline fill=\"none\" stroke=\""
          << detail::series_color(s) << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : series.points) out << px(x) << "," << py(y) << " ";
      out << "\"/>\n";
      const double ly = top + margin_t + 16.0 * (s + 1);
      out << "<line x1=\"" << width - margin_r + 8 << "\" y1=\"" << ly - 4
          << "\" x2=\"" << width - margin_r + 28 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << detail::series_color(s)
          << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << width - margin_r + 32 << "\" y=\"" << ly
          << "\" font-size=\"11\">" << series.label << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace dlse
