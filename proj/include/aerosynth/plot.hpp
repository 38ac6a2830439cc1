#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aerosynth/evaluator.hpp"

namespace aerosynth {

namespace detail {

struct Panel {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  std::pair<double, double> map(double x, double y) const {
    const double fx = (x - x_min) / (x_max - x_min);
    const double fy = (y - y_min) / (y_max - y_min);
    return {left + fx * width, top + (1.0 - fy) * height};
  }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string axes(const Panel& p, const std::string& title, const std::string& xlabel,
                        const std::string& ylabel) {
  std::string s;
  s += "<rect x=\"" + num(p.left) + "\" y=\"" + num(p.top) + "\" width=\"" + num(p.width) +
       "\" height=\"" + num(p.height) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = p.x_min + (p.x_max - p.x_min) * i / 4.0;
    const double fy = p.y_min + (p.y_max - p.y_min) * i / 4.0;
    const auto [xx, xy] = p.map(fx, p.y_min);
    const auto [yx, yy] = p.map(p.x_min, fy);
    s += "<text x=\"" + num(xx) + "\" y=\"" + num(xy + 16) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
    s += "<text x=\"" + num(yx - 6) + "\" y=\"" + num(yy + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(fy) + "</text>\n";
  }
  s += "<text x=\"" + num(p.left + p.width / 2) + "\" y=\"" + num(p.top - 10) +
       "\" font-size=\"14\" text-anchor=\"middle\">" + title + "</text>\n";
  s += "<text x=\"" + num(p.left + p.width / 2) + "\" y=\"" + num(p.top + p.height + 34) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";
  s += "<text x=\"" + num(p.left - 42) + "\" y=\"" + num(p.top + p.height / 2) +
       "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(p.left - 42) +
       " " + num(p.top + p.height / 2) + ")\">" + ylabel + "</text>\n";
  return s;
}

inline std::string polyline(const Panel& p, std::span<const std::pair<double, double>> pts,
                            const std::string& color) {
  if (pts.empty()) return {};
  std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
  for (const auto& [x, y] : pts) {
    const auto [px, py] = p.map(x, y);
    s += num(px) + ',' + num(py) + ' ';
  }
  s += "\"/>\n";
  return s;
}

}  // namespace detail

// Two side-by-side panels: precision over recall, and mean penalty over
// threshold. Points with an undefined value are left out.
inline std::string curves_svg(std::span<const PRPoint> pr, std::span<const PenaltyPoint> pen) {
  const detail::Panel left{70, 40, 320, 280, 0.0, 1.0, 0.0, 1.0};
  double pen_max = 1.0;
  for (const auto& p : pen)
    if (p.mean_penalty) pen_max = std::max(pen_max, *p.mean_penalty);
  const detail::Panel right{490, 40, 320, 280, 0.0, 1.0, 1.0, pen_max > 1.0 ? pen_max : 2.0};

  std::vector<std::pair<double, double>> pr_pts, pen_pts;
  for (const auto& p : pr)
    if (p.precision && p.recall) pr_pts.emplace_back(*p.recall, *p.precision);
  for (const auto& p : pen)
    if (p.mean_penalty) pen_pts.emplace_back(p.threshold, *p.mean_penalty);

  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"370\" "
      "font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += detail::axes(left, "Precision-recall", "recall", "precision");
  s += detail::polyline(left, pr_pts, "#1f77b4");
  s += detail::axes(right, "Prediction penalty", "detection threshold", "mean penalty");
  s += detail::polyline(right, pen_pts, "#d62728");
  s += "</svg>\n";
  return s;
}

}  // namespace aerosynth
