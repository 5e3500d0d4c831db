#include "genbounds/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace genbounds {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool drawable(double v, bool log_axis) { return std::isfinite(v) && (!log_axis || v > 0.0); }

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double t = log ? std::log10(v) : v;
    return (t - lo) / (hi - lo);
  }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    const double t = log ? std::log10(v) : v;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, log ? 0.5 : 1e-3);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  std::vector<double> xs, ys;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (drawable(s.x[i], plot.log_x) && drawable(s.y[i], plot.log_y)) {
        xs.push_back(s.x[i]);
        ys.push_back(s.y[i]);
      }
  const Axis ax = make_axis(xs, plot.log_x);
  const Axis ay = make_axis(ys, plot.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + ax.map(x) * pw; };
  const auto py = [&](double y) { return kTop + (1.0 - ay.map(y)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(plot.title) + "</text>\n";
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double tx = ax.lo + f * (ax.hi - ax.lo);
    const double ty = ay.lo + f * (ay.hi - ay.lo);
    const double gx = kLeft + f * pw;
    const double gy = kTop + (1.0 - f) * ph;
    out += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
           tick_label(ax.log ? std::pow(10.0, tx) : tx) + "</text>\n";
    out += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(gy + 4) + "\" text-anchor=\"end\">" +
           tick_label(ay.log ? std::pow(10.0, ty) : ty) + "</text>\n";
  }
  out += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 16) + "\" text-anchor=\"middle\">" +
         escape(plot.x_label + (plot.log_x ? " (log)" : "")) + "</text>\n";
  out += "<text transform=\"translate(18," + fmt(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(plot.y_label + (plot.log_y ? " (log)" : "")) + "</text>\n";

  std::size_t drawn = 0;
  for (const auto& s : plot.series) {
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!drawable(s.x[i], plot.log_x) || !drawable(s.y[i], plot.log_y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
    }
    if (pts.empty()) continue;
    const char* color = kColors[drawn % (sizeof kColors / sizeof *kColors)];
    out += "<polyline data-series=\"" + escape(s.name) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(drawn);
    out += "<line x1=\"" + fmt(kWidth - kRight + 12) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(kWidth - kRight + 32) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(kWidth - kRight + 38) + "\" y=\"" + fmt(ly) + "\">" + escape(s.name) + "</text>\n";
    ++drawn;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace genbounds
