#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ctm/errors.hpp"

namespace lab {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string render_plot(const PlotSpec& spec) {
  if (spec.series.empty()) throw ctm::UsageError("plot.render: no series to draw");
  for (const auto& s : spec.series)
    if (s.x.size() != s.y.size() || s.x.empty())
      throw ctm::UsageError("plot.render: series '" + s.label + "' is empty or ragged");

  // data window (log axis keeps positive points only)
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  std::size_t kept = 0;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (spec.log_y && !(y > 0.0)) continue;
      ++kept;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      const double yv = spec.log_y ? std::log10(y) : y;
      y0 = std::min(y0, yv);
      y1 = std::max(y1, yv);
    }
  if (kept == 0) throw ctm::UsageError("plot.render: no drawable points (log axis)");
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;

  const double W = 720, H = 480, L = 72, R = 24, T = 44, B = 56;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double yv) { return H - B - (yv - y0) / (y1 - y0) * (H - T - B); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 720 480\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"360\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + spec.title +
         "</text>\n";

  // frame and ticks
  out += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) +
         "\" height=\"" + num(H - T - B) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    out += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(px(fx)) +
           "\" y2=\"" + num(H - B + 5) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(H - B + 18) +
           "\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
    const double fy = y0 + (y1 - y0) * k / 4.0;
    out += "<line x1=\"" + num(L - 5) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" + num(L) +
           "\" y2=\"" + num(py(fy)) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(L - 8) + "\" y=\"" + num(py(fy) + 4) +
           "\" text-anchor=\"end\">" + (spec.log_y ? "1e" + num(fy) : num(fy)) + "</text>\n";
  }
  out += "<text x=\"" + num((L + W - R) / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\">" + spec.xlabel + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((T + H - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num((T + H - B) / 2) + ")\">" + spec.ylabel + "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (spec.log_y && !(y > 0.0)) continue;
      const double yv = spec.log_y ? std::log10(y) : y;
      pts += num(px(s.x[i])) + "," + num(py(yv)) + " ";
      out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(yv)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    out += "<rect x=\"" + num(W - R - 150) + "\" y=\"" + num(T + 10 + 18.0 * si) +
           "\" width=\"12\" height=\"3\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(W - R - 132) + "\" y=\"" + num(T + 15 + 18.0 * si) + "\">" +
           s.label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace lab
