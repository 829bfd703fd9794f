#include "ctm/curve_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ctm/errors.hpp"

namespace ctm {

CurveChart::CurveChart(std::vector<Eigen::Vector2d> vertices, double rotation)
    : rotation_(rotation) {
  if (vertices.size() < 2)
    throw GeometryError("curvecoords.build_chart: polyline needs at least 2 vertices, got " +
                        std::to_string(vertices.size()));

  const double c = std::cos(rotation), s = std::sin(rotation);
  for (auto& v : vertices) {
    const double t = c * v[0] - s * v[1];
    const double x = s * v[0] + c * v[1];
    v = {t, x};
  }

  // Normalize to increasing xi; a non-monotone gamma2 cannot be a graph.
  if (vertices.back()[1] < vertices.front()[1]) std::reverse(vertices.begin(), vertices.end());

  segments_.reserve(vertices.size() - 1);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    const double dx = vertices[k + 1][1] - vertices[k][1];
    const double dt = vertices[k + 1][0] - vertices[k][0];
    if (!(dx > 0.0))
      throw GeometryError("curvecoords.build_chart: gamma2 not strictly monotone at segment " +
                          std::to_string(k) + " (xi step " + std::to_string(dx) + ")");
    Segment seg;
    seg.xi_lo = vertices[k][1];
    seg.xi_hi = vertices[k + 1][1];
    seg.t_lo = vertices[k][0];
    seg.slope = dt / dx;
    // theta = atan2(dgamma1, dgamma2); monotone gamma2 puts cos(theta) in (0, 1].
    seg.cos_theta = dx / std::hypot(dt, dx);
    segments_.push_back(seg);
  }
}

const CurveChart::Segment& CurveChart::segment_at(double xi) const {
  const double eps = 1e-12 * (1.0 + std::abs(xi_max() - xi_min()));
  if (xi < xi_min() - eps || xi > xi_max() + eps)
    throw GeometryError("curvecoords.chart: xi = " + std::to_string(xi) +
                        " outside curve extent [" + std::to_string(xi_min()) + ", " +
                        std::to_string(xi_max()) + "]");
  // Half-open segments [xi_lo, xi_hi), the last one closed.
  for (const auto& seg : segments_)
    if (xi < seg.xi_hi) return seg;
  return segments_.back();
}

double CurveChart::gamma1(double xi) const {
  const Segment& seg = segment_at(xi);
  return seg.t_lo + seg.slope * (xi - seg.xi_lo);
}

Eigen::Matrix2d CurveChart::metric_at(double xi) const {
  const double s = segment_at(xi).slope;
  Eigen::Matrix2d g;
  g << 1.0, s, s, s * s + 1.0;
  return g;
}

double CurveChart::min_cos(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  double m = 1.0;
  bool hit = false;
  for (const auto& seg : segments_) {
    if (seg.xi_hi < lo || seg.xi_lo > hi) continue;
    m = std::min(m, seg.cos_theta);
    hit = true;
  }
  if (!hit)
    throw GeometryError("curvecoords.chart: no curve segment meets xi interval [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return m;
}

Eigen::Vector2d CurveChart::to_chart(const Eigen::Vector2d& tx) const {
  const double c = std::cos(rotation_), s = std::sin(rotation_);
  const double t = c * tx[0] - s * tx[1];
  const double x = s * tx[0] + c * tx[1];
  return {t - gamma1(x), x};
}

Eigen::Vector2d CurveChart::to_original(const Eigen::Vector2d& sigma_xi) const {
  const double t = sigma_xi[0] + gamma1(sigma_xi[1]);
  const double x = sigma_xi[1];
  const double c = std::cos(rotation_), s = std::sin(rotation_);
  return {c * t + s * x, -s * t + c * x};
}

CurveChart build_chart(const std::vector<Eigen::Vector2d>& vertices, double rotation) {
  return CurveChart(vertices, rotation);
}

double chart_g11_sup(const CurveChart& chart) {
  double sup = 0.0;
  for (const auto& seg : chart.segments())
    sup = std::max(sup, 1.0 + seg.slope * seg.slope);
  return sup;
}

std::vector<Eigen::Vector2d> read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("curvecoords.read_curve_file: cannot open '" + path + "'");
  std::vector<Eigen::Vector2d> vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double t, x;
    if (!(ls >> t)) continue;  // blank / comment line
    if (!(ls >> x))
      throw InputError("curvecoords.read_curve_file: '" + path + "' line " +
                       std::to_string(lineno) + ": expected 't x' pair");
    vs.push_back({t, x});
  }
  if (vs.size() < 2)
    throw InputError("curvecoords.read_curve_file: '" + path + "' holds " +
                     std::to_string(vs.size()) + " vertices, need at least 2");
  return vs;
}

}  // namespace ctm
