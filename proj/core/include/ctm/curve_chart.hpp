#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ctm {

// Coordinates adapted to a polyline curve in the (t, x) plane.
//
// The chart straightens the curve into the line sigma = 0: a point with chart
// coordinates (sigma, xi) sits at t = sigma + gamma1(xi), x = xi, where
// (gamma1, gamma2) is the polyline reparameterized by its second coordinate
// (gamma2(xi) = xi). Constant-sigma lines are parallel copies of the curve, so
// a lattice in (sigma, xi) has curve-shaped time slices while the metric it
// carries is the flat plane metric pushed through the map:
//
//   g' = [ 1   s ]      s = slope dgamma1/dxi on the segment,
//        [ s s^2+1 ]    (g')^{00} = 1 + s^2 = 1/cos(theta)^2.
//
// An optional pre-rotation is applied to all geometry first; it is a pure
// input convenience, equivalent to rotating the polyline and regions by hand.
class CurveChart {
public:
  struct Segment {
    double xi_lo = 0.0, xi_hi = 0.0;  // footprint on the xi axis
    double t_lo = 0.0;                // gamma1 at xi_lo
    double slope = 0.0;               // dgamma1/dxi
    double cos_theta = 0.0;           // xi-extent / segment length, in (0, 1]
  };

  // Vertices are "t x" pairs in the pre-rotation frame. After the rotation the
  // second coordinate must be strictly monotone (a graph over xi); a vertical
  // or reversing segment is a geometry error.
  CurveChart(std::vector<Eigen::Vector2d> vertices, double rotation);

  const std::vector<Segment>& segments() const { return segments_; }
  double rotation() const { return rotation_; }
  double xi_min() const { return segments_.front().xi_lo; }
  double xi_max() const { return segments_.back().xi_hi; }

  const Segment& segment_at(double xi) const;

  // gamma1(xi), defined on [xi_min, xi_max].
  double gamma1(double xi) const;

  // Induced metric block for the segment containing xi.
  Eigen::Matrix2d metric_at(double xi) const;

  // Smallest |cos theta| over segments whose footprint meets [lo, hi]
  // (clipped to the chart extent). With no interval: over all segments.
  double min_cos(double lo, double hi) const;
  double min_cos() const { return min_cos(xi_min(), xi_max()); }

  // Chart coordinates of an original-frame point; throws GeometryError when
  // the point projects outside the curve's xi extent.
  Eigen::Vector2d to_chart(const Eigen::Vector2d& tx) const;

  // Original-frame point of chart coordinates (sigma, xi).
  Eigen::Vector2d to_original(const Eigen::Vector2d& sigma_xi) const;

private:
  std::vector<Segment> segments_;
  double rotation_ = 0.0;
};

CurveChart build_chart(const std::vector<Eigen::Vector2d>& vertices, double rotation = 0.0);

// sup over segments of (g')^{00} = 1 / min_cos^2.
double chart_g11_sup(const CurveChart& chart);

// Reads an ordered "t x" vertex list, one pair per line, '#' comments allowed.
std::vector<Eigen::Vector2d> read_curve_file(const std::string& path);

}  // namespace ctm
