#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "ctm/curve_chart.hpp"
#include "ctm/errors.hpp"

using namespace ctm;

namespace {
std::vector<Eigen::Vector2d> staircase() {
  return {Eigen::Vector2d(1.25, -4.0), Eigen::Vector2d(1.25, -1.0), Eigen::Vector2d(-0.75, 1.0),
          Eigen::Vector2d(-0.75, 4.0)};
}
}

TEST_SUITE("chart") {

TEST_CASE("single-segment slope chart") {
  CurveChart c = build_chart({Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0)}, 0.0);
  CHECK(c.segments().size() == 1);
  CHECK(c.xi_min() == doctest::Approx(-2.0));
  CHECK(c.xi_max() == doctest::Approx(2.0));
  CHECK(c.gamma1(0.5) == doctest::Approx(0.5));
  Eigen::Matrix2d g = c.metric_at(0.0);
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(0, 1) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(2.0));
  CHECK(c.min_cos() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(chart_g11_sup(c) == doctest::Approx(2.0));
}

TEST_CASE("staircase: per-segment slopes and min cos") {
  CurveChart c = build_chart(staircase(), 0.0);
  CHECK(c.segments().size() == 3);
  CHECK(c.gamma1(-2.0) == doctest::Approx(1.25));
  CHECK(c.gamma1(0.0) == doctest::Approx(0.25));
  CHECK(c.gamma1(2.0) == doctest::Approx(-0.75));
  CHECK(c.min_cos() == doctest::Approx(1.0 / std::sqrt(2.0)));
  // restricted to the flat tail the curve is horizontal
  CHECK(c.min_cos(2.0, 4.0) == doctest::Approx(1.0));
  CHECK(c.min_cos(-4.0, -1.5) == doctest::Approx(1.0));
  // sup of 1 + slope^2 matches 1/min_cos^2
  CHECK(chart_g11_sup(c) == doctest::Approx(1.0 / (c.min_cos() * c.min_cos())));
}

TEST_CASE("chart map round trip") {
  CurveChart c = build_chart(staircase(), 0.3);
  for (double sigma : {-1.5, 0.0, 2.0}) {
    for (double xi : {-3.0, -1.0, 0.5, 3.5}) {
      Eigen::Vector2d p = c.to_original(Eigen::Vector2d(sigma, xi));
      Eigen::Vector2d q = c.to_chart(p);
      CHECK(q[0] == doctest::Approx(sigma).epsilon(1e-12));
      CHECK(q[1] == doctest::Approx(xi).epsilon(1e-12));
    }
  }
  // sigma = 0 on the unrotated chart lands on the curve itself
  CurveChart c0 = build_chart(staircase(), 0.0);
  Eigen::Vector2d on_curve = c0.to_original(Eigen::Vector2d(0.0, -2.0));
  CHECK(on_curve[0] == doctest::Approx(1.25));
  CHECK(on_curve[1] == doctest::Approx(-2.0));
}

TEST_CASE("rotation parameter equals pre-rotated vertices") {
  // Rotating the input polyline by hand and using angle zero must give the
  // same chart as passing the angle: the rotation is pure plumbing.
  double phi = 0.35;
  auto verts = staircase();
  CurveChart via_angle = build_chart(verts, phi);
  Eigen::Rotation2D<double> rot(phi);
  std::vector<Eigen::Vector2d> pre;
  for (const auto& v : verts) pre.push_back(rot * v);
  CurveChart via_vertices = build_chart(pre, 0.0);

  CHECK(via_angle.metric_at(0.3).isApprox(via_vertices.metric_at(0.3), 1e-13));
  CHECK(via_angle.min_cos() == doctest::Approx(via_vertices.min_cos()).epsilon(1e-13));
  // same chart point, original frames differ by the rotation itself
  for (double xi : {-3.0, 0.0, 2.5}) {
    Eigen::Vector2d a = via_angle.to_original(Eigen::Vector2d(0.7, xi));
    Eigen::Vector2d b = rot.inverse() * via_vertices.to_original(Eigen::Vector2d(0.7, xi));
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(build_chart({Eigen::Vector2d(0.0, 0.0)}, 0.0), GeometryError);
  // gamma2 must be strictly monotone: duplicate xi
  CHECK_THROWS_AS(build_chart({Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0)}, 0.0),
                  GeometryError);
  // reversal mid-way
  CHECK_THROWS_AS(build_chart({Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 1.0),
                               Eigen::Vector2d(1.0, 0.5)},
                              0.0),
                  GeometryError);
  // evaluation outside the covered interval
  CurveChart c = build_chart(staircase(), 0.0);
  CHECK_THROWS_AS(c.gamma1(4.5), GeometryError);
  CHECK_THROWS_AS(c.metric_at(-4.5), GeometryError);
}

TEST_CASE("curve file parsing") {
  std::string path = "curve_parse.txt";
  {
    std::ofstream f(path);
    f << "# staircase\n";
    f << "1.25 -4\n1.25 -1\n-0.75 1\n-0.75 4\n";
  }
  auto verts = read_curve_file(path);
  REQUIRE(verts.size() == 4);
  CHECK(verts[0][0] == doctest::Approx(1.25));
  CHECK(verts[3][1] == doctest::Approx(4.0));
  CurveChart c = build_chart(verts, 0.0);
  CHECK(c.min_cos() == doctest::Approx(1.0 / std::sqrt(2.0)));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_curve_file("missing_curve.txt"), InputError);
  {
    std::ofstream f(path);
    f << "1.0 not-a-number\n";
  }
  CHECK_THROWS_AS(read_curve_file(path), InputError);
  std::filesystem::remove(path);
  {
    std::ofstream f(path);
    f << "1.0 2.0\n";
  }
  CHECK_THROWS_AS(read_curve_file(path), InputError);  // fewer than two vertices
  std::filesystem::remove(path);
}

}  // TEST_SUITE
