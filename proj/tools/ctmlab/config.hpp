#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctm/curve_chart.hpp"
#include "ctm/lattice.hpp"
#include "ctm/metric.hpp"
#include "ctm/region.hpp"

namespace lab {

// Region selector, resolved against the experiment lattice when the stack is
// built. `original_boxes` selects chart-lattice sites whose original-frame
// (t, x) image falls in a union of axis boxes; it needs a chart and makes
// interlocked shapes declarative.
struct RegionSpec {
  enum class Kind { halfplane, rect, file, original_boxes };
  Kind kind = Kind::halfplane;
  std::string name;
  int axis = 0;
  int side = -1;
  double value = 0.0;
  std::array<double, 3> lo{}, hi{};
  std::string path;
  std::vector<std::array<double, 4>> boxes;  // t_lo, t_hi, x_lo, x_hi

  ctm::Region build(const ctm::Lattice& lat, const ctm::CurveChart* chart) const;
};

struct ExperimentConfig {
  std::string id;
  std::string kind;  // green | markov-check | transfer | spectrum | decouple
  ctm::Lattice lattice;
  ctm::MetricSpec metric;  // unused for decouple (chart-induced by definition)
  double mass = 1.0;
  std::uint64_t seed = 12345;
  std::string plot;  // optional SVG file name, relative to --out

  // green
  std::vector<std::array<int, 3>> sources;

  // markov-check
  std::optional<RegionSpec> region_a, region_cut, region_b;
  double tolerance = 1e-8;

  // transfer
  std::vector<double> taus;
  double rate_floor = 0.95;  // assert rate >= rate_floor * omega_max

  // spectrum
  int step = 2;

  // decouple
  std::vector<Eigen::Vector2d> curve;  // chart polyline (original frame)
  std::vector<double> rotations;       // one entry = single run, several = scan
  std::optional<RegionSpec> region_l1, region_l2;
  double bound_slack = 1.05;  // assert direct <= bound_slack * bound
};

// Parses and validates one experiment config. Relative file paths are
// resolved against the config file's directory and must exist before any
// numerics run. Everything wrong here throws ConfigError / InputError.
ExperimentConfig load_experiment(const std::string& path);

// Options file for verify-all (all keys optional): data_dir, seed, tier,
// workers. Command-line flags override.
struct SuiteConfig {
  std::optional<std::string> data_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tier;
  std::optional<int> workers;
};
SuiteConfig load_suite_config(const std::string& path);

}  // namespace lab
