#pragma once

#include <functional>
#include <string>
#include <utility>

#include "ctm/curve_chart.hpp"
#include "ctm/nspace.hpp"
#include "ctm/power.hpp"
#include "ctm/region.hpp"

namespace ctm {

struct DecouplingReport {
  double alpha = 0.0, beta = 0.0;  // separating sigma-lines in the chart frame
  double min_cos = 0.0;
  double bound = 0.0;              // exp(-m (beta - alpha) min_cos)
  double direct = 0.0;             // measured ||e_{l1} e_{l2}||
  double margin = 0.0;             // bound - direct
  double corridor_cross = 0.0;     // ||e_alpha e_beta|| over the two slice lines
  double corridor_transfer = 0.0;  // ||U|| between the same slices
  int alpha_slice = 0, beta_slice = 0;
};

// sigma-extent of the two regions on the chart lattice: alpha = max sigma over
// l1, beta = min sigma over l2. A region reaching past the other side
// (beta <= alpha) means no sigma-line separates them: geometry error.
std::pair<double, double> map_regions(const Region& l1, const Region& l2, const Lattice& lat);

// exp(-mass * (beta - alpha) * min_cos); preconditions are hard errors.
double decoupling_bound(double mass, double alpha, double beta, double min_cos);

// Region on the chart lattice selected by a predicate over ORIGINAL (t, x)
// coordinates; each site is pushed through the chart map before the test.
Region region_in_original(const Lattice& lat, const CurveChart& chart,
                          const std::function<bool(double, double)>& pred, std::string name);

// The full decoupling chain on a chart-metric lattice: separating lines from
// the region geometry, the exponential bound, the directly measured cross
// norm, and the two corridor quantities whose equality is the chain's pivot
// (||e_alpha e_beta|| = ||U|| between the separating slices). The separating
// slices must sit in the interior window (two slices off the time boundary).
DecouplingReport decoupling_experiment(const NSpace& space, const CurveChart& chart,
                                       const Region& l1, const Region& l2,
                                       const PowerOpts& opts = {});

}  // namespace ctm
