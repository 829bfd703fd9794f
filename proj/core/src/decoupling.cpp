#include "ctm/decoupling.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "ctm/errors.hpp"
#include "ctm/projector.hpp"
#include "ctm/transfer.hpp"

namespace ctm {

std::pair<double, double> map_regions(const Region& l1, const Region& l2,
                                      const Lattice& lat) {
  if (l1.sites.empty() || l2.sites.empty())
    throw UsageError("curvecoords.map_regions: empty region");
  double alpha = -std::numeric_limits<double>::infinity();
  double beta = std::numeric_limits<double>::infinity();
  for (const std::int64_t s : l1.sites) alpha = std::max(alpha, lat.coordinates(s)[0]);
  for (const std::int64_t s : l2.sites) beta = std::min(beta, lat.coordinates(s)[0]);
  if (!(beta > alpha))
    throw GeometryError("curvecoords.map_regions: regions '" + l1.name + "' and '" +
                        l2.name + "' straddle the curve (alpha = " + std::to_string(alpha) +
                        " >= beta = " + std::to_string(beta) + ")");
  return {alpha, beta};
}

double decoupling_bound(double mass, double alpha, double beta, double min_cos) {
  if (!(mass > 0.0))
    throw UsageError("curvecoords.decoupling_bound: mass must be positive");
  if (!(beta > alpha))
    throw UsageError("curvecoords.decoupling_bound: requires beta > alpha");
  if (!(min_cos > 0.0) || min_cos > 1.0)
    throw UsageError("curvecoords.decoupling_bound: min_cos must lie in (0, 1]");
  return std::exp(-mass * (beta - alpha) * min_cos);
}

Region region_in_original(const Lattice& lat, const CurveChart& chart,
                          const std::function<bool(double, double)>& pred,
                          std::string name) {
  return region_from_predicate(
      lat,
      [&](const Eigen::Vector3d& c) {
        const Eigen::Vector2d tx = chart.to_original(Eigen::Vector2d(c[0], c[1]));
        return pred(tx[0], tx[1]);
      },
      std::move(name));
}

DecouplingReport decoupling_experiment(const NSpace& space, const CurveChart& chart,
                                       const Region& l1, const Region& l2,
                                       const PowerOpts& opts) {
  const Lattice& lat = space.lattice();
  DecouplingReport rep;
  std::tie(rep.alpha, rep.beta) = map_regions(l1, l2, lat);
  rep.min_cos = chart.min_cos();
  rep.bound = decoupling_bound(space.op().mass(), rep.alpha, rep.beta, rep.min_cos);
  rep.direct = cross_norm(space, l1, l2, opts);
  rep.margin = rep.bound - rep.direct;

  // The separating sigma-lines are lattice slices (alpha and beta are site
  // coordinates); the corridor quantities live on them.
  const double h0 = lat.spacing[0];
  rep.alpha_slice = static_cast<int>(std::llround((rep.alpha - lat.origin[0]) / h0));
  rep.beta_slice = static_cast<int>(std::llround((rep.beta - lat.origin[0]) / h0));
  const int nt = lat.slice_count();
  if (rep.alpha_slice < 2 || rep.beta_slice > nt - 3)
    throw GeometryError(
        "curvecoords.decoupling_experiment: separating slices " +
        std::to_string(rep.alpha_slice) + ", " + std::to_string(rep.beta_slice) +
        " leave the interior window (two slices off the time boundary) on " +
        std::to_string(nt) + " slices");

  const SliceSpace& sa = space.slice(rep.alpha_slice);
  const SliceSpace& sb = space.slice(rep.beta_slice);
  const Region ra = make_region(lat, sa.sites(), "sigma-alpha");
  const Region rb = make_region(lat, sb.sites(), "sigma-beta");
  rep.corridor_cross = cross_norm(space, ra, rb, opts);
  rep.corridor_transfer = operator_norm(Propagator(space, rep.beta_slice, rep.alpha_slice),
                                        opts);
  return rep;
}

}  // namespace ctm
