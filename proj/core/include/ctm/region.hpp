#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctm/lattice.hpp"

namespace ctm {

// A set of lattice sites (sorted, unique). Regions are the supports of the
// projector subspaces; they must be non-empty subsets of the lattice.
struct Region {
  std::string name;
  std::vector<std::int64_t> sites;

  std::int64_t size() const { return static_cast<std::int64_t>(sites.size()); }
  bool contains(std::int64_t site) const;
};

// Validates, sorts and dedupes. Empty selection or out-of-range site -> error.
Region make_region(const Lattice& lat, std::vector<std::int64_t> sites, std::string name);

Region region_from_mask(const Lattice& lat, const std::vector<bool>& mask, std::string name);

// Predicate over site coordinates (time, x, ...).
Region region_from_predicate(const Lattice& lat,
                             const std::function<bool(const Eigen::Vector3d&)>& pred,
                             std::string name);

// Axis-aligned coordinate box, inclusive bounds with a relative tolerance of
// 1e-9 spacing so sites sitting exactly on a bound are kept.
Region region_rect(const Lattice& lat, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                   std::string name);

// Half-plane coord[axis] <= c (side = -1) or >= c (side = +1).
Region region_halfplane(const Lattice& lat, int axis, int side, double c, std::string name);

Region region_union(const Lattice& lat, const Region& a, const Region& b, std::string name);
Region region_intersection(const Lattice& lat, const Region& a, const Region& b,
                           std::string name);
Region region_difference(const Lattice& lat, const Region& a, const Region& b,
                         std::string name);

// Line-oriented site-index list; '#' starts a comment.
Region read_region_file(const std::string& path, const Lattice& lat);
void write_region_file(const std::string& path, const Region& region);

}  // namespace ctm
