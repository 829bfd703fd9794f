#include "ctm/region.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

bool Region::contains(std::int64_t site) const {
  return std::binary_search(sites.begin(), sites.end(), site);
}

Region make_region(const Lattice& lat, std::vector<std::int64_t> sites, std::string name) {
  if (sites.empty())
    throw UsageError("region.make_region: empty selection for region '" + name + "'");
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  if (sites.front() < 0 || sites.back() >= lat.site_count())
    throw UsageError("region.make_region: region '" + name + "' has sites outside the lattice");
  return Region{std::move(name), std::move(sites)};
}

Region region_from_mask(const Lattice& lat, const std::vector<bool>& mask, std::string name) {
  if (static_cast<std::int64_t>(mask.size()) != lat.site_count())
    throw UsageError("region.region_from_mask: mask size does not match site count");
  std::vector<std::int64_t> sites;
  for (std::int64_t i = 0; i < lat.site_count(); ++i)
    if (mask[i]) sites.push_back(i);
  return make_region(lat, std::move(sites), std::move(name));
}

Region region_from_predicate(const Lattice& lat,
                             const std::function<bool(const Eigen::Vector3d&)>& pred,
                             std::string name) {
  std::vector<std::int64_t> sites;
  for (std::int64_t i = 0; i < lat.site_count(); ++i)
    if (pred(lat.coordinates(i))) sites.push_back(i);
  return make_region(lat, std::move(sites), std::move(name));
}

Region region_rect(const Lattice& lat, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                   std::string name) {
  return region_from_predicate(
      lat,
      [&](const Eigen::Vector3d& x) {
        for (int a = 0; a < lat.dim; ++a) {
          const double eps = 1e-9 * lat.spacing[a];
          if (x[a] < lo[a] - eps || x[a] > hi[a] + eps) return false;
        }
        return true;
      },
      std::move(name));
}

Region region_halfplane(const Lattice& lat, int axis, int side, double c, std::string name) {
  if (axis < 0 || axis >= lat.dim)
    throw UsageError("region.region_halfplane: axis out of range");
  if (side != -1 && side != 1)
    throw UsageError("region.region_halfplane: side must be -1 (<=) or +1 (>=)");
  const double eps = 1e-9 * lat.spacing[axis];
  return region_from_predicate(
      lat,
      [&](const Eigen::Vector3d& x) {
        return side < 0 ? x[axis] <= c + eps : x[axis] >= c - eps;
      },
      std::move(name));
}

Region region_union(const Lattice& lat, const Region& a, const Region& b, std::string name) {
  std::vector<std::int64_t> sites;
  sites.reserve(a.sites.size() + b.sites.size());
  std::set_union(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                 std::back_inserter(sites));
  return make_region(lat, std::move(sites), std::move(name));
}

Region region_intersection(const Lattice& lat, const Region& a, const Region& b,
                           std::string name) {
  std::vector<std::int64_t> sites;
  std::set_intersection(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                        std::back_inserter(sites));
  return make_region(lat, std::move(sites), std::move(name));
}

Region region_difference(const Lattice& lat, const Region& a, const Region& b,
                         std::string name) {
  std::vector<std::int64_t> sites;
  std::set_difference(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                      std::back_inserter(sites));
  return make_region(lat, std::move(sites), std::move(name));
}

Region read_region_file(const std::string& path, const Lattice& lat) {
  std::ifstream in(path);
  if (!in) throw InputError("region.read_region_file: cannot open '" + path + "'");
  std::vector<std::int64_t> sites;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::int64_t v;
    while (ls >> v) sites.push_back(v);
    if (!ls.eof()) {
      std::string tail;
      ls.clear();
      ls >> tail;
      if (!tail.empty())
        throw InputError("region.read_region_file: '" + path + "' line " +
                         std::to_string(lineno) + ": not a site index: '" + tail + "'");
    }
  }
  return make_region(lat, std::move(sites), path);
}

void write_region_file(const std::string& path, const Region& region) {
  std::ofstream out(path);
  if (!out) throw InputError("region.write_region_file: cannot open '" + path + "'");
  out << "# region " << region.name << "\n";
  for (const std::int64_t s : region.sites) out << s << "\n";
  if (!out) throw InputError("region.write_region_file: write failed for '" + path + "'");
}

}  // namespace ctm
