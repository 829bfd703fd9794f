#include "ctm/lattice.hpp"

#include <string>

#include "ctm/errors.hpp"

namespace ctm {

Lattice build_lattice(int dim, const std::vector<int>& shape,
                      const std::vector<double>& spacing,
                      const std::vector<double>& origin) {
  if (dim != 2 && dim != 3)
    throw ConfigError("lattice.build_lattice: dim must be 2 or 3, got " + std::to_string(dim));
  if (static_cast<int>(shape.size()) != dim || static_cast<int>(spacing.size()) != dim ||
      static_cast<int>(origin.size()) != dim)
    throw ConfigError("lattice.build_lattice: shape/spacing/origin must each have " +
                      std::to_string(dim) + " entries");
  Lattice lat;
  lat.dim = dim;
  for (int a = 0; a < dim; ++a) {
    if (shape[a] < 3)
      throw ConfigError("lattice.build_lattice: axis " + std::to_string(a) +
                        " needs at least 3 sites, got " + std::to_string(shape[a]));
    if (!(spacing[a] > 0.0))
      throw ConfigError("lattice.build_lattice: axis " + std::to_string(a) +
                        " needs positive spacing, got " + std::to_string(spacing[a]));
    lat.shape[a] = shape[a];
    lat.spacing[a] = spacing[a];
    lat.origin[a] = origin[a];
  }
  return lat;
}

}  // namespace ctm
