#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ctm {

// Uniform rectangular site grid in 1+1 or 2+1 dimensions. Axis 0 is time.
// Site i lives at origin[a] + index[a]*spacing[a]. The grid models the open
// interior of a Dirichlet box: the zero boundary sits one spacing outside the
// outermost sites, so every stored site is a degree of freedom.
//
// Linearization: axis 0 is slowest, i = t*slice_size + spatial index, with the
// last axis fastest inside a slice.
struct Lattice {
  int dim = 2;                          // 2 or 3
  std::array<int, 3> shape{};           // shape[a] for a < dim, rest unused
  std::array<double, 3> spacing{};
  std::array<double, 3> origin{};

  std::int64_t site_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= shape[a];
    return n;
  }

  // Number of sites per constant-time slice.
  std::int64_t slice_size() const {
    std::int64_t n = 1;
    for (int a = 1; a < dim; ++a) n *= shape[a];
    return n;
  }

  int slice_count() const { return shape[0]; }

  std::int64_t index_of(const std::array<int, 3>& idx) const {
    std::int64_t i = idx[0];
    for (int a = 1; a < dim; ++a) i = i * shape[a] + idx[a];
    return i;
  }

  std::array<int, 3> multi_index(std::int64_t i) const {
    std::array<int, 3> idx{};
    for (int a = dim - 1; a >= 1; --a) {
      idx[a] = static_cast<int>(i % shape[a]);
      i /= shape[a];
    }
    idx[0] = static_cast<int>(i);
    return idx;
  }

  int time_index(std::int64_t i) const { return static_cast<int>(i / slice_size()); }

  Eigen::Vector3d coordinates(std::int64_t i) const {
    const auto idx = multi_index(i);
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int a = 0; a < dim; ++a) x[a] = origin[a] + idx[a] * spacing[a];
    return x;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing[a];
    return v;
  }

  double spatial_cell_volume() const {
    double v = 1.0;
    for (int a = 1; a < dim; ++a) v *= spacing[a];
    return v;
  }

  bool inside(const std::array<int, 3>& idx) const {
    for (int a = 0; a < dim; ++a)
      if (idx[a] < 0 || idx[a] >= shape[a]) return false;
    return true;
  }
};

// Validates shape (>= 3 per axis), spacing (> 0) and dim; throws ConfigError
// naming the offending axis.
Lattice build_lattice(int dim, const std::vector<int>& shape,
                      const std::vector<double>& spacing,
                      const std::vector<double>& origin);

}  // namespace ctm
