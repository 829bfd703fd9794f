#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctm/curve_chart.hpp"
#include "ctm/lattice.hpp"

namespace ctm {

// Per-site symmetric positive definite metric tensor together with the
// derived quantities the assembly needs. Matrices are stored as 3x3 with the
// active dim x dim block in the top-left corner and identity padding below,
// so 1+1 and 2+1 dimensional fields share one layout.
class MetricField {
public:
  MetricField(const Lattice& lat, std::vector<Eigen::Matrix3d> g, std::string family_name);

  int dim() const { return dim_; }
  std::int64_t site_count() const { return static_cast<std::int64_t>(g_.size()); }
  const std::string& family() const { return family_; }

  const Eigen::Matrix3d& g(std::int64_t i) const { return g_[i]; }
  const Eigen::Matrix3d& inverse(std::int64_t i) const { return inv_[i]; }
  double sqrt_det(std::int64_t i) const { return sqrt_det_[i]; }
  double lambda_min(std::int64_t i) const { return lambda_min_[i]; }

  // Exact (bitwise) equality of the tensor across all time slices.
  bool is_stationary() const { return stationary_; }

private:
  int dim_;
  std::string family_;
  bool stationary_;
  std::vector<Eigen::Matrix3d> g_, inv_;
  std::vector<double> sqrt_det_, lambda_min_;
};

// Metric families. The sampling rules:
//   flat                 identity everywhere
//   diagonal-stationary  diag entries constant or profiled over the spatial
//                        grid, independent of time
//   conformal            exp(2 phi) * identity, phi constant, tabulated per
//                        site, or a Gaussian bump
//   curve-induced        chart metric of a polyline, sampled at each site's
//                        xi coordinate (1+1 dimensions only)
//   tabulated            upper-triangle entries from a text file
struct MetricSpec {
  enum class Family { flat, diagonal_stationary, conformal, curve_induced, tabulated };

  struct Bump {
    double amplitude = 0.0;
    double width = 1.0;
    std::vector<double> center;
  };

  Family family = Family::flat;

  // diagonal-stationary
  std::vector<double> diag;                   // per-axis constants
  std::vector<std::vector<double>> profiles;  // optional per-axis spatial profiles

  // conformal
  double phi_constant = 0.0;
  std::vector<double> phi_values;             // per-site, overrides the constant
  std::optional<Bump> phi_bump;               // overrides both

  // curve-induced
  std::optional<CurveChart> chart;

  // tabulated
  std::string table_path;

  static MetricSpec flat();
  static MetricSpec diagonal(std::vector<double> diag);
  static MetricSpec conformal_constant(double phi);
  static MetricSpec conformal_values(std::vector<double> phi);
  static MetricSpec conformal_bump(double amplitude, double width, std::vector<double> center);
  static MetricSpec curve_induced(CurveChart chart);
  static MetricSpec tabulated(std::string path);
};

MetricField sample_metric(const Lattice& lat, const MetricSpec& spec);

// Sufficient positivity criterion: smallest eigenvalue of g must exceed
// dim * epsilon at every site. epsilon <= 0 is a configuration error.
struct StabilityReport {
  bool pass = false;
  double epsilon = 0.0;
  double threshold = 0.0;     // dim * epsilon
  double min_lambda = 0.0;    // over all sites
  std::int64_t worst_site = -1;
};

StabilityReport check_stable_positivity(const MetricField& metric, double epsilon);

// Site measure mu_i = sqrt(det g_i) * prod_a spacing[a].
Eigen::VectorXd measure_weights(const Lattice& lat, const MetricField& metric);

// Tabulated metric file: header "dim shape...", then one record per site in
// site-index order holding the (dim)(dim+1)/2 upper-triangle entries of g,
// comma separated, row-major.
std::vector<Eigen::Matrix3d> read_tabulated_metric(const std::string& path, const Lattice& lat);
void write_tabulated_metric(const std::string& path, const Lattice& lat, const MetricField& metric);

}  // namespace ctm
