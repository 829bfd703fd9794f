#include "ctm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

// Smallest eigenvalue of the active block; closed form for 2x2.
double block_lambda_min(const Eigen::Matrix3d& g, int dim) {
  if (dim == 2) {
    const double a = g(0, 0), b = g(0, 1), d = g(1, 1);
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return mean - disc;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

MetricField::MetricField(const Lattice& lat, std::vector<Eigen::Matrix3d> g,
                         std::string family_name)
    : dim_(lat.dim), family_(std::move(family_name)), g_(std::move(g)) {
  const std::int64_t n = lat.site_count();
  if (static_cast<std::int64_t>(g_.size()) != n)
    throw UsageError("metric.sample_metric: " + family_ + " produced " +
                     std::to_string(g_.size()) + " tensors for " + std::to_string(n) + " sites");

  inv_.resize(g_.size());
  sqrt_det_.resize(g_.size());
  lambda_min_.resize(g_.size());
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::Matrix3d& gi = g_[i];
    // Enforce exact symmetry; samplers produce symmetric data, this guards
    // against asymmetric tabulated input sneaking through arithmetic.
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (std::abs(gi(a, b) - gi(b, a)) > 1e-12 * (1.0 + std::abs(gi(a, b))))
          throw MetricError("metric.sample_metric: asymmetric tensor at site " +
                            std::to_string(i));
        gi(b, a) = gi(a, b);
      }
    const double lmin = block_lambda_min(gi, dim_);
    lambda_min_[i] = lmin;
    if (!(lmin > 0.0))
      throw MetricError("metric.sample_metric: non-positive-definite tensor at site " +
                        std::to_string(i) + " (lambda_min = " + std::to_string(lmin) + ")");
    double det;
    Eigen::Matrix3d inv;
    if (dim_ == 2) {
      det = gi(0, 0) * gi(1, 1) - gi(0, 1) * gi(0, 1);
      inv = Eigen::Matrix3d::Identity();
      inv(0, 0) = gi(1, 1) / det;
      inv(1, 1) = gi(0, 0) / det;
      inv(0, 1) = inv(1, 0) = -gi(0, 1) / det;
    } else {
      det = gi.determinant();
      inv = gi.inverse();
    }
    inv_[i] = inv;
    sqrt_det_[i] = std::sqrt(det);
  }

  // Stationarity = bitwise equality of every time slice with slice 0.
  stationary_ = true;
  const std::int64_t ssz = lat.slice_size();
  for (int t = 1; t < lat.slice_count() && stationary_; ++t)
    for (std::int64_t s = 0; s < ssz; ++s) {
      if (std::memcmp(g_[t * ssz + s].data(), g_[s].data(), 9 * sizeof(double)) != 0) {
        stationary_ = false;
        break;
      }
    }
}

MetricSpec MetricSpec::flat() { return MetricSpec{}; }

MetricSpec MetricSpec::diagonal(std::vector<double> diag) {
  MetricSpec s;
  s.family = Family::diagonal_stationary;
  s.diag = std::move(diag);
  return s;
}

MetricSpec MetricSpec::conformal_constant(double phi) {
  MetricSpec s;
  s.family = Family::conformal;
  s.phi_constant = phi;
  return s;
}

MetricSpec MetricSpec::conformal_values(std::vector<double> phi) {
  MetricSpec s;
  s.family = Family::conformal;
  s.phi_values = std::move(phi);
  return s;
}

MetricSpec MetricSpec::conformal_bump(double amplitude, double width, std::vector<double> center) {
  MetricSpec s;
  s.family = Family::conformal;
  s.phi_bump = Bump{amplitude, width, std::move(center)};
  return s;
}

MetricSpec MetricSpec::curve_induced(CurveChart chart) {
  MetricSpec s;
  s.family = Family::curve_induced;
  s.chart = std::move(chart);
  return s;
}

MetricSpec MetricSpec::tabulated(std::string path) {
  MetricSpec s;
  s.family = Family::tabulated;
  s.table_path = std::move(path);
  return s;
}

MetricField sample_metric(const Lattice& lat, const MetricSpec& spec) {
  const std::int64_t n = lat.site_count();
  std::vector<Eigen::Matrix3d> g(n, Eigen::Matrix3d::Identity());

  switch (spec.family) {
    case MetricSpec::Family::flat:
      return MetricField(lat, std::move(g), "flat");

    case MetricSpec::Family::diagonal_stationary: {
      if (!spec.diag.empty() && static_cast<int>(spec.diag.size()) != lat.dim)
        throw ConfigError("metric.sample_metric: diagonal-stationary needs " +
                          std::to_string(lat.dim) + " diag entries, got " +
                          std::to_string(spec.diag.size()));
      if (!spec.profiles.empty() && static_cast<int>(spec.profiles.size()) != lat.dim)
        throw ConfigError("metric.sample_metric: diagonal-stationary profiles must list every "
                          "axis (empty profile = constant)");
      const std::int64_t ssz = lat.slice_size();
      for (int a = 0; a < lat.dim; ++a) {
        const double c = spec.diag.empty() ? 1.0 : spec.diag[a];
        const std::vector<double>* prof = nullptr;
        if (!spec.profiles.empty() && !spec.profiles[a].empty()) {
          prof = &spec.profiles[a];
          if (static_cast<std::int64_t>(prof->size()) != ssz)
            throw ConfigError("metric.sample_metric: profile for axis " + std::to_string(a) +
                              " has " + std::to_string(prof->size()) + " values, expected " +
                              std::to_string(ssz));
        }
        for (std::int64_t i = 0; i < n; ++i) {
          const std::int64_t s = i % ssz;
          g[i](a, a) = prof ? (*prof)[s] : c;
        }
      }
      return MetricField(lat, std::move(g), "diagonal-stationary");
    }

    case MetricSpec::Family::conformal: {
      std::vector<double> phi;
      if (spec.phi_bump) {
        const auto& b = *spec.phi_bump;
        if (static_cast<int>(b.center.size()) != lat.dim)
          throw ConfigError("metric.sample_metric: conformal bump center needs " +
                            std::to_string(lat.dim) + " coordinates");
        if (!(b.width > 0.0))
          throw ConfigError("metric.sample_metric: conformal bump width must be positive");
        phi.resize(n);
        for (std::int64_t i = 0; i < n; ++i) {
          const Eigen::Vector3d x = lat.coordinates(i);
          double r2 = 0.0;
          for (int a = 0; a < lat.dim; ++a) r2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
          phi[i] = b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
        }
      } else if (!spec.phi_values.empty()) {
        if (static_cast<std::int64_t>(spec.phi_values.size()) != n)
          throw ConfigError("metric.sample_metric: conformal phi has " +
                            std::to_string(spec.phi_values.size()) + " values for " +
                            std::to_string(n) + " sites");
        phi = spec.phi_values;
      } else {
        phi.assign(n, spec.phi_constant);
      }
      for (std::int64_t i = 0; i < n; ++i) {
        const double f = std::exp(2.0 * phi[i]);
        for (int a = 0; a < lat.dim; ++a) g[i](a, a) = f;
      }
      return MetricField(lat, std::move(g), "conformal");
    }

    case MetricSpec::Family::curve_induced: {
      if (lat.dim != 2)
        throw UsageError("metric.sample_metric: curve-induced metrics are 1+1 dimensional");
      if (!spec.chart) throw ConfigError("metric.sample_metric: curve-induced needs a chart");
      const CurveChart& chart = *spec.chart;
      for (std::int64_t i = 0; i < n; ++i) {
        const double xi = lat.coordinates(i)[1];
        Eigen::Matrix2d m;
        try {
          m = chart.metric_at(xi);
        } catch (const GeometryError&) {
          throw GeometryError("metric.sample_metric: site " + std::to_string(i) + " at xi = " +
                              std::to_string(xi) + " outside curve extent [" +
                              std::to_string(chart.xi_min()) + ", " +
                              std::to_string(chart.xi_max()) + "]");
        }
        g[i].topLeftCorner<2, 2>() = m;
      }
      return MetricField(lat, std::move(g), "curve-induced");
    }

    case MetricSpec::Family::tabulated: {
      g = read_tabulated_metric(spec.table_path, lat);
      return MetricField(lat, std::move(g), "tabulated");
    }
  }
  throw ConfigError("metric.sample_metric: unknown family");
}

StabilityReport check_stable_positivity(const MetricField& metric, double epsilon) {
  if (!(epsilon > 0.0))
    throw ConfigError("metric.check_stable_positivity: epsilon must be positive, got " +
                      std::to_string(epsilon));
  StabilityReport rep;
  rep.epsilon = epsilon;
  rep.threshold = metric.dim() * epsilon;
  rep.min_lambda = std::numeric_limits<double>::infinity();
  rep.worst_site = -1;
  for (std::int64_t i = 0; i < metric.site_count(); ++i) {
    const double l = metric.lambda_min(i);
    if (l < rep.min_lambda) {
      rep.min_lambda = l;
      rep.worst_site = i;
    }
  }
  rep.pass = rep.min_lambda > rep.threshold;
  return rep;
}

Eigen::VectorXd measure_weights(const Lattice& lat, const MetricField& metric) {
  const double vol = lat.cell_volume();
  Eigen::VectorXd mu(lat.site_count());
  for (std::int64_t i = 0; i < lat.site_count(); ++i) mu[i] = metric.sqrt_det(i) * vol;
  return mu;
}

std::vector<Eigen::Matrix3d> read_tabulated_metric(const std::string& path, const Lattice& lat) {
  std::ifstream in(path);
  if (!in) throw InputError("metric.read_tabulated_metric: cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header))
    throw InputError("metric.read_tabulated_metric: '" + path + "' is empty");
  std::istringstream hs(header);
  int dim = 0;
  hs >> dim;
  if (dim != lat.dim)
    throw InputError("metric.read_tabulated_metric: '" + path + "' is " + std::to_string(dim) +
                     "-dimensional, lattice is " + std::to_string(lat.dim) + "-dimensional");
  for (int a = 0; a < lat.dim; ++a) {
    int sa = 0;
    if (!(hs >> sa) || sa != lat.shape[a])
      throw InputError("metric.read_tabulated_metric: '" + path + "' shape mismatch on axis " +
                       std::to_string(a));
  }

  const int entries = dim * (dim + 1) / 2;
  const std::int64_t n = lat.site_count();
  std::vector<Eigen::Matrix3d> g(n, Eigen::Matrix3d::Identity());
  std::string line;
  std::int64_t i = 0;
  while (i < n) {
    if (!std::getline(in, line))
      throw InputError("metric.read_tabulated_metric: '" + path + "' ends after " +
                       std::to_string(i) + " of " + std::to_string(n) + " records");
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double v[6];
    for (int k = 0; k < entries; ++k)
      if (!(ls >> v[k]))
        throw InputError("metric.read_tabulated_metric: '" + path + "' record " +
                         std::to_string(i) + " holds fewer than " + std::to_string(entries) +
                         " entries");
    int k = 0;
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        g[i](a, b) = v[k];
        g[i](b, a) = v[k];
        ++k;
      }
    ++i;
  }
  return g;
}

void write_tabulated_metric(const std::string& path, const Lattice& lat,
                            const MetricField& metric) {
  std::ofstream out(path);
  if (!out) throw InputError("metric.write_tabulated_metric: cannot open '" + path + "'");
  out << lat.dim;
  for (int a = 0; a < lat.dim; ++a) out << ' ' << lat.shape[a];
  out << '\n';
  out.precision(17);
  for (std::int64_t i = 0; i < lat.site_count(); ++i) {
    bool first = true;
    for (int a = 0; a < lat.dim; ++a)
      for (int b = a; b < lat.dim; ++b) {
        if (!first) out << ',';
        out << metric.g(i)(a, b);
        first = false;
      }
    out << '\n';
  }
}

}  // namespace ctm
