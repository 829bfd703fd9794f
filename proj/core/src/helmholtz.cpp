#include "ctm/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

struct CellRule {
  // Values and gradients of the 2^dim multilinear basis functions at the
  // 2^dim tensor Gauss points of one cell; exact for products of multilinears
  // up to the cubic terms the form produces.
  int dim = 2;
  int ncorner = 4, ngp = 4;
  double weight = 0.0;                    // cell volume / ngp
  double val[8][8];                       // [gp][corner]
  double grad[8][8][3];                   // [gp][corner][axis]

  CellRule(const Lattice& lat) {
    dim = lat.dim;
    ncorner = 1 << dim;
    ngp = 1 << dim;
    weight = lat.cell_volume() / ngp;
    const double q = 0.5 / std::sqrt(3.0);
    for (int g = 0; g < ngp; ++g) {
      double p[3];
      for (int a = 0; a < dim; ++a) p[a] = 0.5 + (((g >> a) & 1) ? q : -q);
      for (int c = 0; c < ncorner; ++c) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= ((c >> a) & 1) ? p[a] : 1.0 - p[a];
        val[g][c] = v;
        for (int a = 0; a < dim; ++a) {
          double d = (((c >> a) & 1) ? 1.0 : -1.0) / lat.spacing[a];
          for (int b = 0; b < dim; ++b)
            if (b != a) d *= ((c >> b) & 1) ? p[b] : 1.0 - p[b];
          grad[g][c][a] = d;
        }
      }
    }
  }
};

}  // namespace

bool AdjacencyGraph::connected() const {
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::int64_t> stack{0};
  seen[0] = 1;
  std::int64_t count = 1;
  while (!stack.empty()) {
    const std::int64_t i = stack.back();
    stack.pop_back();
    for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      const std::int64_t j = neighbors[k];
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == n;
}

WeightedOperator::WeightedOperator(const Lattice& lat, Eigen::SparseMatrix<double> weighted,
                                   Eigen::VectorXd mu, double mass)
    : lattice_(lat), weighted_(std::move(weighted)), mu_(std::move(mu)), mass_(mass) {}

Eigen::SparseMatrix<double> WeightedOperator::matrix() const {
  Eigen::SparseMatrix<double> a = weighted_;
  for (std::int64_t j = 0; j < a.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it)
      it.valueRef() /= mu_[it.row()];
  return a;
}

Eigen::VectorXd WeightedOperator::apply(const Eigen::VectorXd& f) const {
  if (f.size() != size())
    throw UsageError("operator.apply: field has " + std::to_string(f.size()) +
                     " entries, operator has " + std::to_string(size()) + " sites");
  return (weighted_ * f).cwiseQuotient(mu_);
}

void WeightedOperator::ensure_factor() const {
  if (ldlt_) return;
  ldlt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  ldlt_->compute(weighted_);
  if (ldlt_->info() != Eigen::Success)
    throw NumericError("operator.solve: sparse factorization failed (matrix not SPD?)");
}

Eigen::VectorXd WeightedOperator::solve_weighted(const Eigen::VectorXd& b) const {
  if (b.size() != size())
    throw UsageError("operator.solve: rhs has " + std::to_string(b.size()) +
                     " entries, operator has " + std::to_string(size()) + " sites");
  if (b.isZero(0.0)) return Eigen::VectorXd::Zero(size());

  Eigen::VectorXd u;
  if (size() <= kDirectSolveLimit) {
    ensure_factor();
    u = ldlt_->solve(b);
    // One refinement step keeps the weighted residual at the contract even for
    // ill-scaled metrics.
    Eigen::VectorXd r = b - weighted_ * u;
    u += ldlt_->solve(r);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(1e-13);
    cg.setMaxIterations(static_cast<Eigen::Index>(50.0 * std::sqrt(double(size()))));
    cg.compute(weighted_);
    u = cg.solve(b);
  }

  // Contract: relative residual of A u = rhs in the mu-weighted norm <= 1e-12.
  // With diag(mu) A u = b the residual of the unweighted row system is
  // r = b - W u and the A-residual is r / mu.
  const Eigen::VectorXd r = b - weighted_ * u;
  const double num = std::sqrt((r.array().square() / mu_.array()).sum());
  const double den = std::sqrt((b.array().square() / mu_.array()).sum());
  const double rel = num / den;
  if (!(rel <= 1e-12))
    throw NumericError("operator.solve: relative residual " + std::to_string(rel) +
                           " exceeds 1e-12",
                       rel);
  return u;
}

Eigen::VectorXd WeightedOperator::solve(const Eigen::VectorXd& rhs) const {
  return solve_weighted(mu_.asDiagonal() * rhs);
}

WeightedOperator assemble_helmholtz(const Lattice& lat, const MetricField& metric, double mass) {
  if (!(mass > 0.0))
    throw ConfigError("operator.assemble_helmholtz: mass must be positive, got " +
                      std::to_string(mass));
  if (metric.site_count() != lat.site_count() || metric.dim() != lat.dim)
    throw UsageError("operator.assemble_helmholtz: metric does not match lattice");

  const int dim = lat.dim;
  const CellRule rule(lat);
  const int nc = rule.ncorner;

  std::vector<Eigen::Triplet<double>> trips;
  {
    std::int64_t ncells = 1;
    for (int a = 0; a < dim; ++a) ncells *= lat.shape[a] + 1;
    trips.reserve(static_cast<std::size_t>(ncells) * nc * nc);
  }

  // Cells run one step past the sites on every side; corners outside the grid
  // are the Dirichlet ghost layer (zero basis, metric clamped to the edge).
  std::array<int, 3> cell{};
  std::int64_t corner_site[8];
  bool corner_real[8];

  const std::function<void(int)> recurse = [&](int axis) {
    if (axis == dim) {
      for (int c = 0; c < nc; ++c) {
        std::array<int, 3> idx{};
        bool real = true;
        std::array<int, 3> clamped{};
        for (int a = 0; a < dim; ++a) {
          idx[a] = cell[a] + ((c >> a) & 1);
          if (idx[a] < 0 || idx[a] >= lat.shape[a]) real = false;
          clamped[a] = std::clamp(idx[a], 0, lat.shape[a] - 1);
        }
        corner_real[c] = real;
        corner_site[c] = lat.index_of(real ? idx : clamped);
      }

      Eigen::Matrix3d gavg = Eigen::Matrix3d::Zero();
      for (int c = 0; c < nc; ++c) gavg += metric.g(corner_site[c]);
      gavg /= nc;

      double det;
      Eigen::Matrix3d ginv = Eigen::Matrix3d::Identity();
      if (dim == 2) {
        det = gavg(0, 0) * gavg(1, 1) - gavg(0, 1) * gavg(0, 1);
        ginv(0, 0) = gavg(1, 1) / det;
        ginv(1, 1) = gavg(0, 0) / det;
        ginv(0, 1) = ginv(1, 0) = -gavg(0, 1) / det;
      } else {
        det = gavg.topLeftCorner<3, 3>().determinant();
        ginv = gavg.inverse();
      }
      const double sqg = std::sqrt(det);
      const double cmass = mass * mass * sqg;

      double local[8][8];
      for (int c1 = 0; c1 < nc; ++c1)
        for (int c2 = c1; c2 < nc; ++c2) {
          double acc = 0.0;
          for (int g = 0; g < rule.ngp; ++g) {
            double stiff = 0.0;
            for (int a = 0; a < dim; ++a) {
              double ka = 0.0;
              for (int b = 0; b < dim; ++b) ka += ginv(a, b) * rule.grad[g][c2][b];
              stiff += rule.grad[g][c1][a] * ka;
            }
            acc += rule.weight * (sqg * stiff + cmass * rule.val[g][c1] * rule.val[g][c2]);
          }
          local[c1][c2] = acc;
          local[c2][c1] = acc;
        }

      for (int c1 = 0; c1 < nc; ++c1) {
        if (!corner_real[c1]) continue;
        for (int c2 = 0; c2 < nc; ++c2) {
          if (!corner_real[c2]) continue;
          trips.emplace_back(static_cast<int>(corner_site[c1]),
                             static_cast<int>(corner_site[c2]), local[c1][c2]);
        }
      }
      return;
    }
    for (cell[axis] = -1; cell[axis] < lat.shape[axis]; ++cell[axis]) recurse(axis + 1);
  };
  recurse(0);

  Eigen::SparseMatrix<double> w(lat.site_count(), lat.site_count());
  w.setFromTriplets(trips.begin(), trips.end());
  w.makeCompressed();

  return WeightedOperator(lat, std::move(w), measure_weights(lat, metric), mass);
}

AdjacencyGraph adjacency_graph(const WeightedOperator& op) {
  const auto& w = op.weighted_matrix();
  AdjacencyGraph g;
  g.n = op.size();
  g.offsets.assign(g.n + 1, 0);
  for (std::int64_t j = 0; j < w.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0) ++g.offsets[it.col() + 1];
  for (std::int64_t i = 0; i < g.n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.neighbors.resize(g.offsets[g.n]);
  std::vector<std::int64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (std::int64_t j = 0; j < w.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0)
        g.neighbors[cursor[it.col()]++] = it.row();
  for (std::int64_t i = 0; i < g.n; ++i)
    std::sort(g.neighbors.begin() + g.offsets[i], g.neighbors.begin() + g.offsets[i + 1]);
  return g;
}

namespace {

Eigen::VectorXd dijkstra(const Lattice& lat, const MetricField& metric, double mass,
                         std::int64_t source, std::int64_t stop_at) {
  if (!(mass > 0.0))
    throw ConfigError("operator.agmon_distance: mass must be positive, got " +
                      std::to_string(mass));
  const std::int64_t n = lat.site_count();
  if (source < 0 || source >= n)
    throw UsageError("operator.agmon_distance: source site " + std::to_string(source) +
                     " out of range");

  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  queue.push({0.0, source});

  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (d > dist[i]) continue;
    if (i == stop_at) break;
    const auto idx = lat.multi_index(i);
    // Cell-sharing neighbors: every site within one step along each axis.
    std::array<int, 3> nb{};
    const int range = lat.dim;
    std::array<int, 3> off{};
    const std::function<void(int)> walk = [&](int axis) {
      if (axis == range) {
        bool self = true;
        for (int a = 0; a < range; ++a) self = self && off[a] == 0;
        if (self) return;
        for (int a = 0; a < range; ++a) nb[a] = idx[a] + off[a];
        if (!lat.inside(nb)) return;
        const std::int64_t j = lat.index_of(nb);
        Eigen::Vector3d delta = Eigen::Vector3d::Zero();
        for (int a = 0; a < range; ++a) delta[a] = off[a] * lat.spacing[a];
        const Eigen::Matrix3d gmid = 0.5 * (metric.g(i) + metric.g(j));
        const double len = mass * std::sqrt(delta.dot(gmid * delta));
        if (dist[i] + len < dist[j]) {
          dist[j] = dist[i] + len;
          queue.push({dist[j], j});
        }
        return;
      }
      for (off[axis] = -1; off[axis] <= 1; ++off[axis]) walk(axis + 1);
    };
    walk(0);
  }
  return dist;
}

}  // namespace

double agmon_distance(const Lattice& lat, const MetricField& metric, double mass,
                      std::int64_t a, std::int64_t b) {
  if (b < 0 || b >= lat.site_count())
    throw UsageError("operator.agmon_distance: target site " + std::to_string(b) +
                     " out of range");
  if (a == b) return 0.0;
  return dijkstra(lat, metric, mass, a, b)[b];
}

Eigen::VectorXd agmon_distances(const Lattice& lat, const MetricField& metric, double mass,
                                std::int64_t source) {
  return dijkstra(lat, metric, mass, source, -1);
}

GreenKernel::GreenKernel(const WeightedOperator& op) : op_(&op) {
  const std::int64_t n = op.size();
  if (n <= kDenseLimit) {
    dense_.resize(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (std::int64_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      dense_.col(j) = op.solve_weighted(e);
      e[j] = 0.0;
    }
  } else {
    cache_.resize(n);
  }
}

double GreenKernel::operator()(std::int64_t i, std::int64_t j) const {
  if (dense()) return dense_(i, j);
  if (cache_[j]) return (*cache_[j])[i];
  if (cache_[i]) return (*cache_[i])[j];  // symmetry of the kernel
  return column(j)[i];
}

Eigen::VectorXd GreenKernel::column(std::int64_t j) const {
  if (j < 0 || j >= size())
    throw UsageError("operator.green_kernel: column " + std::to_string(j) + " out of range");
  if (dense()) return dense_.col(j);
  if (!cache_[j]) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
    e[j] = 1.0;
    cache_[j] = std::make_unique<Eigen::VectorXd>(op_->solve_weighted(e));
  }
  return *cache_[j];
}

const Eigen::MatrixXd& GreenKernel::dense_matrix() const {
  if (!dense())
    throw UsageError("operator.green_kernel: dense matrix unavailable above " +
                     std::to_string(kDenseLimit) + " sites");
  return dense_;
}

Eigen::VectorXd GreenKernel::apply(const Eigen::VectorXd& f) const {
  if (f.size() != size())
    throw UsageError("operator.green_kernel: field has " + std::to_string(f.size()) +
                     " entries, kernel has " + std::to_string(size()) + " sites");
  // Integral-operator convention: (E f)_i = sum_j E(i,j) f_j mu_j, the exact
  // inverse of WeightedOperator::apply.
  if (dense()) return dense_ * op_->mu().cwiseProduct(f);
  return op_->solve(f);
}

}  // namespace ctm
