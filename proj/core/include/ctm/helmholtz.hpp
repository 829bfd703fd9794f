#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ctm/lattice.hpp"
#include "ctm/metric.hpp"

namespace ctm {

// Graph of sites coupled by the assembled operator: edge (i, j) wherever the
// off-diagonal matrix entry is nonzero, i.e. the sites share a cell.
struct AdjacencyGraph {
  std::int64_t n = 0;
  std::vector<std::int64_t> offsets;   // size n + 1
  std::vector<std::int64_t> neighbors; // concatenated, sorted per row

  std::int64_t degree(std::int64_t i) const { return offsets[i + 1] - offsets[i]; }
  bool connected() const;
};

// Discrete Helmholtz operator (Laplace-Beltrami + m^2) on a metric lattice.
//
// Assembled with multilinear nodal elements over the cells of the grid plus
// one ring of ghost cells carrying the zero Dirichlet boundary; the metric on
// a cell is the average of its corner tensors (ghost corners clamp to the
// nearest site). Stored is the symmetric bilinear-form matrix
//   W(i,j) = integral( g^{kl} d_k phi_i d_l phi_j + m^2 phi_i phi_j ) sqrt(g),
// and the operator acts through the site measure mu as A = diag(mu)^-1 W, so
// diag(mu) A is symmetric by construction.
class WeightedOperator {
public:
  WeightedOperator(const Lattice& lat, Eigen::SparseMatrix<double> weighted,
                   Eigen::VectorXd mu, double mass);

  std::int64_t size() const { return mu_.size(); }
  double mass() const { return mass_; }
  const Lattice& lattice() const { return lattice_; }
  const Eigen::VectorXd& mu() const { return mu_; }

  // diag(mu) * A; symmetric, positive definite.
  const Eigen::SparseMatrix<double>& weighted_matrix() const { return weighted_; }

  // The operator matrix A itself (built on demand; row i is weighted row / mu_i).
  Eigen::SparseMatrix<double> matrix() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  // Solves A u = rhs to relative residual 1e-12 in the mu-weighted norm.
  // Direct sparse factorization up to 5000 sites, diagonal-preconditioned
  // conjugate gradients above (cap 50 sqrt(n) iterations). Deterministic.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  // Solves the symmetric system diag(mu) A u = b (one Green-kernel column for
  // b = e_j).
  Eigen::VectorXd solve_weighted(const Eigen::VectorXd& b) const;

  static constexpr std::int64_t kDirectSolveLimit = 5000;

private:
  Lattice lattice_;
  Eigen::SparseMatrix<double> weighted_;
  Eigen::VectorXd mu_;
  double mass_;
  mutable std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  void ensure_factor() const;
};

// mass must be positive; the m^2 term keeps the form definite under the
// ghost-layer Dirichlet condition.
WeightedOperator assemble_helmholtz(const Lattice& lat, const MetricField& metric, double mass);

AdjacencyGraph adjacency_graph(const WeightedOperator& op);

// Distance of the scaled metric m*g along lattice paths: every cell-sharing
// edge carries length m * sqrt(d^T g d) with g averaged over the endpoints
// ("midpoint sampled"), and the distance is the shortest-path sum. Convention:
// rho_m(a, b) = m * dist_g(a, b) for constant m.
double agmon_distance(const Lattice& lat, const MetricField& metric, double mass,
                      std::int64_t a, std::int64_t b);

// Single-source variant, distances to every site.
Eigen::VectorXd agmon_distances(const Lattice& lat, const MetricField& metric, double mass,
                                std::int64_t source);

// Discrete Green kernel E = (diag(mu) A)^{-1}. Entries are kernel values with
// respect to the site measure: operators act as (E f)_i = sum_j E(i,j) f_j mu_j,
// and columns solve diag(mu) A E_col(j) = e_j. Dense storage up to 5000 sites,
// cached column-on-demand solves above.
class GreenKernel {
public:
  static constexpr std::int64_t kDenseLimit = 5000;

  explicit GreenKernel(const WeightedOperator& op);

  bool dense() const { return dense_.size() > 0; }
  std::int64_t size() const { return op_->size(); }
  const WeightedOperator& op() const { return *op_; }

  double operator()(std::int64_t i, std::int64_t j) const;
  Eigen::VectorXd column(std::int64_t j) const;
  const Eigen::MatrixXd& dense_matrix() const;

  // Integral-operator application (E f)_i = sum_j E(i,j) f_j mu_j: exact
  // inverse of WeightedOperator::apply. One weighted solve when not dense.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

private:
  const WeightedOperator* op_;
  Eigen::MatrixXd dense_;
  mutable std::vector<std::unique_ptr<Eigen::VectorXd>> cache_;
};

}  // namespace ctm
