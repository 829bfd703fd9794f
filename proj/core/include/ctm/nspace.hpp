#pragma once

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ctm/helmholtz.hpp"

namespace ctm {

class SliceSpace;

// Hilbert structure carried by the Green kernel: the inner product of two
// site fields is the kernel sandwich
//   <f, h> = sum_{ij} f_i mu_i E(i,j) mu_j h_j = f^T G h,  G = diag(mu) E diag(mu),
// the Gram matrix of the site delta distributions. Field vectors are real.
class NSpace {
public:
  explicit NSpace(const GreenKernel& kernel);

  const GreenKernel& kernel() const { return *kernel_; }
  const WeightedOperator& op() const { return kernel_->op(); }
  const Lattice& lattice() const { return kernel_->op().lattice(); }
  std::int64_t size() const { return kernel_->size(); }
  const Eigen::VectorXd& mu() const { return kernel_->op().mu(); }

  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const;
  double norm(const Eigen::VectorXd& f) const;

  // G f. One kernel application (dense matvec or one weighted solve).
  Eigen::VectorXd apply_gram(const Eigen::VectorXd& f) const;

  // Kernel and Gram blocks over explicit site lists (rows x cols).
  Eigen::MatrixXd kernel_block(const std::vector<std::int64_t>& rows,
                               const std::vector<std::int64_t>& cols) const;
  Eigen::MatrixXd gram_block(const std::vector<std::int64_t>& rows,
                             const std::vector<std::int64_t>& cols) const;

  // Slice geometry for constant-time slice sigma; built once and cached.
  const SliceSpace& slice(int sigma) const;

  // The equal-or-cross-time kernel block E(sigma x, sigma_p y) over full slices.
  Eigen::MatrixXd slice_kernel_block(int sigma, int sigma_p) const;

  // j_sigma: slice amplitudes to a site field supported on the slice, value
  // psi_x / h0 (the discrete delta in time carries weight 1/h0 so that
  // <j psi, j phi> = <psi, phi>_slice holds exactly).
  Eigen::VectorXd embed(int sigma, const Eigen::VectorXd& psi) const;

  // j_sigma^*: the adjoint, solving the slice Gram system
  //   S u = nu .* (E diag(mu) f)|_slice.
  Eigen::VectorXd restrict_to(int sigma, const Eigen::VectorXd& f) const;

private:
  const GreenKernel* kernel_;
  mutable std::map<int, std::unique_ptr<SliceSpace>> slices_;
};

// Geometry of one constant-time slice: its sites, the spatial measure
// nu_x = sqrt(det g) * spatial cell volume, the slice Gram
//   S(x,y) = nu_x E(sigma x, sigma y) nu_y,
// and the square-root frame of the slice kernel operator. The frame matrix is
// T = diag(sqrt nu) E_ss diag(sqrt nu) (symmetric positive definite); the slice
// square root diag(nu^-1/2) T^(1/2) diag(nu^1/2) is an isometry from the slice
// Gram norm to the plain nu-weighted L2 norm, and its adjoint is its inverse.
class SliceSpace {
public:
  SliceSpace(const NSpace& space, int sigma);

  int sigma() const { return sigma_; }
  std::int64_t size() const { return nu_.size(); }
  const std::vector<std::int64_t>& sites() const { return sites_; }
  const Eigen::VectorXd& nu() const { return nu_; }
  const Eigen::MatrixXd& kernel_block() const { return ess_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  double inner(const Eigen::VectorXd& psi, const Eigen::VectorXd& phi) const;
  double norm(const Eigen::VectorXd& psi) const;

  Eigen::VectorXd gram_solve(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd gram_solve(const Eigen::MatrixXd& v) const;

  // Square-root isometry and its adjoint (= inverse).
  Eigen::VectorXd sqrt_forward(const Eigen::VectorXd& psi) const;
  Eigen::VectorXd sqrt_adjoint_inverse(const Eigen::VectorXd& psi) const;

  // T^(1/2) M and T^(-1/2) M for the transfer-frame conjugations.
  Eigen::MatrixXd tsqrt_mul(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd tsqrt_solve(const Eigen::MatrixXd& m) const;
  const Eigen::VectorXd& t_eigenvalues() const;

private:
  void ensure_sqrt() const;

  int sigma_;
  std::vector<std::int64_t> sites_;
  Eigen::VectorXd nu_;
  Eigen::MatrixXd ess_;    // E restricted to the slice
  Eigen::MatrixXd gram_;   // S = diag(nu) ess diag(nu)
  Eigen::LLT<Eigen::MatrixXd> llt_;
  // Eigendecomposition of T = diag(sqrt nu) ess diag(sqrt nu), computed lazily;
  // eigenvalues below 1e-13 * max are a hard error (near-singular slice).
  mutable bool sqrt_ready_ = false;
  mutable Eigen::MatrixXd t_vectors_;
  mutable Eigen::VectorXd t_values_;
};

}  // namespace ctm
