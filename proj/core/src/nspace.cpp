#include "ctm/nspace.hpp"

#include <cmath>
#include <string>

#include "ctm/errors.hpp"

namespace ctm {

NSpace::NSpace(const GreenKernel& kernel) : kernel_(&kernel) {}

Eigen::VectorXd NSpace::apply_gram(const Eigen::VectorXd& f) const {
  return mu().cwiseProduct(kernel_->apply(f));
}

double NSpace::inner(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const {
  if (f.size() != size() || h.size() != size())
    throw UsageError("nspace.inner: vector size does not match site count " +
                     std::to_string(size()));
  return f.dot(apply_gram(h));
}

double NSpace::norm(const Eigen::VectorXd& f) const { return std::sqrt(inner(f, f)); }

Eigen::MatrixXd NSpace::kernel_block(const std::vector<std::int64_t>& rows,
                                     const std::vector<std::int64_t>& cols) const {
  Eigen::MatrixXd block(rows.size(), cols.size());
  if (kernel_->dense()) {
    const Eigen::MatrixXd& e = kernel_->dense_matrix();
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < rows.size(); ++r) block(r, c) = e(rows[r], cols[c]);
  } else {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Eigen::VectorXd col = kernel_->column(cols[c]);
      for (std::size_t r = 0; r < rows.size(); ++r) block(r, c) = col[rows[r]];
    }
  }
  return block;
}

Eigen::MatrixXd NSpace::gram_block(const std::vector<std::int64_t>& rows,
                                   const std::vector<std::int64_t>& cols) const {
  Eigen::MatrixXd block = kernel_block(rows, cols);
  const Eigen::VectorXd& m = mu();
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r) block(r, c) *= m[rows[r]] * m[cols[c]];
  return block;
}

const SliceSpace& NSpace::slice(int sigma) const {
  auto it = slices_.find(sigma);
  if (it == slices_.end())
    it = slices_.emplace(sigma, std::make_unique<SliceSpace>(*this, sigma)).first;
  return *it->second;
}

Eigen::MatrixXd NSpace::slice_kernel_block(int sigma, int sigma_p) const {
  return kernel_block(slice(sigma).sites(), slice(sigma_p).sites());
}

Eigen::VectorXd NSpace::embed(int sigma, const Eigen::VectorXd& psi) const {
  const SliceSpace& s = slice(sigma);
  if (psi.size() != s.size())
    throw UsageError("nspace.embed: amplitude vector size " + std::to_string(psi.size()) +
                     " does not match slice size " + std::to_string(s.size()));
  const double h0 = lattice().spacing[0];
  Eigen::VectorXd f = Eigen::VectorXd::Zero(size());
  for (std::int64_t x = 0; x < s.size(); ++x) f[s.sites()[x]] = psi[x] / h0;
  return f;
}

Eigen::VectorXd NSpace::restrict_to(int sigma, const Eigen::VectorXd& f) const {
  if (f.size() != size())
    throw UsageError("nspace.restrict: field size does not match site count " +
                     std::to_string(size()));
  const SliceSpace& s = slice(sigma);
  const Eigen::VectorXd ef = kernel_->apply(f);
  Eigen::VectorXd v(s.size());
  for (std::int64_t x = 0; x < s.size(); ++x) v[x] = s.nu()[x] * ef[s.sites()[x]];
  return s.gram_solve(v);
}

SliceSpace::SliceSpace(const NSpace& space, int sigma) : sigma_(sigma) {
  const Lattice& lat = space.lattice();
  if (sigma < 0 || sigma >= lat.slice_count())
    throw UsageError("nspace.slice_space: slice " + std::to_string(sigma) +
                     " outside [0, " + std::to_string(lat.slice_count()) + ")");
  const std::int64_t n0 = lat.slice_size();
  sites_.resize(n0);
  for (std::int64_t x = 0; x < n0; ++x) sites_[x] = sigma * n0 + x;

  nu_.resize(n0);
  const Eigen::VectorXd& mu = space.mu();
  const double h0 = lat.spacing[0];
  // mu = h0 * nu site by site, so nu comes straight from the stored weights.
  for (std::int64_t x = 0; x < n0; ++x) nu_[x] = mu[sites_[x]] / h0;

  ess_ = space.kernel_block(sites_, sites_);
  gram_ = nu_.asDiagonal() * ess_ * nu_.asDiagonal();
  // Exact symmetry for the factorizations downstream.
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success)
    throw NumericError("nspace.slice_space: slice Gram factorization failed at slice " +
                       std::to_string(sigma));
}

double SliceSpace::inner(const Eigen::VectorXd& psi, const Eigen::VectorXd& phi) const {
  if (psi.size() != size() || phi.size() != size())
    throw UsageError("nspace.slice_inner: amplitude size does not match slice size " +
                     std::to_string(size()));
  return psi.dot(gram_ * phi);
}

double SliceSpace::norm(const Eigen::VectorXd& psi) const {
  return std::sqrt(std::max(0.0, inner(psi, psi)));
}

Eigen::VectorXd SliceSpace::gram_solve(const Eigen::VectorXd& v) const {
  return llt_.solve(v);
}

Eigen::MatrixXd SliceSpace::gram_solve(const Eigen::MatrixXd& v) const {
  return llt_.solve(v);
}

void SliceSpace::ensure_sqrt() const {
  if (sqrt_ready_) return;
  const Eigen::VectorXd root = nu_.cwiseSqrt();
  Eigen::MatrixXd t = root.asDiagonal() * ess_ * root.asDiagonal();
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  if (eig.info() != Eigen::Success)
    throw NumericError("nspace.slice_sqrt: eigendecomposition failed at slice " +
                       std::to_string(sigma_));
  const double floor = 1e-13 * eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > floor))
    throw NumericError("nspace.slice_sqrt: slice kernel near-singular at slice " +
                           std::to_string(sigma_),
                       eig.eigenvalues().minCoeff());
  t_vectors_ = eig.eigenvectors();
  t_values_ = eig.eigenvalues();
  sqrt_ready_ = true;
}

const Eigen::VectorXd& SliceSpace::t_eigenvalues() const {
  ensure_sqrt();
  return t_values_;
}

Eigen::MatrixXd SliceSpace::tsqrt_mul(const Eigen::MatrixXd& m) const {
  ensure_sqrt();
  return t_vectors_ * t_values_.cwiseSqrt().asDiagonal() * (t_vectors_.transpose() * m);
}

Eigen::MatrixXd SliceSpace::tsqrt_solve(const Eigen::MatrixXd& m) const {
  ensure_sqrt();
  return t_vectors_ * t_values_.cwiseSqrt().cwiseInverse().asDiagonal() *
         (t_vectors_.transpose() * m);
}

Eigen::VectorXd SliceSpace::sqrt_forward(const Eigen::VectorXd& psi) const {
  if (psi.size() != size())
    throw UsageError("nspace.slice_sqrt: amplitude size does not match slice size " +
                     std::to_string(size()));
  const Eigen::VectorXd root = nu_.cwiseSqrt();
  return tsqrt_mul(root.cwiseProduct(psi)).col(0).cwiseQuotient(root);
}

Eigen::VectorXd SliceSpace::sqrt_adjoint_inverse(const Eigen::VectorXd& psi) const {
  if (psi.size() != size())
    throw UsageError("nspace.slice_sqrt: amplitude size does not match slice size " +
                     std::to_string(size()));
  const Eigen::VectorXd root = nu_.cwiseSqrt();
  return tsqrt_solve(root.cwiseProduct(psi)).col(0).cwiseQuotient(root);
}

}  // namespace ctm
