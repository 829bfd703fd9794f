#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace ctm {

// Deterministic power iteration for the largest eigenvalue of a positive
// semidefinite operator that is self-adjoint in a caller-supplied inner
// product. Every norm query in the library funnels through this.
struct PowerOpts {
  double rtol = 1e-8;        // relative stop on successive Rayleigh quotients
  int cap = 10000;           // iteration cap; exceeding it is a numeric error
  std::uint64_t seed = 12345;
  double abs_floor = 1e-20;  // eigenvalues at or below this count as zero
};

// apply_op must be PSD and self-adjoint w.r.t. inner; returns lambda_max >= 0.
// Stagnation past the cap throws NumericError carrying the last estimate.
double power_lambda_max(
    std::int64_t n, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_op,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& inner,
    const PowerOpts& opts, const std::string& context);

// Spectral (ordinary 2-) norm of a rectangular matrix by power iteration on
// M^T M.
double spectral_norm(const Eigen::MatrixXd& m, const PowerOpts& opts,
                     const std::string& context);

}  // namespace ctm
