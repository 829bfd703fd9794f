#include "ctm/power.hpp"

#include <cmath>
#include <random>

#include "ctm/errors.hpp"

namespace ctm {

double power_lambda_max(
    std::int64_t n, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_op,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& inner,
    const PowerOpts& opts, const std::string& context) {
  if (n <= 0) throw UsageError(context + ": empty operator");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd u(n);
  for (std::int64_t i = 0; i < n; ++i) u[i] = gauss(rng);
  const double u0 = std::sqrt(std::max(0.0, inner(u, u)));
  if (u0 == 0.0) throw NumericError(context + ": degenerate start vector");
  u /= u0;

  double lambda_prev = -1.0;
  double lambda = 0.0;
  for (int it = 0; it < opts.cap; ++it) {
    const Eigen::VectorXd v = apply_op(u);
    lambda = std::max(0.0, inner(u, v));  // Rayleigh quotient; u is unit
    if (lambda <= opts.abs_floor) return 0.0;
    if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= opts.rtol * lambda)
      return lambda;
    lambda_prev = lambda;
    const double vn = std::sqrt(std::max(0.0, inner(v, v)));
    if (vn == 0.0) return 0.0;
    u = v / vn;
  }
  throw NumericError(context + ": power iteration stagnated after " + std::to_string(opts.cap) +
                         " iterations (last estimate " + std::to_string(lambda) + ")",
                     lambda);
}

double spectral_norm(const Eigen::MatrixXd& m, const PowerOpts& opts,
                     const std::string& context) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return m.transpose() * (m * x);
  };
  const auto dot = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b);
  };
  return std::sqrt(power_lambda_max(m.cols(), apply, dot, opts, context));
}

}  // namespace ctm
