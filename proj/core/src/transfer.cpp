#include "ctm/transfer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ctm/errors.hpp"

namespace ctm {

Propagator::Propagator(const NSpace& space, int source, int target)
    : space_(&space), source_(source), target_(target) {
  const SliceSpace& src = space.slice(source);
  const SliceSpace& tgt = space.slice(target);
  Eigen::MatrixXd cross = space.kernel_block(tgt.sites(), src.sites());
  cross = tgt.nu().asDiagonal() * cross * src.nu().asDiagonal();
  matrix_ = tgt.gram_solve(cross);
}

double Propagator::tau() const {
  return std::abs(target_ - source_) * space_->lattice().spacing[0];
}

Eigen::VectorXd Propagator::apply(const Eigen::VectorXd& psi) const {
  if (psi.size() != matrix_.cols())
    throw UsageError("transfer.propagator: amplitude size does not match source slice");
  return matrix_ * psi;
}

Eigen::MatrixXd frame_matrix(const SliceSpace& target, const SliceSpace& source,
                             const Eigen::MatrixXd& x) {
  // F_t X F_s^-1 with F = T^(1/2) diag(sqrt nu): isometries from the slice
  // Gram norms to plain Euclidean coordinates.
  const Eigen::MatrixXd left =
      target.tsqrt_mul(target.nu().cwiseSqrt().asDiagonal() * x);
  const Eigen::MatrixXd right = source.tsqrt_solve(
      source.nu().cwiseSqrt().cwiseInverse().asDiagonal() * left.transpose());
  return right.transpose();
}

Eigen::MatrixXd symmetrized_transfer(const Propagator& p, const MetricField& metric) {
  if (!metric.is_stationary())
    throw UsageError("transfer.symmetrized_transfer: metric is not stationary");
  return frame_matrix(p.target_space(), p.source_space(), p.matrix());
}

double operator_norm(const Propagator& p, PowerOpts opts) {
  opts.rtol = 1e-10;
  return spectral_norm(frame_matrix(p.target_space(), p.source_space(), p.matrix()), opts,
                       "transfer.operator_norm");
}

double composition_residual(const NSpace& space, int s1, int s2, int s3, PowerOpts opts) {
  if (s1 == s2 || s2 == s3 || s1 == s3)
    throw UsageError("transfer.composition_residual: slices must be distinct");
  const Propagator a(space, s2, s1), b(space, s3, s2), c(space, s3, s1);
  const Eigen::MatrixXd defect = a.matrix() * b.matrix() - c.matrix();
  return spectral_norm(frame_matrix(space.slice(s1), space.slice(s3), defect), opts,
                       "transfer.composition_residual");
}

double omega_max(const MetricField& metric, double mass) {
  if (!(mass > 0.0))
    throw ConfigError("transfer.omega_max: mass must be positive, got " + std::to_string(mass));
  double sup = 0.0;
  for (std::int64_t i = 0; i < metric.site_count(); ++i)
    sup = std::max(sup, metric.inverse(i)(0, 0));
  return mass / std::sqrt(sup);
}

bool reflection_invariant(const MetricField& metric) {
  if (!metric.is_stationary()) return false;
  for (std::int64_t i = 0; i < metric.site_count(); ++i) {
    const Eigen::Matrix3d& g = metric.g(i);
    for (int j = 1; j < metric.dim(); ++j)
      if (g(0, j) != 0.0) return false;
  }
  return true;
}

SymmetryReport self_adjointness_check(const MetricField& metric, const Propagator& p) {
  if (!metric.is_stationary())
    throw UsageError("transfer.self_adjointness_check: metric is not stationary");
  const Eigen::MatrixXd v = frame_matrix(p.target_space(), p.source_space(), p.matrix());
  SymmetryReport report;
  report.symmetric = reflection_invariant(metric);
  const double scale = v.norm();
  report.residual = scale > 0.0 ? (v - v.transpose()).norm() / scale : 0.0;
  return report;
}

namespace {

// strict: sub-floor transfer eigenvalues are a hard error (the generator is
// requested and rank-deficiency must surface). Non-strict callers (decay rows
// at large tau, where fast modes legitimately underflow) drop them instead:
// a dropped mode has a huge generator real part and can never be the minimum.
SpectralReport analyze_frame(const Eigen::MatrixXd& v, double tau, double omega,
                             int source, int target, PowerOpts opts, bool strict) {
  SpectralReport r;
  r.tau = tau;
  r.omega = omega;
  r.source = source;
  r.target = target;
  {
    PowerOpts norm_opts = opts;
    norm_opts.rtol = 1e-10;
    r.norm = spectral_norm(v, norm_opts, "transfer.decay_rate");
  }
  r.rate = -std::log(r.norm) / tau;
  const double scale = v.norm();
  r.symmetry_residual = scale > 0.0 ? (v - v.transpose()).norm() / scale : 0.0;
  r.symmetric_frame = r.symmetry_residual <= 1e-8;

  Eigen::VectorXcd spec;
  if (r.symmetric_frame) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (v + v.transpose()));
    if (eig.info() != Eigen::Success)
      throw NumericError("transfer.generator_spectrum: eigendecomposition failed");
    spec = eig.eigenvalues().cast<std::complex<double>>();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(v);
    if (eig.info() != Eigen::Success)
      throw NumericError("transfer.generator_spectrum: eigendecomposition failed");
    spec = eig.eigenvalues();
  }
  const double max_mod = spec.cwiseAbs().maxCoeff();
  const double floor = 1e-13 * max_mod;
  r.min_re_spectrum = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (std::abs(spec[i]) < floor) {
      if (strict)
        throw NumericError(
            "transfer.generator_spectrum: transfer eigenvalue modulus below relative "
            "floor 1e-13 (rank-deficient transfer)",
            std::abs(spec[i]) / max_mod);
      r.spectrum_truncated = true;
      continue;
    }
    const std::complex<double> k = -std::log(spec[i]) / tau;
    r.eigenvalues.push_back(k);
    r.min_re_spectrum = std::min(r.min_re_spectrum, k.real());
  }
  return r;
}

}  // namespace

SpectralReport generator_spectrum(const Propagator& p, const MetricField& metric,
                                  PowerOpts opts) {
  if (!metric.is_stationary())
    throw UsageError("transfer.generator_spectrum: metric is not stationary");
  const double tau = p.tau();
  if (!(tau > 0.0))
    throw UsageError("transfer.generator_spectrum: coincident slices have no generator");
  const Eigen::MatrixXd v = frame_matrix(p.target_space(), p.source_space(), p.matrix());
  return analyze_frame(v, tau, omega_max(metric, p.space().op().mass()), p.source(),
                       p.target(), opts, /*strict=*/true);
}

std::pair<int, int> centered_pair(const Lattice& lat, int k) {
  const int nt = lat.slice_count();
  if (k < 1 || k >= nt)
    throw ConfigError("transfer.centered_pair: step " + std::to_string(k) +
                      " outside the box of " + std::to_string(nt) + " slices");
  const int lo = (nt - 1 - k) / 2;  // centered when nt-1-k is even, else half off
  const int hi = lo + k;
  if (lo < 2 || hi > nt - 3)
    throw ConfigError("transfer.centered_pair: step " + std::to_string(k) +
                      " leaves no interior window (slices must stay two cells off the "
                      "time boundary)");
  return {lo, hi};
}

std::vector<SpectralReport> decay_rate(const NSpace& space, const MetricField& metric,
                                       const std::vector<double>& taus, PowerOpts opts) {
  if (!metric.is_stationary())
    throw UsageError("transfer.decay_rate: metric is not stationary");
  const Lattice& lat = space.lattice();
  const double h0 = lat.spacing[0];
  const double omega = omega_max(metric, space.op().mass());

  std::vector<SpectralReport> reports;
  for (const double tau : taus) {
    if (!(tau > 0.0))
      throw ConfigError("transfer.decay_rate: tau must be positive, got " +
                        std::to_string(tau));
    const double ratio = tau / h0;
    const int k = static_cast<int>(std::llround(ratio));
    if (k < 1 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
      throw ConfigError("transfer.decay_rate: tau = " + std::to_string(tau) +
                        " is not a positive multiple of the time spacing " +
                        std::to_string(h0));
    const auto [lo, hi] = centered_pair(lat, k);
    const Propagator p(space, hi, lo);
    const Eigen::MatrixXd v = frame_matrix(p.target_space(), p.source_space(), p.matrix());
    reports.push_back(analyze_frame(v, tau, omega, hi, lo, opts, /*strict=*/false));
  }
  return reports;
}

}  // namespace ctm
