#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctm/metric.hpp"
#include "ctm/nspace.hpp"
#include "ctm/power.hpp"

namespace ctm {

// Slice-to-slice propagator: restriction after embedding,
//   U = S_target^-1 S_{target,source},  S_{t,s}(x,y) = nu_x E(t x, s y) nu_y,
// acting on slice amplitudes (source slice -> target slice). Norms are always
// taken between the slice Gram geometries.
class Propagator {
public:
  Propagator(const NSpace& space, int source, int target);

  int source() const { return source_; }
  int target() const { return target_; }
  const NSpace& space() const { return *space_; }
  const SliceSpace& source_space() const { return space_->slice(source_); }
  const SliceSpace& target_space() const { return space_->slice(target_); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Time separation |target - source| * h0.
  double tau() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& psi) const;

private:
  const NSpace* space_;
  int source_, target_;
  Eigen::MatrixXd matrix_;
};

// The matrix of a slice map X (source coeffs -> target coeffs) conjugated into
// the orthonormal square-root frames of the two slices. Its ordinary 2-norm is
// the slice-Gram operator norm of X; for a propagator it is the symmetrized
// transfer matrix.
Eigen::MatrixXd frame_matrix(const SliceSpace& target, const SliceSpace& source,
                             const Eigen::MatrixXd& x);

// Symmetrized transfer matrix in the square-root frame. Requires a stationary
// metric: the conjugation is symmetric only when source and target slices
// carry the same geometry.
Eigen::MatrixXd symmetrized_transfer(const Propagator& p, const MetricField& metric);

// Slice-Gram operator norm of the propagator, via power iteration in the
// square-root frame. Tight contract: relative tolerance 1e-10.
double operator_norm(const Propagator& p, PowerOpts opts = {});

// || U_{s1<-s2} U_{s2<-s3} - U_{s1<-s3} || in the slice operator norm. The
// product collapses exactly (up to rounding) when s2 lies between s1 and s3;
// otherwise the value is data, not a defect.
double composition_residual(const NSpace& space, int s1, int s2, int s3,
                            PowerOpts opts = {});

// m / sqrt(sup over sites of g^{-1}(0,0)): the decay-rate bound carried by the
// time component of the inverse metric.
double omega_max(const MetricField& metric, double mass);

// Stationary metric invariant under time reflection: exact test that flipping
// the sign of the time axis fixes every site tensor (i.e. g(0,j) = 0).
bool reflection_invariant(const MetricField& metric);

struct SymmetryReport {
  bool symmetric = false;   // metric detected reflection-invariant
  double residual = 0.0;    // ||V - V^T||_F / ||V||_F of the frame matrix
};

SymmetryReport self_adjointness_check(const MetricField& metric, const Propagator& p);

struct SpectralReport {
  double tau = 0.0;
  double norm = 0.0;
  double rate = 0.0;        // -log(norm) / tau
  double omega = 0.0;       // the omega_max bound
  std::vector<std::complex<double>> eigenvalues;  // generator spectrum
  double min_re_spectrum = 0.0;
  double symmetry_residual = 0.0;
  bool symmetric_frame = false;  // symmetric eigensolver used
  bool spectrum_truncated = false;  // sub-floor fast modes dropped from the list
  int source = 0, target = 0;
};

// Generator spectrum -log(spec(V))/tau from the frame matrix of p. Uses the
// symmetric eigensolver when the frame matrix is symmetric to 1e-8, a general
// one otherwise (spectrum then reported without reality claims). Eigenvalue
// moduli under 1e-13 of the largest are a numeric error.
SpectralReport generator_spectrum(const Propagator& p, const MetricField& metric,
                                  PowerOpts opts = {});

// Centered slice pair at index step k: endpoints symmetric about the box time
// midpoint when parity allows, nearest-to-centered otherwise; both endpoints
// at least two slices from the time boundary, else ConfigError.
std::pair<int, int> centered_pair(const Lattice& lat, int k);

// Norm, rate and spectrum for each time separation tau (positive multiples of
// the time spacing), measured on centered slice pairs. Stationary metric only.
std::vector<SpectralReport> decay_rate(const NSpace& space, const MetricField& metric,
                                       const std::vector<double>& taus, PowerOpts opts = {});

}  // namespace ctm
