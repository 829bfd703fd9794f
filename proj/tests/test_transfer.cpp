#include <cmath>
#include <complex>

#include "doctest.h"

#include "ctm/curve_chart.hpp"
#include "ctm/errors.hpp"
#include "ctm/helmholtz.hpp"
#include "ctm/transfer.hpp"
#include "common.hpp"
#include "oracle.hpp"

using namespace ctm;
using ctmtest::Instance;
using ctmtest::shared_instance;

namespace {

// Transverse Dirichlet-chain fundamental eigenvalue of the assembled pencil
// (stiffness vs mass matrix of the P1 chain with n interior sites).
double chain_lambda1(int n, double h) {
  double q = M_PI / (n + 1);
  return (6.0 / (h * h)) * (1.0 - std::cos(q)) / (2.0 + std::cos(q));
}

// Exact one-step decay rate of the 1D lattice kernel at squared frequency
// omega2: the three-term recurrence of the assembled chain has the root
// exp(-kappa h) with cosh(kappa h) = (1 + s/3) / (1 - s/6), s = omega2 h^2.
double chain_rate(double omega2, double h) {
  double s = omega2 * h * h;
  return std::acosh((1.0 + s / 3.0) / (1.0 - s / 6.0)) / h;
}

double max_modulus(const Eigen::MatrixXd& v) {
  Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(v).eigenvalues();
  double m = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) m = std::max(m, std::abs(ev[i]));
  return m;
}

Instance& diag_m2_instance() {
  static Instance inst(build_lattice(2, {33, 33}, {0.125, 0.125}, {-2.0, -2.0}),
                       MetricSpec::diagonal({0.25, 1.0}), 2.0);
  return inst;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("propagator plumbing") {
  auto& inst = shared_instance("flat17");
  Propagator p(*inst.space, 4, 12);
  CHECK(p.source() == 4);
  CHECK(p.target() == 12);
  CHECK(p.tau() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(p.matrix().rows() == 17);
  CHECK(p.matrix().cols() == 17);
  Eigen::VectorXd psi = Eigen::VectorXd::Random(17);
  CHECK((p.apply(psi) - p.matrix() * psi).norm() == 0.0);
  CHECK_THROWS_AS(p.apply(Eigen::VectorXd::Random(16)), UsageError);
}

TEST_CASE("coincident slices give the identity") {
  auto& inst = shared_instance("flat17");
  Propagator p(*inst.space, 7, 7);
  CHECK((p.matrix() - Eigen::MatrixXd::Identity(17, 17)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("propagators are contractions; frozen norm") {
  auto& inst = shared_instance("flat17");
  for (auto [s, t] : {std::pair{4, 12}, {12, 4}, {8, 9}, {2, 14}}) {
    double n = operator_norm(Propagator(*inst.space, s, t));
    CHECK(n <= 1.0 + 1e-10);
    CHECK(n > 0.0);
  }
  CHECK(operator_norm(Propagator(*inst.space, 4, 12)) ==
        doctest::Approx(0.013662105363).epsilon(1e-8));
  // norm falls as the separation grows
  double n2 = operator_norm(Propagator(*inst.space, 7, 9));
  double n4 = operator_norm(Propagator(*inst.space, 6, 10));
  double n8 = operator_norm(Propagator(*inst.space, 4, 12));
  CHECK(n4 < n2);
  CHECK(n8 < n4);
}

TEST_CASE("operator norm matches the dense pencil oracle") {
  auto& inst = shared_instance("flat10");
  Eigen::MatrixXd gram = ctmtest::oracle_gram(*inst.op);
  Propagator p(*inst.space, 2, 7);
  double oracle = ctmtest::oracle_propagator_norm(gram, *inst.space, 7, 2, p.matrix());
  CHECK(operator_norm(p) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("composition collapses only in time order") {
  auto& inst = shared_instance("flat17");
  CHECK(composition_residual(*inst.space, 12, 8, 4) < 1e-12);
  CHECK(composition_residual(*inst.space, 4, 8, 12) < 1e-12);
  CHECK(composition_residual(*inst.space, 13, 9, 6) < 1e-12);
  // middle slice outside the bracket: the identity genuinely fails
  CHECK(composition_residual(*inst.space, 12, 2, 4) > 1e-4);
  CHECK_THROWS_AS(composition_residual(*inst.space, 12, 12, 4), UsageError);
  CHECK_THROWS_AS(composition_residual(*inst.space, 12, 8, 8), UsageError);
}

TEST_CASE("frame matrix carries the slice norm") {
  auto& inst = shared_instance("flat10");
  Propagator p(*inst.space, 3, 6);
  Eigen::MatrixXd v =
      frame_matrix(inst.space->slice(6), inst.space->slice(3), p.matrix());
  CHECK(ctmtest::oracle_spectral_norm(v) == doctest::Approx(operator_norm(p)).epsilon(1e-8));
}

TEST_CASE("symmetrized transfer: stationary frames only") {
  auto& inst = shared_instance("flat17");
  Propagator p(*inst.space, 5, 9);
  Eigen::MatrixXd v = symmetrized_transfer(p, *inst.metric);
  Eigen::MatrixXd direct =
      frame_matrix(inst.space->slice(9), inst.space->slice(5), p.matrix());
  CHECK((v - direct).cwiseAbs().maxCoeff() < 1e-13);
  // flat frame matrix is symmetric to rounding
  CHECK((v - v.transpose()).norm() / v.norm() < 1e-12);

  Instance bump(build_lattice(2, {9, 9}, {0.25, 0.25}, {-1.0, -1.0}),
                MetricSpec::conformal_bump(0.3, 0.5, {0.0, 0.0}), 1.0);
  REQUIRE(!bump.metric->is_stationary());
  Propagator q(*bump.space, 2, 6);
  CHECK_THROWS_AS(symmetrized_transfer(q, *bump.metric), UsageError);
  CHECK_THROWS_AS(self_adjointness_check(*bump.metric, q), UsageError);
  CHECK_THROWS_AS(decay_rate(*bump.space, *bump.metric, {0.25}), UsageError);
}

TEST_CASE("omega_max reads the time component of the inverse metric") {
  auto& flat = shared_instance("flat17");
  CHECK(omega_max(*flat.metric, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(omega_max(*flat.metric, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(omega_max(*diag_m2_instance().metric, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

  CurveChart chart = build_chart({Eigen::Vector2d(-6.0, -6.0), Eigen::Vector2d(6.0, 6.0)}, 0.0);
  Instance sheared(build_lattice(2, {9, 9}, {0.5, 0.5}, {-2.0, -2.0}),
                   MetricSpec::curve_induced(chart), 1.0);
  CHECK(omega_max(*sheared.metric, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(omega_max(*flat.metric, 0.0), ConfigError);
  CHECK_THROWS_AS(omega_max(*flat.metric, -1.0), ConfigError);
}

TEST_CASE("reflection invariance of the metric") {
  CHECK(reflection_invariant(*shared_instance("flat17").metric));
  CHECK(reflection_invariant(*diag_m2_instance().metric));
  CurveChart chart = build_chart({Eigen::Vector2d(-6.0, -6.0), Eigen::Vector2d(6.0, 6.0)}, 0.0);
  Instance sheared(build_lattice(2, {9, 9}, {0.5, 0.5}, {-2.0, -2.0}),
                   MetricSpec::curve_induced(chart), 1.0);
  CHECK(!reflection_invariant(*sheared.metric));
}

TEST_CASE("self-adjointness splits reflection-even from sheared metrics") {
  auto& flat = shared_instance("flat17");
  Propagator p(*flat.space, 5, 9);
  SymmetryReport r = self_adjointness_check(*flat.metric, p);
  CHECK(r.symmetric);
  CHECK(r.residual < 1e-10);

  CurveChart chart = build_chart({Eigen::Vector2d(-6.0, -6.0), Eigen::Vector2d(6.0, 6.0)}, 0.0);
  Instance sheared(build_lattice(2, {17, 9}, {0.25, 0.25}, {-2.0, -1.0}),
                   MetricSpec::curve_induced(chart), 1.0);
  Propagator q(*sheared.space, 6, 10);
  SymmetryReport rs = self_adjointness_check(*sheared.metric, q);
  CHECK(!rs.symmetric);
  CHECK(rs.residual > 0.1);
}

TEST_CASE("one-step rate reproduces the exact chain dispersion") {
  struct Strip { int nt, nx; double h; };
  for (Strip s : {Strip{41, 3, 0.5}, Strip{81, 7, 0.25}, Strip{161, 15, 0.125}}) {
    Instance inst(build_lattice(2, {s.nt, s.nx}, {s.h, s.h}, {0.0, -1.0 + s.h}),
                  MetricSpec::flat(), 1.0);
    int mid = (s.nt - 1) / 2;
    Propagator p(*inst.space, mid, mid + 1);
    Eigen::MatrixXd v =
        frame_matrix(inst.space->slice(mid + 1), inst.space->slice(mid), p.matrix());
    double measured = -std::log(max_modulus(v)) / s.h;
    double formula = chain_rate(1.0 + chain_lambda1(s.nx, s.h), s.h);
    CHECK(measured == doctest::Approx(formula).epsilon(1e-10));
  }
}

TEST_CASE("strip rates extrapolate to the continuum at second order") {
  // kappa(h) - kappa_infty ~ C h^2 on the width-2 strip: the h = 0.25 vs
  // h = 0.125 defect ratio sits near 4.
  double kinf = std::sqrt(1.0 + M_PI * M_PI / 4.0);
  double k1 = chain_rate(1.0 + chain_lambda1(7, 0.25), 0.25);
  double k2 = chain_rate(1.0 + chain_lambda1(15, 0.125), 0.125);
  double ratio = (k1 - kinf) / (k2 - kinf);
  CHECK(ratio > 3.5);
  CHECK(ratio < 5.0);
}

TEST_CASE("deep interior is stationary in practice") {
  auto& inst = shared_instance("strip41");
  Eigen::MatrixXd u0 = Propagator(*inst.space, 20, 21).matrix();
  Eigen::MatrixXd g0 = inst.space->slice(20).gram();
  double worst_u = 0.0, worst_g = 0.0;
  for (int s = 10; s <= 30; ++s) {
    worst_u = std::max(worst_u,
                       (Propagator(*inst.space, s, s + 1).matrix() - u0).cwiseAbs().maxCoeff());
    worst_g = std::max(worst_g, (inst.space->slice(s).gram() - g0).cwiseAbs().maxCoeff());
  }
  CHECK(worst_u < 1e-9);
  CHECK(worst_g < 1e-10);
}

TEST_CASE("centered pair selection") {
  auto& lat = shared_instance("flat33").lattice;
  auto [lo, hi] = centered_pair(lat, 2);
  CHECK(lo == 15);
  CHECK(hi == 17);
  for (int k : {1, 3, 5, 8}) {
    auto [a, b] = centered_pair(lat, k);
    CHECK(b - a == k);
    CHECK(a >= 2);
    CHECK(b <= 30);
    CHECK(std::abs(0.5 * (a + b) - 16.0) <= 0.5);
  }
  CHECK_THROWS_AS(centered_pair(lat, 0), ConfigError);
  CHECK_THROWS_AS(centered_pair(lat, -2), ConfigError);
  CHECK_THROWS_AS(centered_pair(lat, 29), ConfigError);   // endpoints would touch the margin
  CHECK_THROWS_AS(centered_pair(lat, 100), ConfigError);
}

TEST_CASE("decay rates on the fine flat box: frozen values") {
  auto& inst = shared_instance("flat33");
  auto reports = decay_rate(*inst.space, *inst.metric, {0.5, 1.0, 2.0});
  REQUIRE(reports.size() == 3);
  const double norms[] = {5.330159e-1, 2.833267e-1, 7.791264e-2};
  const double rates[] = {1.258408, 1.261155, 1.276084};
  for (int i = 0; i < 3; ++i) {
    CHECK(reports[i].tau == doctest::Approx(0.5 * (1 << i)).epsilon(1e-15));
    CHECK(reports[i].norm == doctest::Approx(norms[i]).epsilon(1e-5));
    CHECK(reports[i].rate == doctest::Approx(rates[i]).epsilon(1e-5));
    CHECK(reports[i].omega == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(reports[i].rate >= 0.95 * reports[i].omega);
    CHECK(reports[i].symmetric_frame);
    CHECK(reports[i].symmetry_residual < 1e-8);
    CHECK(-std::log(reports[i].norm) / reports[i].tau ==
          doctest::Approx(reports[i].rate).epsilon(1e-12));
  }
  CHECK(reports[1].norm < reports[0].norm);
  CHECK(reports[2].norm < reports[1].norm);
  CHECK_THROWS_AS(decay_rate(*inst.space, *inst.metric, {0.0}), ConfigError);
  CHECK_THROWS_AS(decay_rate(*inst.space, *inst.metric, {-0.5}), ConfigError);
  CHECK_THROWS_AS(decay_rate(*inst.space, *inst.metric, {0.3}), ConfigError);
}

TEST_CASE("generator spectrum on the fine flat box is real and gapped") {
  auto& inst = shared_instance("flat33");
  Propagator p(*inst.space, 15, 17);
  SpectralReport r = generator_spectrum(p, *inst.metric);
  CHECK(r.symmetric_frame);
  CHECK(!r.spectrum_truncated);
  CHECK(r.symmetry_residual < 1e-10);
  REQUIRE(!r.eigenvalues.empty());
  double max_im = 0.0, min_re = 1e300;
  for (auto z : r.eigenvalues) {
    max_im = std::max(max_im, std::abs(z.imag()));
    min_re = std::min(min_re, z.real());
  }
  CHECK(max_im == 0.0);
  CHECK(min_re == doctest::Approx(1.257772).epsilon(1e-4));
  CHECK(r.min_re_spectrum == doctest::Approx(min_re).epsilon(1e-12));
  CHECK(r.min_re_spectrum >= 0.95 * r.omega);
  // the slowest generator mode is the measured decay rate at this separation
  CHECK(r.rate == doctest::Approx(r.min_re_spectrum).epsilon(1e-6));
}

TEST_CASE("sub-floor fast modes: truncated in surveys, fatal for the generator") {
  auto& inst = diag_m2_instance();
  auto reports = decay_rate(*inst.space, *inst.metric, {2.0});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].spectrum_truncated);
  CHECK(reports[0].norm > 0.0);
  CHECK(reports[0].rate >= 0.95 * reports[0].omega);

  auto [lo, hi] = centered_pair(inst.lattice, 16);
  Propagator p(*inst.space, lo, hi);
  CHECK_THROWS_AS(generator_spectrum(p, *inst.metric), NumericError);
}

TEST_CASE("generator rejects coincident slices and moving metrics") {
  auto& inst = shared_instance("flat17");
  Propagator same(*inst.space, 6, 6);
  CHECK_THROWS_AS(generator_spectrum(same, *inst.metric), UsageError);
}

}  // TEST_SUITE
