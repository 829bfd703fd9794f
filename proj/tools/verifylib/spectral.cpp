#include <cmath>

#include <Eigen/Eigenvalues>

#include "ctm/curve_chart.hpp"
#include "ctm/transfer.hpp"

#include "stack.hpp"

namespace lab {
namespace {

struct RateCase {
  std::string tag;
  ctm::MetricSpec spec;
  double mass;
};

// Slope-c chart: the straight curve t = c x over a generous span.
ctm::MetricSpec slope_chart(double c) {
  return ctm::MetricSpec::curve_induced(
      ctm::build_chart({{-4.0 * c, -4.0}, {4.0 * c, 4.0}}, 0.0));
}

std::vector<RateCase> rate_cases() {
  std::vector<RateCase> out;
  out.push_back({"flat-m05", ctm::MetricSpec::flat(), 0.5});
  out.push_back({"flat-m1", ctm::MetricSpec::flat(), 1.0});
  out.push_back({"flat-m2", ctm::MetricSpec::flat(), 2.0});
  out.push_back({"diag-m2", ctm::MetricSpec::diagonal({0.25, 1.0}), 2.0});
  out.push_back({"slope05", slope_chart(0.5), 1.0});
  out.push_back({"slope1", slope_chart(1.0), 1.0});
  out.push_back({"slope2", slope_chart(2.0), 1.0});
  return out;
}

std::string tau_tag(double tau) {
  return tau == 0.5 ? "tau05" : tau == 1.0 ? "tau10" : "tau20";
}

}  // namespace

CriterionOutcome criterion_rates(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);
  const auto lat = ctm::build_lattice(2, {33, 33}, {0.125, 0.125}, {-2.0, -2.0});

  for (const auto& c : rate_cases()) {
    Stack st(lat, c.spec, c.mass);
    const double omega = ctm::omega_max(*st.metric, c.mass);
    for (double tau : {0.5, 1.0, 2.0}) {
      const std::string exp = "c4." + c.tag + "." + tau_tag(tau);
      rec.row(exp, "rate_ratio", 0.95, +1, [&] {
        const auto reports =
            ctm::decay_rate(*st.space, *st.metric, {tau}, rec.popts(exp, "rate_ratio"));
        return reports.at(0).rate / omega;
      });
    }
  }

  if (opt.tier == Tier::full) {
    const auto lat3 = ctm::build_lattice(3, {17, 9, 9}, {0.25, 0.25, 0.25}, {-2.0, -1.0, -1.0});
    Stack st(lat3, ctm::MetricSpec::flat(), 1.0);
    const double omega = ctm::omega_max(*st.metric, 1.0);
    for (double tau : {0.5, 1.0}) {
      const std::string exp = "c4.cube17." + tau_tag(tau);
      rec.row(exp, "rate_ratio", 0.95, +1, [&] {
        const auto reports =
            ctm::decay_rate(*st.space, *st.metric, {tau}, rec.popts(exp, "rate_ratio"));
        return reports.at(0).rate / omega;
      });
    }
  }

  return finish(4, "decay rates beat the mass-curvature bound", rec, t0);
}

CriterionOutcome criterion_generator(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);
  const auto lat = ctm::build_lattice(2, {33, 33}, {0.125, 0.125}, {-2.0, -2.0});

  const std::vector<RateCase> cases = {{"flat-m1", ctm::MetricSpec::flat(), 1.0},
                                       {"diag-m2", ctm::MetricSpec::diagonal({0.25, 1.0}), 2.0}};
  for (const auto& c : cases) {
    Stack st(lat, c.spec, c.mass);
    const double omega = ctm::omega_max(*st.metric, c.mass);
    const auto [lo, hi] = ctm::centered_pair(lat, 2);
    const std::string exp = "c5." + c.tag + ".k2";
    auto spectrum = [&](const std::string& q) {
      const ctm::Propagator p(*st.space, lo, hi);
      return ctm::generator_spectrum(p, *st.metric, rec.popts(exp, q));
    };

    rec.row(exp, "symmetry_residual", 1e-8, -1,
            [&] { return spectrum("symmetry_residual").symmetry_residual; });
    rec.row(exp, "max_imag", 1e-8, -1, [&] {
      const auto rep = spectrum("max_imag");
      double worst = 0.0;
      for (const auto& ev : rep.eigenvalues) worst = std::max(worst, std::abs(ev.imag()));
      return worst;
    });
    rec.row(exp, "re_ratio", 0.95, +1,
            [&] { return spectrum("re_ratio").min_re_spectrum / omega; });
  }

  return finish(5, "symmetric frame spectrum is real and gapped", rec, t0);
}

CriterionOutcome criterion_interior_decay(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);

  // Deep-interior time decay of one kernel column on a tall thin box,
  // projected on the lowest transverse mode to kill the x-boundary transient.
  rec.row("c8.column", "rate_defect", 0.02, -1, [&] {
    const auto lat = ctm::build_lattice(2, {97, 321}, {0.125, 0.125}, {0.0, -20.0});
    Stack st(lat, ctm::MetricSpec::flat(), 1.0);
    const Eigen::VectorXd col = st.kernel->column(lat.index_of({12, 160, 0}));
    auto mode = [&](int t) {
      double s = 0.0;
      for (int j = 0; j < 321; ++j)
        s += std::sin(M_PI * (j + 1) / 322.0) * col[lat.index_of({t, j, 0})];
      return s;
    };
    const double slope = std::log(mode(52) / mode(76)) / 3.0;
    return std::abs(slope - 1.0);
  });

  // Long-range norm decay against the dense one-step transfer spectrum.
  rec.row("c8.one_step", "rate_defect", 0.02, -1, [&] {
    const auto lat = ctm::build_lattice(2, {65, 65}, {0.125, 0.125}, {-4.0, -4.0});
    Stack st(lat, ctm::MetricSpec::flat(), 1.0);
    const ctm::Propagator u(*st.space, 36, 28);
    const double rate = -std::log(ctm::operator_norm(u, rec.popts("c8.one_step", "rate_defect"))) /
                        u.tau();
    const ctm::Propagator step(*st.space, 32, 33);
    const Eigen::MatrixXd frame =
        ctm::frame_matrix(st.space->slice(33), st.space->slice(32), step.matrix());
    const Eigen::EigenSolver<Eigen::MatrixXd> eig(frame);
    const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double rate_step = -std::log(top) / lat.spacing[0];
    return std::abs(rate - rate_step) / rate_step;
  });

  return finish(8, "interior kernel decay matches the transfer spectrum", rec, t0);
}

}  // namespace lab
