#include <Eigen/Dense>

#include "ctm/curve_chart.hpp"
#include "ctm/projector.hpp"
#include "ctm/region.hpp"
#include "ctm/transfer.hpp"

#include "stack.hpp"

namespace lab {
namespace {

// Dense references: explicit inverses and dense generalized eigensolvers,
// independent of the library's factored / iterative code paths. Affordable
// because every instance in this criterion stays at or below 100 sites.

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<std::int64_t>& rows,
                          const std::vector<std::int64_t>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

ctm::Region slices_region(const ctm::Lattice& lat, int lo, int hi, const std::string& name) {
  std::vector<std::int64_t> sites;
  for (std::int64_t i = 0; i < lat.site_count(); ++i) {
    const int t = lat.time_index(i);
    if (t >= lo && t <= hi) sites.push_back(i);
  }
  return ctm::make_region(lat, std::move(sites), name);
}

struct OracleCase {
  std::string tag;
  ctm::Lattice lat;
  ctm::MetricSpec spec;
};

}  // namespace

CriterionOutcome criterion_oracle(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);
  const double tol = 1e-7;

  std::vector<OracleCase> cases;
  cases.push_back({"flat10", ctm::build_lattice(2, {10, 10}, {0.25, 0.25}, {-1.0, -1.0}),
                   ctm::MetricSpec::flat()});
  cases.push_back({"bump9", ctm::build_lattice(2, {9, 9}, {0.25, 0.25}, {-1.0, -1.0}),
                   ctm::MetricSpec::conformal_bump(0.3, 0.5, {0.0, 0.0})});
  cases.push_back({"tab9", ctm::build_lattice(2, {9, 9}, {0.25, 0.25}, {-1.0, -1.0}),
                   ctm::MetricSpec::tabulated(opt.data_dir + "/tab9.metric")});
  cases.push_back({"shear96", ctm::build_lattice(2, {12, 8}, {0.25, 0.25}, {-1.375, -0.875}),
                   ctm::MetricSpec::curve_induced(
                       ctm::build_chart({{-6.0, -6.0}, {6.0, 6.0}}, 0.0))});
  if (opt.tier == Tier::full)
    cases.push_back({"cube100",
                     ctm::build_lattice(3, {4, 5, 5}, {0.5, 0.5, 0.5}, {-0.75, -1.0, -1.0}),
                     ctm::MetricSpec::flat()});

  for (const auto& c : cases) {
    const std::string exp = "c7." + c.tag;

    // The stack itself can fail to build (e.g. an unreadable or indefinite
    // tabulated metric). That must fail this instance's rows and nothing else,
    // so construction happens lazily inside the first row and is shared after.
    std::unique_ptr<Stack> st;
    Eigen::MatrixXd einv, gram;
    auto ensure = [&]() -> Stack& {
      if (!st) {
        st = std::make_unique<Stack>(c.lat, c.spec, 1.0);
        einv = Eigen::MatrixXd(st->op->weighted_matrix()).inverse();
        gram = st->op->mu().asDiagonal() * einv * st->op->mu().asDiagonal();
      }
      return *st;
    };

    const int nt = c.lat.slice_count();
    const int mid = nt / 2;
    const int a_hi = nt >= 8 ? 2 : 0;
    const int b_lo = nt >= 8 ? nt - 3 : nt - 1;

    rec.row(exp, "kernel", tol, -1, [&] {
      auto& s = ensure();
      double worst = 0.0;
      const double scale = einv.cwiseAbs().maxCoeff();
      for (std::int64_t i = 0; i < s.space->size(); ++i)
        for (std::int64_t j = 0; j < s.space->size(); ++j)
          worst = std::max(worst, std::abs((*s.kernel)(i, j) - einv(i, j)));
      return worst / scale;
    });

    rec.row(exp, "projector", tol, -1, [&] {
      auto& s = ensure();
      const auto patch = slices_region(c.lat, b_lo, nt - 1, "patch");
      const ctm::Projector proj(*s.space, patch);
      const auto f = rec.probe(exp, "projector", 0, s.space->size());
      // dense reference: P f = B (B^T G B)^{-1} B^T G f
      const Eigen::VectorXd gf = gram * f;
      Eigen::VectorXd rhs(patch.size());
      for (std::int64_t i = 0; i < patch.size(); ++i) rhs[i] = gf[patch.sites[i]];
      const Eigen::VectorXd coef =
          submatrix(gram, patch.sites, patch.sites).inverse() * rhs;
      Eigen::VectorXd ref = Eigen::VectorXd::Zero(f.size());
      for (std::int64_t i = 0; i < patch.size(); ++i) ref[patch.sites[i]] = coef[i];
      return (proj.apply(f) - ref).norm() / ref.norm();
    });

    rec.row(exp, "propagator", tol, -1, [&] {
      auto& s = ensure();
      const ctm::Propagator u(*s.space, 1, nt - 2);
      const auto& ssrc = s.space->slice(1);
      const auto& stgt = s.space->slice(nt - 2);
      const Eigen::MatrixXd stt = submatrix(gram, stgt.sites(), stgt.sites());
      const Eigen::MatrixXd sts = submatrix(gram, stgt.sites(), ssrc.sites());
      const Eigen::MatrixXd ref = stt.inverse() * sts;
      return (u.matrix() - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
    });

    rec.row(exp, "norm", tol, -1, [&] {
      auto& s = ensure();
      const ctm::Propagator u(*s.space, 1, nt - 2);
      const auto& ssrc = s.space->slice(1);
      const auto& stgt = s.space->slice(nt - 2);
      const Eigen::MatrixXd stt = submatrix(gram, stgt.sites(), stgt.sites());
      const Eigen::MatrixXd sss = submatrix(gram, ssrc.sites(), ssrc.sites());
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
          u.matrix().transpose() * stt * u.matrix(), sss);
      const double ref = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
      return std::abs(ctm::operator_norm(u, rec.popts(exp, "norm")) - ref) / ref;
    });

    rec.row(exp, "cross", tol, -1, [&] {
      auto& s = ensure();
      const auto l1 = slices_region(c.lat, 0, 1, "l1");
      const auto l2 = slices_region(c.lat, nt - 2, nt - 1, "l2");
      const Eigen::MatrixXd g1 = submatrix(gram, l1.sites, l1.sites);
      const Eigen::MatrixXd g2 = submatrix(gram, l2.sites, l2.sites);
      const Eigen::MatrixXd g12 = submatrix(gram, l1.sites, l2.sites);
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
          g12.transpose() * g1.inverse() * g12, g2);
      const double ref = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
      return std::abs(ctm::cross_norm(*s.space, l1, l2, rec.popts(exp, "cross")) - ref) / ref;
    });

    rec.row(exp, "markov", tol, -1, [&] {
      auto& s = ensure();
      const auto a = slices_region(c.lat, 0, a_hi, "a");
      const auto cc = slices_region(c.lat, mid, mid, "c");
      const auto b = slices_region(c.lat, b_lo, nt - 1, "b");
      const Eigen::MatrixXd y = submatrix(gram, a.sites, cc.sites) *
                                    submatrix(gram, cc.sites, cc.sites).inverse() *
                                    submatrix(gram, cc.sites, b.sites) -
                                submatrix(gram, a.sites, b.sites);
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
          y.transpose() * submatrix(gram, a.sites, a.sites).inverse() * y,
          submatrix(gram, b.sites, b.sites));
      const double ref = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
      const double got =
          ctm::markov_residual(*s.space, a, cc, b, rec.popts(exp, "markov"));
      return std::abs(got - ref) / std::max(1.0, ref);
    });
  }

  return finish(7, "small instances agree with dense references", rec, t0);
}

}  // namespace lab
