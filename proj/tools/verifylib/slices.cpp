#include "ctm/curve_chart.hpp"
#include "ctm/projector.hpp"
#include "ctm/region.hpp"
#include "ctm/transfer.hpp"

#include "stack.hpp"

namespace lab {
namespace {

// The two 17 x 17 instances (h = 0.5 on [-4,4]^2): flat, and the unit-slope
// chart metric. Both stationary; the second has nontrivial nu weights.
std::vector<std::pair<std::string, std::unique_ptr<Stack>>> slice_instances() {
  const auto lat = ctm::build_lattice(2, {17, 17}, {0.5, 0.5}, {-4.0, -4.0});
  std::vector<std::pair<std::string, std::unique_ptr<Stack>>> out;
  out.emplace_back("flat17", std::make_unique<Stack>(lat, ctm::MetricSpec::flat(), 1.0));
  out.emplace_back("chart17",
                   std::make_unique<Stack>(
                       lat,
                       ctm::MetricSpec::curve_induced(
                           ctm::build_chart({{-6.0, -6.0}, {6.0, 6.0}}, 0.0)),
                       1.0));
  return out;
}

}  // namespace

CriterionOutcome criterion_isometries(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);
  const int kProbes = 8;

  for (const auto& [tag, st] : slice_instances()) {
    for (int sigma : {4, 8, 12}) {
      const std::string exp = "c2." + tag + ".s" + (sigma < 10 ? "0" : "") + std::to_string(sigma);
      const auto& sl = st->space->slice(sigma);
      const std::int64_t m = sl.size();
      const std::int64_t n = st->space->size();

      rec.row(exp, "pairing_defect", 1e-8, -1, [&] {
        double worst = 0.0;
        for (int p = 0; p < kProbes; ++p) {
          const auto psi = rec.probe(exp, "pairing_defect", 2 * p, m);
          const auto phi = rec.probe(exp, "pairing_defect", 2 * p + 1, m);
          const double lhs = st->space->inner(st->space->embed(sigma, psi),
                                              st->space->embed(sigma, phi));
          const double rhs = sl.inner(psi, phi);
          worst = std::max(worst, std::abs(lhs - rhs) / (sl.norm(psi) * sl.norm(phi)));
        }
        return worst;
      });

      rec.row(exp, "restrict_embed", 1e-8, -1, [&] {
        double worst = 0.0;
        for (int p = 0; p < kProbes; ++p) {
          const auto psi = rec.probe(exp, "restrict_embed", p, m);
          const auto back = st->space->restrict_to(sigma, st->space->embed(sigma, psi));
          worst = std::max(worst, sl.norm(back - psi) / sl.norm(psi));
        }
        return worst;
      });

      rec.row(exp, "embed_restrict", 1e-8, -1, [&] {
        const ctm::Projector proj(*st->space,
                                  ctm::make_region(st->lattice, sl.sites(), "slice"));
        double worst = 0.0;
        for (int p = 0; p < 4; ++p) {
          const auto f = rec.probe(exp, "embed_restrict", p, n);
          const auto lhs = st->space->embed(sigma, st->space->restrict_to(sigma, f));
          worst = std::max(worst, st->space->norm(lhs - proj.apply(f)) / st->space->norm(f));
        }
        return worst;
      });

      rec.row(exp, "sqrt_roundtrip", 1e-8, -1, [&] {
        double worst = 0.0;
        for (int p = 0; p < kProbes; ++p) {
          const auto psi = rec.probe(exp, "sqrt_roundtrip", p, m);
          const auto back = sl.sqrt_adjoint_inverse(sl.sqrt_forward(psi));
          worst = std::max(worst, sl.norm(back - psi) / sl.norm(psi));
        }
        return worst;
      });

      rec.row(exp, "sqrt_isometry", 1e-8, -1, [&] {
        double worst = 0.0;
        for (int p = 0; p < kProbes; ++p) {
          const auto psi = rec.probe(exp, "sqrt_isometry", p, m);
          const auto w = sl.sqrt_forward(psi);
          const double nu_norm = std::sqrt(w.cwiseAbs2().dot(sl.nu()));
          worst = std::max(worst, std::abs(nu_norm - sl.norm(psi)) / sl.norm(psi));
        }
        return worst;
      });
    }
  }

  return finish(2, "slice embeddings and square-root frame", rec, t0);
}

CriterionOutcome criterion_composition(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);
  const std::array<std::array<int, 3>, 3> triples = {{{12, 8, 4}, {13, 7, 2}, {14, 9, 5}}};

  for (const auto& [tag, st] : slice_instances()) {
    for (const auto& tr : triples) {
      const std::string exp = "c3." + tag + "." + std::to_string(tr[0]) + "-" +
                              std::to_string(tr[1]) + "-" + std::to_string(tr[2]);

      rec.row(exp, "composition_residual", 1e-8, -1, [&] {
        return ctm::composition_residual(*st->space, tr[0], tr[1], tr[2],
                                         rec.popts(exp, "composition_residual"));
      });

      rec.row(exp, "identity_defect", 1e-10, -1, [&] {
        const ctm::Propagator u(*st->space, tr[1], tr[1]);
        const auto& sl = st->space->slice(tr[1]);
        const Eigen::MatrixXd d =
            ctm::frame_matrix(sl, sl, u.matrix()) -
            Eigen::MatrixXd::Identity(u.matrix().rows(), u.matrix().cols());
        return d.operatorNorm();
      });

      rec.row(exp, "norm_bound", 1.0 + 1e-8, -1, [&] {
        const ctm::Propagator u(*st->space, tr[2], tr[0]);
        return ctm::operator_norm(u, rec.popts(exp, "norm_bound"));
      });
    }
  }

  return finish(3, "propagator composition and contractivity", rec, t0);
}

}  // namespace lab
