#include <array>

#include "ctm/curve_chart.hpp"
#include "ctm/projector.hpp"
#include "ctm/region.hpp"

#include "stack.hpp"

namespace lab {
namespace {

struct Triple {
  std::string name;
  ctm::Region a, c, b;
};

// Five cuts on a 24 x 24 box, t and x in [-2.875, 2.875]. Every triple is
// graph-separated: c meets every cell-path from a to b, so the screening
// residual is rounding-level. The staircase cut covers columns x <= 0.125 on
// one slice and x >= 0.125 on the next; the shared column closes the corner
// against diagonal (cell-sharing) hops.
std::vector<Triple> box_triples(const ctm::Lattice& lat) {
  const double inf = 1e30;
  auto rect = [&](double t0, double t1, double x0, double x1, const std::string& n) {
    return ctm::region_rect(lat, {t0, x0, -inf}, {t1, x1, inf}, n);
  };
  std::vector<Triple> out;
  const auto a_slab = ctm::region_halfplane(lat, 0, -1, -1.0, "a");
  const auto b_slab = ctm::region_halfplane(lat, 0, +1, 1.0, "b");
  out.push_back({"thin", a_slab, rect(-0.2, -0.05, -inf, inf, "c"), b_slab});
  out.push_back({"thick", a_slab, rect(-0.7, 0.7, -inf, inf, "c"), b_slab});
  out.push_back({"offset", ctm::region_halfplane(lat, 0, -1, -2.0, "a"),
                 rect(-1.7, -1.3, -inf, inf, "c"), ctm::region_halfplane(lat, 0, +1, -0.7, "b")});
  out.push_back({"spatial", ctm::region_halfplane(lat, 1, -1, -1.0, "a"),
                 rect(-inf, inf, -0.2, -0.05, "c"), ctm::region_halfplane(lat, 1, +1, 1.0, "b")});
  out.push_back({"staircase", a_slab,
                 ctm::region_union(lat, rect(-0.2, -0.05, -inf, 0.2, "c1"),
                                   rect(0.05, 0.2, -0.05, inf, "c2"), "c"),
                 b_slab});
  return out;
}

void run_instance(Recorder& rec, const std::string& tag, const Stack& st,
                  const std::vector<Triple>& triples) {
  const auto graph = ctm::adjacency_graph(*st.op);
  for (const auto& tr : triples) {
    const std::string exp = "c1." + tag + "." + tr.name;
    rec.row(exp, "markov_residual", 1e-8, -1, [&] {
      if (!ctm::separation_check(graph, tr.a, tr.b, tr.c))
        throw ctm::GeometryError("screening: cut does not separate " + exp);
      return ctm::markov_residual(*st.space, tr.a, tr.c, tr.b, rec.popts(exp, "markov_residual"));
    });
  }
}

}  // namespace

CriterionOutcome criterion_screening(const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec(opt.seed);

  const auto lat = ctm::build_lattice(2, {24, 24}, {0.25, 0.25}, {-2.875, -2.875});
  const auto triples = box_triples(lat);
  {
    Stack flat(lat, ctm::MetricSpec::flat(), 1.0);
    run_instance(rec, "flat24", flat, triples);
  }
  {
    // unit-slope chart metric on the same box
    Stack chart(lat,
                ctm::MetricSpec::curve_induced(ctm::build_chart({{-6.0, -6.0}, {6.0, 6.0}}, 0.0)),
                1.0);
    run_instance(rec, "chart24", chart, triples);
  }

  if (opt.tier == Tier::full) {
    // one 2+1 dimensional instance: full-cross-section slabs
    const auto lat3 = ctm::build_lattice(3, {13, 9, 9}, {0.5, 0.5, 0.5}, {-3.0, -2.0, -2.0});
    Stack cube(lat3, ctm::MetricSpec::flat(), 1.0);
    std::vector<Triple> t3;
    t3.push_back({"slabs", ctm::region_halfplane(lat3, 0, -1, -1.5, "a"),
                  ctm::region_rect(lat3, {-0.6, -1e30, -1e30}, {0.6, 1e30, 1e30}, "c"),
                  ctm::region_halfplane(lat3, 0, +1, 1.5, "b")});
    run_instance(rec, "cube13", cube, t3);
  }

  return finish(1, "markov screening across separating cuts", rec, t0);
}

}  // namespace lab
