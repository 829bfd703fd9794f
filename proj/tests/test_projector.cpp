#include <cmath>

#include "doctest.h"

#include "ctm/errors.hpp"
#include "ctm/helmholtz.hpp"
#include "ctm/projector.hpp"
#include "ctm/region.hpp"
#include "common.hpp"
#include "oracle.hpp"

using namespace ctm;
using ctmtest::Instance;
using ctmtest::shared_instance;

namespace {

Region halfplane_t(const Instance& inst, int side, double c, const std::string& name) {
  return region_halfplane(inst.lattice, 0, side, c, name);
}

}  // namespace

TEST_SUITE("projector") {

TEST_CASE("idempotent, self-adjoint, contractive") {
  auto& inst = shared_instance("flat17");
  Region r = region_rect(inst.lattice, Eigen::Vector3d(-2.0, -2.0, 0.0),
                         Eigen::Vector3d(1.0, 2.5, 0.0), "patch");
  Projector p(*inst.space, r);
  Eigen::VectorXd f = Eigen::VectorXd::Random(inst.space->size());
  Eigen::VectorXd h = Eigen::VectorXd::Random(inst.space->size());
  Eigen::VectorXd pf = p.apply(f);

  CHECK((p.apply(pf) - pf).norm() < 1e-10 * inst.space->norm(pf));
  CHECK(inst.space->inner(pf, h) == doctest::Approx(inst.space->inner(f, p.apply(h)))
                                        .epsilon(1e-10));
  CHECK(inst.space->norm(pf) <= inst.space->norm(f) * (1.0 + 1e-12));
  // fields already supported on the region are fixed
  Eigen::VectorXd supported = Eigen::VectorXd::Zero(inst.space->size());
  for (std::int64_t s : r.sites) supported[s] = 1.0;
  CHECK((p.apply(supported) - supported).norm() < 1e-10 * inst.space->norm(supported));
  // the projection lives on the region's sites only
  for (std::int64_t i = 0; i < pf.size(); ++i)
    if (!r.contains(i)) CHECK(pf[i] == 0.0);
}

TEST_CASE("projection agrees with the dense explicit-inverse oracle") {
  auto& inst = shared_instance("flat10");
  Eigen::MatrixXd gram = ctmtest::oracle_gram(*inst.op);
  Region r = region_rect(inst.lattice, Eigen::Vector3d(-0.75, -0.75, 0.0),
                         Eigen::Vector3d(0.25, 0.5, 0.0), "patch");
  Projector p(*inst.space, r);
  Eigen::VectorXd f = Eigen::VectorXd::Random(inst.space->size());
  Eigen::VectorXd mine = p.apply(f);
  Eigen::VectorXd oracle = ctmtest::oracle_project(gram, r, f);
  CHECK((mine - oracle).norm() < 1e-9 * (oracle.norm() + 1.0));
}

TEST_CASE("monotone in the region") {
  auto& inst = shared_instance("flat17");
  Region small = region_rect(inst.lattice, Eigen::Vector3d(-2.0, -2.0, 0.0),
                             Eigen::Vector3d(0.0, 0.0, 0.0), "small");
  Region big = region_rect(inst.lattice, Eigen::Vector3d(-3.0, -3.0, 0.0),
                           Eigen::Vector3d(1.0, 1.0, 0.0), "big");
  Projector ps(*inst.space, small), pb(*inst.space, big);
  Eigen::VectorXd f = Eigen::VectorXd::Random(inst.space->size());
  CHECK(inst.space->norm(ps.apply(f)) <= inst.space->norm(pb.apply(f)) * (1.0 + 1e-10));
}

TEST_CASE("graph separation detector") {
  auto& inst = shared_instance("flat17");
  AdjacencyGraph graph = adjacency_graph(*inst.op);
  Region a = halfplane_t(inst, -1, -2.25, "past");
  Region b = halfplane_t(inst, +1, 2.25, "future");
  Region cut = region_rect(inst.lattice, Eigen::Vector3d(-0.5, -4.0, 0.0),
                           Eigen::Vector3d(0.5, 4.0, 0.0), "cut");
  CHECK(separation_check(graph, a, b, cut));
  // a one-slice cut also separates
  Region thin = region_rect(inst.lattice, Eigen::Vector3d(0.0, -4.0, 0.0),
                            Eigen::Vector3d(0.0, 4.0, 0.0), "thin");
  CHECK(separation_check(graph, a, b, thin));
  // removing one interior site of the thin cut opens a corridor
  Region holed = region_difference(
      inst.lattice, thin,
      make_region(inst.lattice, {inst.lattice.index_of({8, 8, 0})}, "hole"), "holed");
  CHECK(!separation_check(graph, a, b, holed));
}

TEST_CASE("screening is exact across separating regions") {
  auto& inst = shared_instance("flat17");
  struct Triple { double a_to, c_lo, c_hi, b_from; };
  for (Triple t : {Triple{-2.25, -0.5, 0.5, 2.25}, Triple{-1.25, 0.0, 0.0, 1.75},
                   Triple{-3.25, -1.5, 1.5, 2.75}}) {
    Region a = halfplane_t(inst, -1, t.a_to, "past");
    Region c = region_rect(inst.lattice, Eigen::Vector3d(t.c_lo, -4.0, 0.0),
                           Eigen::Vector3d(t.c_hi, 4.0, 0.0), "cut");
    Region b = halfplane_t(inst, +1, t.b_from, "future");
    REQUIRE(separation_check(adjacency_graph(*inst.op), a, b, c));
    CHECK(markov_residual(*inst.space, a, c, b) < 1e-10);
  }
}

TEST_CASE("screening fails across a gapped cut") {
  auto& inst = shared_instance("flat17");
  Region a = halfplane_t(inst, -1, -1.0, "past");
  Region b = halfplane_t(inst, +1, 1.0, "future");
  Region cut = region_rect(inst.lattice, Eigen::Vector3d(0.0, -4.0, 0.0),
                           Eigen::Vector3d(0.0, 4.0, 0.0), "cut");
  Region gapped = region_difference(
      inst.lattice, cut, make_region(inst.lattice, {inst.lattice.index_of({8, 8, 0})}, "hole"),
      "gapped");
  REQUIRE(!separation_check(adjacency_graph(*inst.op), a, b, gapped));
  double res = markov_residual(*inst.space, a, gapped, b);
  CHECK(res > 1e-3);   // the leak through the hole is visible
  CHECK(res < 5e-2);   // and small: frozen at 1.03e-2
  CHECK(res == doctest::Approx(1.029e-2).epsilon(0.05));
}

TEST_CASE("markov residual agrees with the dense pencil oracle") {
  auto& inst = shared_instance("flat10");
  Eigen::MatrixXd gram = ctmtest::oracle_gram(*inst.op);
  Region a = region_halfplane(inst.lattice, 0, -1, -0.55, "past");
  Region c = region_rect(inst.lattice, Eigen::Vector3d(-0.5, -1.0, 0.0),
                         Eigen::Vector3d(-0.25, 1.0, 0.0), "cut");
  Region b = region_halfplane(inst.lattice, 0, +1, -0.2, "future");
  // c does NOT separate here (it only spans two rows but b begins right after);
  // use it as a generic triple for oracle agreement
  double mine = markov_residual(*inst.space, a, c, b);
  double oracle = ctmtest::oracle_markov_residual(gram, a, c, b);
  CHECK(mine == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("cross norm agrees with the dense pencil oracle") {
  auto& inst = shared_instance("flat10");
  Eigen::MatrixXd gram = ctmtest::oracle_gram(*inst.op);
  Region r1 = region_halfplane(inst.lattice, 0, -1, -0.3, "lo");
  Region r2 = region_halfplane(inst.lattice, 0, +1, 0.3, "hi");
  double mine = cross_norm(*inst.space, r1, r2);
  double oracle = ctmtest::oracle_cross_norm(gram, r1, r2);
  CHECK(mine == doctest::Approx(oracle).epsilon(1e-7));
  // the norm is symmetric in its arguments
  CHECK(cross_norm(*inst.space, r2, r1) == doctest::Approx(mine).epsilon(1e-7));
  CHECK(mine < 1.0);
}

TEST_CASE("cross norms fall with separation") {
  Instance inst(build_lattice(2, {41, 17}, {0.5, 0.5}, {-10.0, -4.0}), MetricSpec::flat(), 1.0);
  auto block = [&](int t0) {
    return region_rect(inst.lattice, Eigen::Vector3d(-10.0 + 0.5 * t0, -1.0, 0.0),
                       Eigen::Vector3d(-10.0 + 0.5 * (t0 + 2), 1.0, 0.0), "blk");
  };
  Region a = block(4);
  double n6 = cross_norm(*inst.space, a, block(16));
  double n9 = cross_norm(*inst.space, a, block(22));
  double n12 = cross_norm(*inst.space, a, block(28));
  CHECK(n6 < 0.1);
  CHECK(n9 < n6 / 5.0);
  CHECK(n12 < n9 / 5.0);
  // frozen values
  CHECK(n6 == doctest::Approx(3.155e-3).epsilon(0.05));
  CHECK(n12 == doctest::Approx(4.851e-6).epsilon(0.05));
}

TEST_CASE("region plumbing") {
  auto& inst = shared_instance("flat17");
  CHECK_THROWS_AS(make_region(inst.lattice, {}, "empty"), UsageError);
  CHECK_THROWS_AS(make_region(inst.lattice, {-1}, "neg"), UsageError);
  CHECK_THROWS_AS(make_region(inst.lattice, {289}, "big"), UsageError);
  Region dup = make_region(inst.lattice, {5, 5, 3}, "dup");
  CHECK(dup.size() == 2);
  CHECK(dup.sites.front() == 3);
  Region u = region_union(inst.lattice, dup, make_region(inst.lattice, {7}, "x"), "u");
  CHECK(u.size() == 3);
  CHECK(u.contains(7));
  CHECK(!u.contains(6));
}

}  // TEST_SUITE
