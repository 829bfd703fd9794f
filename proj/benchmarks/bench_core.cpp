// Microbenchmarks for the hot paths: assembly, kernel solves, projector and
// propagator applications, and the shortest-path distance used by the decay
// bounds. Fixtures are built once per process; each layer keeps a reference
// to the previous one, hence the pointer members.

#include <benchmark/benchmark.h>

#include <memory>

#include "ctm/helmholtz.hpp"
#include "ctm/lattice.hpp"
#include "ctm/metric.hpp"
#include "ctm/nspace.hpp"
#include "ctm/projector.hpp"
#include "ctm/region.hpp"
#include "ctm/transfer.hpp"

namespace {

struct Fixture {
  ctm::Lattice lattice;
  std::unique_ptr<ctm::MetricField> metric;
  std::unique_ptr<ctm::WeightedOperator> op;
  std::unique_ptr<ctm::GreenKernel> kernel;
  std::unique_ptr<ctm::NSpace> space;

  Fixture(const ctm::Lattice& lat, const ctm::MetricSpec& spec, double mass) : lattice(lat) {
    metric = std::make_unique<ctm::MetricField>(ctm::sample_metric(lattice, spec));
    op = std::make_unique<ctm::WeightedOperator>(ctm::assemble_helmholtz(lattice, *metric, mass));
    kernel = std::make_unique<ctm::GreenKernel>(*op);
    space = std::make_unique<ctm::NSpace>(*kernel);
  }
};

Fixture& flat33() {
  static Fixture f(ctm::build_lattice(2, {33, 33}, {0.125, 0.125}, {-2.0, -2.0}),
                   ctm::MetricSpec::flat(), 1.0);
  return f;
}

Fixture& flat17() {
  static Fixture f(ctm::build_lattice(2, {17, 17}, {0.5, 0.5}, {-4.0, -4.0}),
                   ctm::MetricSpec::flat(), 1.0);
  return f;
}

}  // namespace

static void AssembleHelmholtz(benchmark::State& state) {
  auto& f = flat33();
  for (auto _ : state) {
    auto op = ctm::assemble_helmholtz(f.lattice, *f.metric, 1.0);
    benchmark::DoNotOptimize(op.matrix().nonZeros());
  }
}
BENCHMARK(AssembleHelmholtz);

static void GreenColumn(benchmark::State& state) {
  // fresh kernel per iteration so every column call pays the solve
  auto& f = flat17();
  const std::int64_t center = f.lattice.index_of({8, 8, 0});
  for (auto _ : state) {
    ctm::GreenKernel kernel(*f.op);
    benchmark::DoNotOptimize(kernel.column(center).sum());
  }
}
BENCHMARK(GreenColumn);

static void DenseKernel(benchmark::State& state) {
  static Fixture f(ctm::build_lattice(2, {10, 10}, {0.25, 0.25}, {-1.0, -1.0}),
                   ctm::MetricSpec::flat(), 1.0);
  for (auto _ : state) {
    ctm::GreenKernel kernel(*f.op);
    benchmark::DoNotOptimize(kernel.dense_matrix().sum());
  }
}
BENCHMARK(DenseKernel);

static void ProjectorApply(benchmark::State& state) {
  auto& f = flat33();
  static ctm::Projector proj(*f.space,
                             ctm::region_halfplane(f.lattice, 0, -1, 0.0, "left"));
  Eigen::VectorXd file = Eigen::VectorXd::LinSpaced(f.lattice.site_count(), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(proj.apply(file).sum());
}
BENCHMARK(ProjectorApply);

static void MarkovResidual(benchmark::State& state) {
  auto& f = flat17();
  const auto a = ctm::region_halfplane(f.lattice, 0, -1, -1.0, "a");
  const auto c = ctm::region_rect(f.lattice, {-0.2, -9.0, -9.0}, {0.2, 9.0, 9.0}, "cut");
  const auto b = ctm::region_halfplane(f.lattice, 0, 1, 1.0, "b");
  for (auto _ : state)
    benchmark::DoNotOptimize(ctm::markov_residual(*f.space, a, c, b, {}));
}
BENCHMARK(MarkovResidual);

static void CrossNorm(benchmark::State& state) {
  auto& f = flat17();
  const auto l1 = ctm::region_halfplane(f.lattice, 0, -1, -1.0, "l1");
  const auto l2 = ctm::region_halfplane(f.lattice, 0, 1, 1.0, "l2");
  for (auto _ : state)
    benchmark::DoNotOptimize(ctm::cross_norm(*f.space, l1, l2, {}));
}
BENCHMARK(CrossNorm);

static void PropagatorNorm(benchmark::State& state) {
  auto& f = flat33();
  for (auto _ : state) {
    ctm::Propagator p(*f.space, 12, 20);
    benchmark::DoNotOptimize(ctm::operator_norm(p, {}));
  }
}
BENCHMARK(PropagatorNorm);

static void AgmonDistances(benchmark::State& state) {
  auto& f = flat33();
  const std::int64_t center = f.lattice.index_of({16, 16, 0});
  for (auto _ : state)
    benchmark::DoNotOptimize(ctm::agmon_distances(f.lattice, *f.metric, 1.0, center).sum());
}
BENCHMARK(AgmonDistances);

BENCHMARK_MAIN();
