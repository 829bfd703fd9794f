#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctm/errors.hpp"
#include "ctm/helmholtz.hpp"
#include "ctm/lattice.hpp"
#include "ctm/metric.hpp"
#include "ctm/nspace.hpp"
#include "ctm/power.hpp"

#include "verify.hpp"

namespace lab {

// A fully wired solver stack for one lattice/metric/mass combination. Each
// criterion builds its own stacks so concurrent criteria never share the
// lazily filled kernel cache.
struct Stack {
  ctm::Lattice lattice;
  std::unique_ptr<ctm::MetricField> metric;
  std::unique_ptr<ctm::WeightedOperator> op;
  std::unique_ptr<ctm::GreenKernel> kernel;
  std::unique_ptr<ctm::NSpace> space;

  Stack(const ctm::Lattice& lat, const ctm::MetricSpec& spec, double mass) : lattice(lat) {
    metric = std::make_unique<ctm::MetricField>(ctm::sample_metric(lattice, spec));
    op = std::make_unique<ctm::WeightedOperator>(ctm::assemble_helmholtz(lattice, *metric, mass));
    kernel = std::make_unique<ctm::GreenKernel>(*op);
    space = std::make_unique<ctm::NSpace>(*kernel);
  }
};

// Collects rows for one criterion. Each row runs under a try block: a thrown
// ConfigError aborts the whole suite (a broken catalog is not a measurement),
// every other failure marks only that row failed and the suite continues.
class Recorder {
public:
  explicit Recorder(std::uint64_t base_seed) : base_(base_seed) {}

  template <class Fn>
  void row(const std::string& experiment, const std::string& quantity, double tolerance,
           int sense, Fn&& fn) {
    ReportRow r;
    r.experiment = experiment;
    r.quantity = quantity;
    r.tolerance = tolerance;
    r.sense = sense;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.value = fn();
      r.pass = sense < 0 ? (r.value <= tolerance) : (r.value >= tolerance);
    } catch (const ctm::ConfigError&) {
      throw;
    } catch (const std::runtime_error& e) {
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.pass = false;
      r.note = e.what();
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows_.push_back(std::move(r));
  }

  // Power-iteration options seeded per row identity.
  ctm::PowerOpts popts(const std::string& experiment, const std::string& quantity,
                       double rtol = 1e-10) const {
    ctm::PowerOpts o;
    o.rtol = rtol;
    o.seed = row_seed(base_, experiment + "/" + quantity);
    return o;
  }

  // Deterministic unit-normal probe vector for the given row identity.
  Eigen::VectorXd probe(const std::string& experiment, const std::string& quantity, int which,
                        std::int64_t n) const {
    std::mt19937_64 rng(row_seed(base_, experiment + "/" + quantity) + 0x9e3779b97f4a7c15ULL *
                                                                           (unsigned)which);
    std::normal_distribution<double> dist;
    Eigen::VectorXd v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = dist(rng);
    return v / v.norm();
  }

  std::vector<ReportRow> take() { return std::move(rows_); }

private:
  std::uint64_t base_;
  std::vector<ReportRow> rows_;
};

CriterionOutcome finish(int index, std::string name, Recorder& rec,
                        std::chrono::steady_clock::time_point t0);

}  // namespace lab
