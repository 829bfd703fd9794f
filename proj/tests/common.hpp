#pragma once

#include <map>
#include <memory>
#include <string>

#include "ctm/helmholtz.hpp"
#include "ctm/lattice.hpp"
#include "ctm/metric.hpp"
#include "ctm/nspace.hpp"

namespace ctmtest {

// A fully wired solver stack for one lattice/metric/mass combination.
// Members are pointers because each layer keeps a reference to the previous.
struct Instance {
  ctm::Lattice lattice;
  std::unique_ptr<ctm::MetricField> metric;
  std::unique_ptr<ctm::WeightedOperator> op;
  std::unique_ptr<ctm::GreenKernel> kernel;
  std::unique_ptr<ctm::NSpace> space;

  Instance(const ctm::Lattice& lat, const ctm::MetricSpec& spec, double mass)
      : lattice(lat) {
    metric = std::make_unique<ctm::MetricField>(ctm::sample_metric(lattice, spec));
    op = std::make_unique<ctm::WeightedOperator>(ctm::assemble_helmholtz(lattice, *metric, mass));
    kernel = std::make_unique<ctm::GreenKernel>(*op);
    space = std::make_unique<ctm::NSpace>(*kernel);
  }
};

// Shared instances, built on first use and reused across suites in one binary.
inline Instance& shared_instance(const std::string& key) {
  static std::map<std::string, std::unique_ptr<Instance>> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  std::unique_ptr<Instance> inst;
  if (key == "flat17") {
    // coarse flat box, h = 0.5 on [-4,4]^2
    inst = std::make_unique<Instance>(
        ctm::build_lattice(2, {17, 17}, {0.5, 0.5}, {-4.0, -4.0}), ctm::MetricSpec::flat(), 1.0);
  } else if (key == "flat33") {
    // fine flat box, h = 0.125 on [-2,2]^2
    inst = std::make_unique<Instance>(
        ctm::build_lattice(2, {33, 33}, {0.125, 0.125}, {-2.0, -2.0}), ctm::MetricSpec::flat(),
        1.0);
  } else if (key == "strip41") {
    // quasi one-dimensional strip, deep interior available
    inst = std::make_unique<Instance>(
        ctm::build_lattice(2, {41, 3}, {0.5, 0.5}, {0.0, -1.0}), ctm::MetricSpec::flat(), 1.0);
  } else if (key == "flat10") {
    // oracle-sized instance (100 sites)
    inst = std::make_unique<Instance>(
        ctm::build_lattice(2, {10, 10}, {0.25, 0.25}, {-1.0, -1.0}), ctm::MetricSpec::flat(), 1.0);
  } else {
    throw std::runtime_error("unknown shared instance " + key);
  }
  auto& ref = *inst;
  cache[key] = std::move(inst);
  return ref;
}

}  // namespace ctmtest
