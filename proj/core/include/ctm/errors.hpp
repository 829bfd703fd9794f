#pragma once

#include <stdexcept>
#include <string>

namespace ctm {

// Error taxonomy shared by all modules. Messages carry "module.operation:"
// prefixes so harness reports can name the failing stage.

// Bad user-supplied parameters (shapes, spacings, masses, tolerances).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input files (tabulated metrics, region lists).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A sampled metric violating positive definiteness or its invariants.
class MetricError : public std::runtime_error {
public:
  explicit MetricError(const std::string& what) : std::runtime_error(what) {}
};

// Curve / region geometry that breaks a chart precondition.
class GeometryError : public std::runtime_error {
public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdowns: non-convergence, rank deficiency, stagnation.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

// API misuse: dimension mismatches, out-of-range slices, empty selections.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctm
