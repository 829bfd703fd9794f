#pragma once

#include <string>

#include "config.hpp"
#include "verify.hpp"

namespace lab {

// Runs one configured experiment and writes <out_dir>/<id>.csv plus any
// requested SVG. Returns the number of failed assertions.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Runs the full criterion suite, writes <out_dir>/verify.csv and a console
// table. Returns the number of failed report rows.
int run_verify_all(const VerifyOptions& opt, const std::string& out_dir);

}  // namespace lab
