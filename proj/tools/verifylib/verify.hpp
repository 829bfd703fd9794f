#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lab {

enum class Tier { small, full };

// One checked quantity. `sense` fixes the pass direction: -1 passes when
// value <= tolerance, +1 when value >= tolerance. Wall time and note are for
// the console report only and never reach the CSV (they would break byte-level
// reproducibility across machines).
struct ReportRow {
  std::string experiment;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  int sense = -1;
  bool pass = false;
  std::string note;
  double wall_seconds = 0.0;
};

struct CriterionOutcome {
  int index = 0;
  std::string name;
  std::vector<ReportRow> rows;
  bool pass = false;     // every row passed
  double seconds = 0.0;  // wall time of the whole criterion
};

struct VerifyOptions {
  Tier tier = Tier::small;
  std::uint64_t seed = 12345;
  int workers = 1;
  std::string data_dir;  // directory holding curve / tabulated-metric assets
};

// Per-row probe seed: the base seed folded with the row identity, so row
// values do not depend on execution order or worker count.
std::uint64_t row_seed(std::uint64_t base, const std::string& id);

CriterionOutcome criterion_screening(const VerifyOptions& opt);       // 1
CriterionOutcome criterion_isometries(const VerifyOptions& opt);      // 2
CriterionOutcome criterion_composition(const VerifyOptions& opt);     // 3
CriterionOutcome criterion_rates(const VerifyOptions& opt);           // 4
CriterionOutcome criterion_generator(const VerifyOptions& opt);       // 5
CriterionOutcome criterion_decoupling(const VerifyOptions& opt,
                                      bool include_lshape);           // 6
CriterionOutcome criterion_oracle(const VerifyOptions& opt);          // 7
CriterionOutcome criterion_interior_decay(const VerifyOptions& opt);  // 8
CriterionOutcome criterion_repeatability(const VerifyOptions& opt);   // 9

// The whole suite in criterion order. Criteria run concurrently up to
// opt.workers; rows come back sorted by (experiment, quantity) regardless.
std::vector<CriterionOutcome> run_suite(const VerifyOptions& opt);

}  // namespace lab
