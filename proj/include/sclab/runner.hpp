#pragma once

#include <string>
#include <vector>

#include "sclab/scenario.hpp"

namespace sclab {

// One verified property: `value` is the measured quantity, `bound` the
// threshold, and `at_most` the direction (pass iff value <= bound when set,
// value >= bound otherwise).
struct CheckRow {
  std::string name;
  double value = 0;
  double bound = 0;
  bool at_most = true;
  bool pass = false;
};

// Machine-readable result of one scenario run.  Deterministic for a fixed
// (scenario, seed): wall-clock timing is deliberately not part of it.
struct Report {
  std::string kind;
  std::uint64_t seed = 0;
  nlohmann::json scenario;  // canonical echo of the inputs
  std::vector<CheckRow> checks;

  bool pass() const;
};

// Runs the pipeline a scenario requests and collects its check rows.
// Module failures propagate as exceptions.
Report run(const Scenario& s);

// Serializations.  JSON nests the rows under "checks" with the scenario
// echo; CSV is the flat row export.  Both end with a newline and are
// byte-stable across repeated runs.
std::string emit_json(const Report& r);
std::string emit_csv(const Report& r);

}  // namespace sclab
