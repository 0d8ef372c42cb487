#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sclab/field.hpp"

namespace sclab {

// Version stamp carried by every scenario and report file.
inline constexpr const char* kSpecVersion = "1.0";

// Scenario file failed to parse as JSON.  The message carries the source
// name plus line and column of the offending byte.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario parsed but violated the schema.  `field` is the JSON path of
// the offending value (e.g. "gamma[2].value.op").
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message),
        field(std::move(field_path)) {}
  std::string field;
};

// A Gaussian symbol specification for the deformation sweep.
struct GaussSpec {
  double center_a = 0;
  double center_l = 0;
  double width = 1;
};

// One validated scenario: the union of the fields the seven pipeline kinds
// consume.  `raw` echoes the parsed input for report embedding.
struct Scenario {
  std::string kind;
  int dimension = 0;
  std::uint64_t seed = 0;
  int samples = 0;        // kind-specific default applied at parse time
  double tolerance = 0;   // 0 keeps the per-check defaults
  double box = 0.5;       // half-width of the sampling cube

  // Connection-backed kinds: coefficients and the two-form as expressions.
  ExprConnection gamma;
  ExprForm omega;
  bool omega_standard = false;
  std::vector<Expr> lambda;  // potential of the two-form, when supplied
  bool has_lambda = false;

  // Quotient-chart kind.
  std::vector<double> generator;  // N*N row-major, infinitesimally symplectic
  std::string generator_form;     // "round", "random", or "matrix"
  double generator_scale = 1.0;   // magnitude of the random generator
  std::vector<double> basepoint;

  // Almost-complex-structure sampling.
  int structures = 50;

  // Deformation sweep.
  std::vector<double> thetas;
  std::vector<std::pair<GaussSpec, GaussSpec>> pairs;
  double wkb_box = 4.10;
  int grid_a = 200;
  int grid_l = 256;

  // Degree-operator kind: the (q, p) bidegrees to exercise.
  std::vector<std::pair<int, int>> degrees;

  nlohmann::json raw;
};

// Parses and validates a scenario from a JSON value.  `source` names the
// origin for error messages.  Throws SchemaError on violations.
Scenario parse_scenario(const nlohmann::json& j, const std::string& source);

// Loads a scenario file.  Throws ParseError (with line and column) or
// SchemaError.
Scenario load_scenario(const std::string& path);

// Serializes a parsed scenario back to canonical JSON: defaults are
// materialized, expressions regenerate their tree form, and key order is
// normalized.  load(save(s)) reproduces s.
nlohmann::json save_scenario(const Scenario& s);

// Expression-tree JSON round-trip helpers used by save/load.
Expr parse_expr(const nlohmann::json& j, int dimension,
                const std::string& path);
nlohmann::json expr_to_json(const Expr& e);

// Worker-count cap from the SCLAB_THREADS environment variable, clamped to
// at least one.  Controls how many chunks sampling loops may process in
// parallel; chunk boundaries are fixed so results do not depend on it.
int worker_cap();

}  // namespace sclab
