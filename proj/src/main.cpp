// sclab: run one scenario through the laboratory and report every check.
//
// Exit codes: 0 all checks pass, 1 at least one check fails, 2 the input
// could not be used (unreadable file, malformed JSON, schema violation, or
// a module rejecting its data).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sclab/runner.hpp"
#include "sclab/scenario.hpp"

namespace {

const char* kKinds =
    "connection-check, reduce, induce, roundtrip, twistor, wkb, koszul";

int fail_input(const std::string& what) {
  std::cerr << "sclab: " << what << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic connection laboratory"};
  std::string kind, scenario_path, out_path, format = "json";
  std::int64_t seed_override = -1;
  double tol_override = 0;

  app.add_option("kind", kind,
                 std::string("scenario kind to run (one of ") + kKinds + ")")
      ->required();
  app.add_option("--scenario", scenario_path, "path to the scenario JSON")
      ->required();
  app.add_option("--out", out_path,
                 "write the report here instead of stdout");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed_override, "override the scenario seed")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol", tol_override,
                 "override every default tolerance in the scenario")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  sclab::Scenario scenario;
  try {
    scenario = sclab::load_scenario(scenario_path);
  } catch (const sclab::ParseError& e) {
    return fail_input(e.what());
  } catch (const sclab::SchemaError& e) {
    return fail_input(std::string("schema violation at ") + e.what());
  }
  if (scenario.kind != kind)
    return fail_input("scenario kind '" + scenario.kind +
                      "' does not match the requested kind '" + kind + "'");
  if (seed_override >= 0)
    scenario.seed = static_cast<std::uint64_t>(seed_override);
  if (tol_override > 0) scenario.tolerance = tol_override;

  sclab::Report report;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    report = sclab::run(scenario);
  } catch (const std::exception& e) {
    return fail_input(std::string("scenario could not be evaluated: ") +
                      e.what());
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
          t1 - t0)
          .count();

  const std::string text =
      format == "csv" ? sclab::emit_csv(report) : sclab::emit_json(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) return fail_input("cannot open output file '" + out_path + "'");
    out << text;
  }

  // Timing is diagnostic only; keep it off the report stream.
  std::fprintf(stderr, "sclab: %s finished in %.1f ms\n",
               scenario.kind.c_str(), ms);
  return report.pass() ? 0 : 1;
}
