#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "sclab/runner.hpp"
#include "sclab/scenario.hpp"

using namespace sclab;

namespace {

std::string fixture(const std::string& name) {
  return std::string(SCLAB_FIXTURES) + "/" + name;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SCLAB_BINARY) + " " + args;
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

// Expect a SchemaError whose message mentions every listed fragment.
template <typename Fn>
void expect_schema_error(Fn&& fn, const std::vector<std::string>& fragments) {
  try {
    fn();
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    for (const std::string& f : fragments) {
      INFO("message: " << what);
      CHECK(what.find(f) != std::string::npos);
    }
  }
}

}  // namespace

TEST_CASE("every bundled scenario reaches a stable canonical form") {
  for (const char* name :
       {"hyperbolic_cylinder.json", "round_reduction.json",
        "cylinder_induction.json", "cylinder_roundtrip.json",
        "cylinder_twistor.json", "gaussian_sweep.json",
        "koszul_degrees.json"}) {
    CAPTURE(name);
    const Scenario s1 = load_scenario(fixture(name));
    const nlohmann::json j1 = save_scenario(s1);
    const Scenario s2 = parse_scenario(j1, name);
    const nlohmann::json j2 = save_scenario(s2);
    CHECK(j1.dump() == j2.dump());
  }

  // The canonical form materializes defaults that the file leaves implicit.
  const Scenario koszul = load_scenario(fixture("koszul_degrees.json"));
  CHECK(!koszul.degrees.empty());
  CHECK(save_scenario(koszul).contains("degrees"));

  // A theta list survives the round trip exactly.
  const Scenario wkb = load_scenario(fixture("gaussian_sweep.json"));
  CHECK(wkb.thetas == std::vector<double>{0.4, 0.2, 0.1, 0.05});
  const Scenario wkb2 = parse_scenario(save_scenario(wkb), "echo");
  CHECK(wkb2.thetas == wkb.thetas);
}

TEST_CASE("schema violations name the offending field and the invariant") {
  auto base = nlohmann::json{{"spec_version", "1.0"},
                             {"kind", "connection-check"},
                             {"dimension", 2},
                             {"omega", "standard"},
                             {"gamma", nlohmann::json::array()}};

  SUBCASE("unknown function names are rejected, never read as zero") {
    auto j = base;
    j["gamma"] = {{{"i", 1},
                   {"k", 0},
                   {"j", 0},
                   {"value", {{"op", "tanh"}, {"args", {{{"coord", 1}}}}}}}};
    expect_schema_error([&] { parse_scenario(j, "t"); },
                        {"gamma[0].value.op", "unknown function name 'tanh'"});
  }

  SUBCASE("odd dimensions are rejected") {
    auto j = base;
    j["dimension"] = 3;
    expect_schema_error([&] { parse_scenario(j, "t"); },
                        {"dimension", "even"});
  }

  SUBCASE("coordinates outside the chart are rejected") {
    auto j = base;
    j["gamma"] = {{{"i", 1},
                   {"k", 0},
                   {"j", 0},
                   {"value", {{"coord", 5}}}}};
    expect_schema_error([&] { parse_scenario(j, "t"); }, {"coord"});
  }

  SUBCASE("a generator outside the symplectic algebra is named as such") {
    nlohmann::json j{{"spec_version", "1.0"},
                     {"kind", "reduce"},
                     {"dimension", 4},
                     {"A",
                      {{1, 0, 0, 0},
                       {0, 1, 0, 0},
                       {0, 0, 1, 0},
                       {0, 0, 0, 1}}}};
    expect_schema_error([&] { parse_scenario(j, "t"); },
                        {"A", "not infinitesimally symplectic",
                         "A^T W + W A"});
  }

  SUBCASE("a deformation sweep needs its theta list") {
    nlohmann::json j{{"spec_version", "1.0"},
                     {"kind", "wkb"},
                     {"pairs",
                      {{{"u", {{"center", {0, 0}}, {"width", 0.5}}},
                        {"v", {{"center", {0, 0}}, {"width", 0.5}}}}}}};
    expect_schema_error([&] { parse_scenario(j, "t"); }, {"thetas"});
  }

  SUBCASE("unsupported format versions are refused up front") {
    auto j = base;
    j["spec_version"] = "2.0";
    expect_schema_error([&] { parse_scenario(j, "t"); }, {"spec_version"});
  }
}

TEST_CASE("parse failures report the file, line, and column") {
  const std::string path = "/tmp/sclab_bad_parse.json";
  {
    std::ofstream out(path);
    out << "{\n  \"spec_version\": \"1.0\",,\n}\n";
  }
  try {
    load_scenario(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find(path) != std::string::npos);
    CHECK(what.find(":2:") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("reports are deterministic and tolerances steer the verdict") {
  Scenario s = load_scenario(fixture("koszul_degrees.json"));
  const Report r1 = run(s);
  const Report r2 = run(s);
  CHECK(emit_json(r1) == emit_json(r2));
  CHECK(emit_csv(r1) == emit_csv(r2));
  CHECK(r1.pass());

  // Every residual row respects an explicit tolerance override.
  s.tolerance = 1e-30;
  const Report strict = run(s);
  CHECK(!strict.pass());
  bool any_failed = false;
  for (const CheckRow& c : strict.checks) any_failed |= !c.pass;
  CHECK(any_failed);
}

TEST_CASE("the worker cap changes nothing in a report") {
  const Scenario s = load_scenario(fixture("hyperbolic_cylinder.json"));
  ::setenv("SCLAB_THREADS", "1", 1);
  const std::string one = emit_json(run(s));
  ::setenv("SCLAB_THREADS", "6", 1);
  const std::string six = emit_json(run(s));
  ::unsetenv("SCLAB_THREADS");
  const std::string free = emit_json(run(s));
  CHECK(one == six);
  CHECK(one == free);
}

TEST_CASE("the binary honours exit codes, output files, and overrides") {
  const std::string out = "/tmp/sclab_cli_report.json";
  std::remove(out.c_str());

  CHECK(run_binary("connection-check --scenario " +
                   fixture("hyperbolic_cylinder.json") + " --out " + out +
                   " 2>/dev/null") == 0);
  const std::string report = slurp(out);
  CHECK(report.find("\"pass\": true") != std::string::npos);
  CHECK(report.find("nabla omega = 0") != std::string::npos);

  // Identical invocations produce byte-identical reports.
  const std::string out2 = "/tmp/sclab_cli_report2.json";
  CHECK(run_binary("connection-check --scenario " +
                   fixture("hyperbolic_cylinder.json") + " --out " + out2 +
                   " 2>/dev/null") == 0);
  CHECK(report == slurp(out2));

  // A failing check is exit 1; unusable input is exit 2.
  CHECK(run_binary("koszul --scenario " + fixture("koszul_degrees.json") +
                   " --tol 1e-30 >/dev/null 2>/dev/null") == 1);
  CHECK(run_binary("wkb --scenario " + fixture("koszul_degrees.json") +
                   " >/dev/null 2>/dev/null") == 2);
  CHECK(run_binary("koszul --scenario /nonexistent.json"
                   " >/dev/null 2>/dev/null") == 2);

  // CSV output carries the same rows in tabular form.
  CHECK(run_binary("koszul --scenario " + fixture("koszul_degrees.json") +
                   " --format csv --out " + out + " 2>/dev/null") == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("name,residual,tolerance,direction,pass\n", 0) == 0);
  CHECK(csv.find("\"a s + s a = (p+q) id at (q,p)=(1,1)\"") !=
        std::string::npos);

  std::remove(out.c_str());
  std::remove(out2.c_str());
}
