// Drives the built binary end to end: report shape, exit codes, and the
// round-trip of the attack command's emitted function spec.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ebound/io.hpp"
#include "ebound/perturb.hpp"

using namespace ebound;
using Catch::Approx;

namespace {

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_test_stdout.json";
  const std::string cmd =
      std::string(EBOUND_BIN_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  int code = -1;
#ifdef WEXITSTATUS
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
#else
  code = status;
#endif
  return {code, ss.str()};
}

std::string instance(const std::string& name) {
  return std::string(EBOUND_INSTANCE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("analyze reports the expected moduli") {
  RunResult r = run_cli("analyze " + instance("e13.json") + " --at 1");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["status"] == "ok");
  CHECK(j["slopes"]["er_local"].get<double>() == Approx(2.0).margin(1e-9));
  CHECK(j["slopes"]["boundary_local"].get<double>() ==
        Approx(1.0).margin(1e-9));
  CHECK(j["slopes"]["er_global"].get<double>() == Approx(2.0).margin(1e-9));
  CHECK(j["slopes"]["boundary_global"].get<double>() ==
        Approx(1.0).margin(1e-9));
}

TEST_CASE("analyze renders infinities as inf tokens") {
  RunResult r = run_cli("analyze " + instance("zero.json") + " --at 0");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["slopes"]["er_local"] == Json("inf"));
  CHECK(j["slopes"]["boundary_local"].get<double>() ==
        Approx(0.0).margin(1e-12));
}

TEST_CASE("builtin fixtures are addressable") {
  RunResult r = run_cli("analyze @max0x --at 0");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["slopes"]["er_local"].get<double>() == Approx(1.0).margin(1e-9));
}

TEST_CASE("exit codes") {
  // domain error: f does not vanish at the requested point
  CHECK(run_cli("analyze " + instance("e13.json") + " --at 1.5").exit_code ==
        3);
  // parse error: missing file
  CHECK(run_cli("analyze no_such_file.json").exit_code == 2);
  // parse error: malformed point
  CHECK(run_cli("analyze " + instance("e13.json") + " --at x").exit_code == 2);
  // usage error: unknown subcommand
  CHECK(run_cli("frobnicate").exit_code == 2);
  // ok
  CHECK(run_cli("radius " + instance("e13.json")).exit_code == 0);

  // computational error: a subdifferential with more generators than the
  // facet enumeration cap
  Json big;
  big["dim"] = 2;
  big["pieces"] = Json::array();
  for (int i = 0; i < 18; ++i) {
    const double t = 2.0 * 3.14159265358979 * i / 18.0;
    big["pieces"].push_back(
        {{"a", Vec{std::cos(t), std::sin(t)}}, {"b", 0.0}});
  }
  std::ofstream("cli_test_big.json") << big.dump();
  RunResult r = run_cli("attack cli_test_big.json --at 0,0 --eps 99");
  CHECK(r.exit_code == 4);
  CHECK(Json::parse(r.stdout_text)["status"] == "computational_error");
}

TEST_CASE("radius lists each zero-level representative") {
  RunResult r = run_cli("radius " + instance("e13.json"));
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  REQUIRE(j["local"].size() == 2);
  double r_at_1 = -1.0, r_at_25 = -1.0;
  for (const Json& entry : j["local"]) {
    const double anchor = entry["anchor"][0].get<double>();
    if (std::fabs(anchor - 1.0) < 1e-6) r_at_1 = entry["radius"].get<double>();
    if (std::fabs(anchor - 2.5) < 1e-6) r_at_25 = entry["radius"].get<double>();
  }
  CHECK(r_at_1 == Approx(1.0).margin(1e-9));
  CHECK(r_at_25 == Approx(2.0).margin(1e-9));
  CHECK(j["global"]["weak_family_radius_at_most"].get<double>() ==
        Approx(1.0).margin(1e-9));
  CHECK(j["global"]["strong_family_radius_at_least"].get<double>() ==
        Approx(1.0).margin(1e-9));
}

TEST_CASE("attack emits a reparsable destabilized function") {
  RunResult r = run_cli("attack " + instance("e13.json") +
                        " --at 1 --eps 1.2 --xi 0.1");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["er_g_at_anchor"].get<double>() == Approx(0.1).margin(1e-9));
  CHECK(j["perturbation"]["slope"][0].get<double>() ==
        Approx(1.1).margin(1e-9));

  // round-trip: the emitted spec parses back to the same coefficients
  FunctionSpec g = parse_function_spec(j["g"]);
  PolyhedralFunction f =
      load_function_spec(instance("e13.json")).f;
  PolyhedralFunction expected =
      apply_perturbation(f, LinearPerturbation{{1.0}, {j["perturbation"]["slope"][0].get<double>()}});
  REQUIRE(g.f.piece_count() == expected.piece_count());
  for (int i = 0; i < g.f.piece_count(); ++i) {
    CHECK(g.f.pieces()[i].gradient == expected.pieces()[i].gradient);
    CHECK(g.f.pieces()[i].offset == expected.pieces()[i].offset);
  }
}

TEST_CASE("attack below the radius is a domain error") {
  RunResult r = run_cli("attack " + instance("e13.json") +
                        " --at 1 --eps 0.8 --xi 0.05");
  CHECK(r.exit_code == 3);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["status"] == "domain_error");
}

TEST_CASE("tau command") {
  RunResult r =
      run_cli("tau " + instance("e13.json") + " --at 1 --eps 0.3 --delta 0.5");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["value"].get<double>() == Approx(1.0).margin(1e-9));
  CHECK(j["branch"] == 1);

  RunResult r2 =
      run_cli("tau " + instance("e13.json") + " --at 1 --eps 0.5 --delta 0.6");
  CHECK(Json::parse(r2.stdout_text)["value"].get<double>() ==
        Approx(0.0).margin(1e-12));
}

TEST_CASE("member command") {
  RunResult r = run_cli("member " + instance("max_x_neg1.json") +
                        " --constant 0.5 --family strong --eps 0.3");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["member"] == "yes");
  CHECK(j["witness"]["anchor"][0].get<double>() == Approx(0.0).margin(1e-7));
  CHECK(j["witness"]["xi"].get<double>() == Approx(0.0).margin(1e-12));
  CHECK(j["witness"]["tau"].get<double>() == Approx(1.0).margin(1e-9));

  RunResult r2 = run_cli("member " + instance("max_x_neg1.json") +
                         " --slope 0.5 --family strong --eps 0.9");
  CHECK(Json::parse(r2.stdout_text)["member"] == "no");

  RunResult r3 = run_cli("member " + instance("max_x_neg1.json") +
                         " --slope 0.5 --family weak-linear --eps 0.5");
  CHECK(Json::parse(r3.stdout_text)["member"] == "yes");

  RunResult r4 = run_cli("member " + instance("e13.json") +
                         " --slope 0.5 --anchor 1 --at 1 "
                         "--family local-linear --eps 0.6");
  CHECK(Json::parse(r4.stdout_text)["member"] == "yes");
}

TEST_CASE("verify corpus reproduces the expected values") {
  RunResult r = run_cli("verify --corpus --samples 20000 --seed 5");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["all_pass"] == true);
  CHECK(j["failed"] == 0);
  CHECK(j["checks"].size() > 30);
}
