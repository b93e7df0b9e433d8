// End-to-end checks of the lindred binary: exit-code contract, report
// structure, determinism, CSV output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lindred/model_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = LINDRED_CLI_PATH;

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lindred_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& tag) {
  const fs::path out = work_dir() / (tag + ".out");
  const fs::path err = work_dir() / (tag + ".err");
  const std::string cmd =
      "LINDRED_LOG=quiet " + kCli + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string emit_model(const std::string& name, const std::string& extra = "") {
  const fs::path path = work_dir() / (name + ".json");
  REQUIRE(run("zoo --emit " + name + " " + path.string() + extra, "emit_" + name) == 0);
  return path.string();
}

json load_json(const fs::path& path) { return json::parse(slurp(path)); }

} // namespace

TEST_CASE("zoo --list names all five models") {
  REQUIRE(run("zoo --list", "list") == 0);
  const std::string out = slurp(work_dir() / "list.out");
  for (const char* name : {"damped_qubit", "dephased_qubit", "lambda_system",
                           "purcell_two_qubit", "two_photon_loss"})
    CHECK(out.find(name) != std::string::npos);
}

TEST_CASE("zoo --emit output round-trips through the parser and reduce") {
  const std::string model = emit_model("purcell_two_qubit");
  CHECK_NOTHROW(lindred::load_model_file(model));

  const fs::path report = work_dir() / "purcell_report.json";
  REQUIRE(run("reduce " + model + " --order 2 --out " + report.string(), "reduce_purcell") == 0);

  const json j = load_json(report);
  CHECK(j.at("status") == "ok");
  CHECK(j.at("split").at("dbar") == 4);
  CHECK(j.at("expansion").at("F").size() == 2);
  for (double r : j.at("expansion").at("slow_residuals").get<std::vector<double>>())
    CHECK(r < 1e-9);
  // Excitation exchange has no first-order term.
  for (const auto& row : j.at("expansion").at("F").at(0))
    for (const auto& v : row) CHECK(std::abs(v.get<double>()) < 1e-12);
}

TEST_CASE("reduce on the damped qubit reports a trivial slow generator") {
  const std::string model = emit_model("damped_qubit");
  const fs::path report = work_dir() / "damped_report.json";
  REQUIRE(run("reduce " + model + " --order 3 --out " + report.string(), "reduce_damped") == 0);
  const json j = load_json(report);
  CHECK(j.at("split").at("dbar") == 1);
  for (const auto& fn : j.at("expansion").at("F"))
    for (const auto& row : fn)
      for (const auto& v : row) CHECK(std::abs(v.get<double>()) <= 1e-12);
}

TEST_CASE("exit code 1: malformed input") {
  const fs::path bad = work_dir() / "bad.json";
  std::ofstream(bad) << "{ this is not json";
  CHECK(run("reduce " + bad.string(), "bad_json") == 1);
  const std::string err = slurp(work_dir() / "bad_json.err");
  CHECK(err.find("line") != std::string::npos);

  CHECK(run("reduce " + (work_dir() / "missing.json").string(), "missing") == 1);
}

TEST_CASE("exit code 2: hypothesis violated") {
  // L0 = 0 has no spectral gap.
  const fs::path degenerate = work_dir() / "no_gap.json";
  std::ofstream(degenerate) << R"({
    "dim": 2,
    "fast": {},
    "slow": {"hamiltonian": [[[0,0],[1,0]],[[1,0],[0,0]]]},
    "epsilon": 0.05
  })";
  CHECK(run("reduce " + degenerate.string(), "no_gap") == 2);
  const std::string err = slurp(work_dir() / "no_gap.err");
  CHECK(err.find("no spectral gap") != std::string::npos);
}

TEST_CASE("exit code 3: recursion inconsistency") {
  // An impossible residual tolerance trips the order-1 consistency check.
  const std::string model = emit_model("purcell_two_qubit");
  json j = json::parse(slurp(model));
  j["tolerances"] = {{"recursion_residual", 1e-30}};
  const fs::path strict = work_dir() / "strict.json";
  std::ofstream(strict) << j.dump(2);
  CHECK(run("reduce " + strict.string(), "strict") == 3);
}

TEST_CASE("reports are deterministic modulo the timestamp") {
  const std::string model = emit_model("lambda_system");
  const fs::path a = work_dir() / "det_a.json";
  const fs::path b = work_dir() / "det_b.json";
  REQUIRE(run("reduce " + model + " --out " + a.string(), "det_a") == 0);
  REQUIRE(run("reduce " + model + " --out " + b.string(), "det_b") == 0);
  json ja = load_json(a);
  json jb = load_json(b);
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("validate records the closeness checks") {
  const std::string model = emit_model("dephased_qubit");
  const fs::path report = work_dir() / "validate_dephased.json";
  REQUIRE(run("validate " + model + " --order 2 --tbar 1.0 --out " + report.string(),
              "validate_dephased") == 0);
  const json j = load_json(report);
  CHECK(j.at("validation").at("exponential_closeness").size() == 1);
  CHECK(j.at("validation").at("exponential_closeness").at(0).at("passed") == true);
  CHECK(j.at("validation").at("second_order").at("passed") == true);
  CHECK(j.at("status") == "ok");
}

TEST_CASE("validate uses a model epsilon list as the second-order sweep") {
  const std::string model = emit_model("purcell_two_qubit");
  json j = json::parse(slurp(model));
  j["epsilon"] = {0.02, 0.04, 0.08, 0.16};
  const fs::path swept = work_dir() / "purcell_epslist.json";
  std::ofstream(swept) << j.dump(2);

  const fs::path report = work_dir() / "validate_epslist.json";
  REQUIRE(run("validate " + swept.string() + " --out " + report.string(),
              "validate_epslist") == 0);
  const json r = load_json(report);
  CHECK(r.at("validation").at("exponential_closeness").size() == 4); // one record per epsilon
  const json& fit = r.at("validation").at("second_order").at("state_fit");
  CHECK(fit.at("slope").get<double>() >= 1.7);
  CHECK(fit.at("slope").get<double>() <= 2.3);
  CHECK(r.at("validation").at("second_order").at("passed") == true);
}

TEST_CASE("validate with a single-point grid records a warning") {
  const std::string model = emit_model("damped_qubit");
  const fs::path report = work_dir() / "validate_single.json";
  REQUIRE(run("validate " + model + " --tgrid 5:5:1 --out " + report.string(),
              "validate_single") == 0);
  const json j = load_json(report);
  CHECK(j.at("validation").at("exponential_closeness").at(0).contains("warning"));
}

TEST_CASE("sweep: usage errors and CSV contract") {
  const std::string model = emit_model("purcell_two_qubit", " --param g=0.5");

  SUBCASE("missing epsilon list is a usage error") {
    CHECK(run("sweep " + model + " --orders 1,2 --csv " + (work_dir() / "x.csv").string(),
              "sweep_noeps") == 1);
  }

  SUBCASE("rows are epsilon-major and round-trip exactly") {
    const fs::path csv = work_dir() / "purcell_sweep.csv";
    REQUIRE(run("sweep " + model + " --epsilons 0.02,0.04 --orders 1,2 --csv " + csv.string(),
                "sweep_ok") == 0);
    const std::string text = slurp(csv);
    const auto rows = lindred::parse_sweep_csv(text);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].epsilon == 0.02);
    CHECK(rows[0].order == 1);
    CHECK(rows[1].epsilon == 0.02);
    CHECK(rows[1].order == 2);
    CHECK(rows[2].epsilon == 0.04);

    // Higher truncation order does not increase the error at fixed epsilon.
    CHECK(rows[1].slow_coord_error <= rows[0].slow_coord_error * 1.001);
    CHECK(rows[3].slow_coord_error <= rows[2].slow_coord_error * 1.001);

    // Re-serializing the parsed rows reproduces the file bit for bit.
    std::string again = lindred::sweep_csv_header() + "\n";
    for (const auto& row : rows) again += lindred::sweep_row_to_csv(row) + "\n";
    CHECK(again == text);
  }
}

TEST_CASE("zoo rejects unknown emit targets") {
  CHECK(run("zoo --emit not_a_model " + (work_dir() / "x.json").string(), "zoo_bad") == 1);
  CHECK(run("zoo", "zoo_noargs") == 1);
}
