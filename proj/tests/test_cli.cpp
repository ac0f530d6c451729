#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "stocheck/cli.hpp"

using namespace stocheck;
using nlohmann::json;

namespace {

json parse_report(const CliResult& res) {
  REQUIRE(res.exit_code == 0);
  return json::parse(res.report);
}

std::string fx(const char* name) { return testutil::fixture(name); }

}  // namespace

TEST_CASE("gramian subcommand") {
  const CliResult res = run_cli(
      {"gramian", fx("harmonic_outputs.json"), "--kind", "observability", "--k", "2", "--l", "4"});
  const json j = parse_report(res);
  CHECK(j["results"]["matrix"][0][0].get<double>() ==
        doctest::Approx(1.0 / 4 + 1.0 / 9 + 1.0 / 16).epsilon(1e-14));
  CHECK(j["schema"] == "stocheck-report-v1");
  CHECK(j["input_digest"].get<std::string>().substr(0, 8) == "fnv1a64:");
}

TEST_CASE("gramian transition at l = k is the identity") {
  const CliResult res = run_cli(
      {"gramian", fx("alternating_outputs.json"), "--kind", "transition", "--k", "3", "--l", "3"});
  const json j = parse_report(res);
  CHECK(j["results"]["matrix"][0][0].get<double>() == 1.0);
}

TEST_CASE("exit codes follow the contract") {
  SUBCASE("window too large is a domain error") {
    const CliResult res = run_cli(
        {"gramian", fx("alternating_outputs.json"), "--kind", "stacked", "--k", "0", "--l", "20"});
    CHECK(res.exit_code == 3);
  }
  SUBCASE("index beyond a finite schedule is a domain error") {
    const CliResult res = run_cli({"gramian", fx("harmonic_outputs.json"), "--kind",
                                   "observability", "--k", "795", "--l", "805"});
    CHECK(res.exit_code == 3);
  }
  SUBCASE("unknown notion is an input error") {
    const CliResult res =
        run_cli({"detect", fx("alternating_outputs.json"), "--notion", "telepathy"});
    CHECK(res.exit_code == 2);
  }
  SUBCASE("missing file is an input error") {
    const CliResult res = run_cli(
        {"gramian", "/nonexistent.json", "--kind", "transition", "--k", "0", "--l", "1"});
    CHECK(res.exit_code == 2);
  }
  SUBCASE("numerical failure surfaces as exit 4") {
    const CliResult res = run_cli({"gle", fx("alternating_outputs.json"), "--mode", "limit",
                                   "--k-from", "0", "--k-to", "1", "--T-max", "64"});
    CHECK(res.exit_code == 4);  // F = 1: the cost sum diverges
  }
  SUBCASE("spectral method on a periodic file is a domain error") {
    const CliResult res =
        run_cli({"stability", fx("alternating_outputs.json"), "--method", "spectral"});
    CHECK(res.exit_code == 3);
  }
}

TEST_CASE("reports are deterministic apart from wall time") {
  const std::vector<std::string> args{"detect",     fx("noise_dominated_periodic.json"),
                                      "--notion",   "kN",
                                      "--N",        "3",
                                      "--mode",     "periodic",
                                      "--k-from",   "0",
                                      "--k-to",     "5"};
  json a = parse_report(run_cli(args));
  json b = parse_report(run_cli(args));
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("detect subcommand wraps the fixture verdicts") {
  SUBCASE("kN-obs on the alternating fixture") {
    const json j = parse_report(run_cli({"detect", fx("alternating_outputs.json"), "--notion",
                                         "kN-obs", "--N", "1", "--k-from", "0", "--k-to",
                                         "50"}));
    CHECK(j["results"]["verdict"]["holds"] == "yes");
  }
  SUBCASE("grid search reports a witness on the harmonic fixture") {
    const json j = parse_report(run_cli({"detect", fx("harmonic_outputs.json"), "--notion",
                                         "uniform", "--grid", "--k-from", "1", "--k-to",
                                         "700"}));
    CHECK(j["results"]["found"] == false);
    CHECK(j["results"]["verdict"]["holds"] == "no");
    CHECK(!j["results"]["verdict"]["witnesses"].empty());
  }
}

TEST_CASE("gle and verify subcommands") {
  SUBCASE("limit solver on the contractive fixture") {
    const json j = parse_report(run_cli({"gle", fx("contractive_ti.json"), "--mode",
                                         "limit", "--k-from", "0", "--k-to", "0"}));
    CHECK(j["results"]["solution"]["P"][0][0][0].get<double>() == doctest::Approx(2.0));
    CHECK(j["results"]["solution"]["residuals"][0].get<double>() <= 1e-10);
  }
  SUBCASE("spectral certificate on the noise-unstable scalar") {
    const std::string text =
        R"({"n":1,"m":1,"p":0,"tail":{"kind":"constant"},"entries":[{"F":[[0]],"G":[[3]],"H":[[1]]}]})";
    const std::string path = "/tmp/stocheck_test_unstable.json";
    {
      std::ofstream out(path);
      out << text;
    }
    const json j = parse_report(run_cli({"stability", path, "--method", "spectral"}));
    CHECK(j["results"]["certificate"]["verdict"] == "NotESMS");
    CHECK(j["results"]["certificate"]["evidence"]["rho"].get<double>() ==
          doctest::Approx(9.0));
  }
  SUBCASE("verify T5.3.1 on a periodic contraction") {
    const std::string text =
        R"({"n":1,"m":1,"p":0,"tail":{"kind":"periodic","period":1},"entries":[{"F":[[0.5]],"G":[[0.5]],"H":[[1]]}]})";
    const std::string path = "/tmp/stocheck_test_periodic.json";
    {
      std::ofstream out(path);
      out << text;
    }
    const json j = parse_report(
        run_cli({"verify", path, "--theorem", "T5.3.1", "--N", "0"}));
    CHECK(j["results"]["verdict"]["conclusion"] == "ESMS");
    for (const auto& hyp : j["results"]["verdict"]["hypotheses"])
      CHECK(hyp["passed"] == true);
  }
}

TEST_CASE("simulate emits CSV traces") {
  const std::string csv_path = "/tmp/stocheck_test_trace.csv";
  const CliResult res =
      run_cli({"stability", fx("contractive_ti.json"), "--method", "simulate",
               "--paths", "500", "--horizon", "10", "--seed", "3", "--csv", csv_path});
  CHECK(res.exit_code == 0);
  std::ifstream in(csv_path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,mean_sq_state,stderr_state,mean_sq_output,stderr_output");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("help exits cleanly") {
  const CliResult res = run_cli({"--help"});
  CHECK(res.exit_code == 0);
  CHECK(res.message.find("stocheck") != std::string::npos);
}

TEST_CASE("reports satisfy the published schema") {
  std::ifstream schema_in(std::string(STOCHECK_SCHEMA_DIR) + "/report-schema.json");
  REQUIRE(schema_in.good());
  const json schema = json::parse(schema_in);

  const json report = parse_report(run_cli(
      {"gramian", fx("alternating_outputs.json"), "--kind", "transition", "--k", "0", "--l", "2"}));

  for (const auto& key : schema["required"]) {
    CAPTURE(key.get<std::string>());
    CHECK(report.contains(key.get<std::string>()));
  }
  // No stray top-level fields beyond the schema.
  for (const auto& [key, value] : report.items())
    CHECK(schema["properties"].contains(key));
  CHECK(report["schema"] == "stocheck-report-v1");
  CHECK(report["command"].is_array());
  CHECK(report["results"].is_object());
  CHECK(report["results"].contains("analysis"));
  CHECK(report["wall_time_seconds"].is_number());
  const std::string digest = report["input_digest"].get<std::string>();
  CHECK(digest.rfind("fnv1a64:", 0) == 0);
  CHECK(digest.size() == 8 + 16);
}
