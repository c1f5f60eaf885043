#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qev/experiments.hpp"

using namespace qev;
namespace fs = std::filesystem;

TEST_CASE("the catalog lists every experiment in a fixed order") {
  const auto& cat = experiment_catalog();
  std::vector<std::string> expected = {
      "gprob-born",      "uncertainty",      "kernel-consistency",
      "packet-spread",   "stationary-states", "ehrenfest",
      "propagator-compare", "least-action",  "kg-modes",
      "maxwell-modes",   "proca-modes",      "field-ccr",
      "fermi-oscillator", "dirac-modes"};
  REQUIRE(cat.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(cat[i].name == expected[i]);
    CHECK(!cat[i].summary.empty());
  }
}

TEST_CASE("a valid configuration merges defaults and keeps overrides") {
  ExperimentConfig cfg = parse_config_text(
      R"({"experiment":"gprob-born","parameters":{"seed":7,"triples":250}})");
  CHECK(cfg.experiment == "gprob-born");
  CHECK(cfg.integer("seed") == 7);
  CHECK(cfg.integer("triples") == 250);
  CHECK(cfg.integer("states") == 1000);
  CHECK(cfg.integer("pair_spaces") == 100);
  CHECK(cfg.output_dir == ".");
  CHECK(cfg.format == "csv");
}

TEST_CASE("top-level output settings are honored") {
  ExperimentConfig cfg = parse_config_text(
      R"({"experiment":"fermi-oscillator","format":"json","output_dir":"/tmp/x"})");
  CHECK(cfg.format == "json");
  CHECK(cfg.output_dir == "/tmp/x");
  CHECK(cfg.real("omega") == 1.5);
}

TEST_CASE("malformed JSON is reported with a line and column") {
  try {
    parse_config_text("{\"experiment\": \"gprob-born\",\n  \"parameters\": }");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("configuration is not valid JSON") != std::string::npos);
    CHECK(msg.find("line") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("schema violations carry exact diagnostics") {
  CHECK_THROWS_WITH(parse_config_text("[1,2]"),
                    "configuration root must be a JSON object");
  CHECK_THROWS_WITH(
      parse_config_text(R"({"experiment":"uncertainty","extra":1})"),
      "unknown top-level key 'extra'");
  CHECK_THROWS_WITH(parse_config_text(R"({"parameters":{}})"),
                    "missing required key 'experiment'");
  CHECK_THROWS_WITH(parse_config_text(R"({"experiment":7})"),
                    "key 'experiment' must be a string");
  CHECK_THROWS_WITH(parse_config_text(R"({"experiment":"warp-drive"})"),
                    "unknown experiment 'warp-drive'");
  CHECK_THROWS_WITH(
      parse_config_text(R"({"experiment":"uncertainty","parameters":3})"),
      "key 'parameters' must be an object");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"uncertainty","parameters":{"seed":1,"bogus":2}})"),
      "unknown parameter 'bogus' for experiment 'uncertainty'");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"gprob-born","parameters":{"seed":1,"triples":3.5}})"),
      "parameter 'triples' expects an integer");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"uncertainty","parameters":{"seed":1,"sigma_min":"wide"}})"),
      "parameter 'sigma_min' expects a real number");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"uncertainty","parameters":{"seed":1,"n":3}})"),
      "parameter 'n' must be at least 8");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"stationary-states","parameters":{"levels":99}})"),
      "parameter 'levels' must be at most 32");
  CHECK_THROWS_WITH(parse_config_text(R"({"experiment":"gprob-born"})"),
                    "missing required parameter 'seed' for experiment "
                    "'gprob-born'");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"uncertainty","parameters":{"seed":1},"output_dir":5})"),
      "key 'output_dir' must be a string");
  CHECK_THROWS_WITH(
      parse_config_text(
          R"({"experiment":"uncertainty","parameters":{"seed":1},"format":"xml"})"),
      "format must be \"csv\" or \"json\"");
}

TEST_CASE("an unreadable file path is reported by name") {
  CHECK_THROWS_WITH(parse_config_file("/nonexistent/nope.json"),
                    "cannot read configuration file '/nonexistent/nope.json'");
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {M_PI, 1.0 / 3.0, 1e300, -2.5e-17, 0.0, 0.1}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(1.5) == "1.5");
}

TEST_CASE("a run writes its tables and reports passing assertions") {
  fs::path dir = fs::temp_directory_path() / "qev_config_test_run";
  fs::remove_all(dir);

  ExperimentConfig cfg = parse_config_text(
      R"({"experiment":"fermi-oscillator"})");
  cfg.output_dir = dir.string();
  RunReport rep = run_experiment(cfg);

  CHECK(rep.experiment == "fermi-oscillator");
  CHECK(rep.all_passed());
  CHECK(rep.failed_metrics().empty());
  REQUIRE(!rep.parameter_echo.empty());
  CHECK(rep.parameter_echo[0].first == "omega");
  CHECK(rep.parameter_echo[0].second == "1.5");
  REQUIRE(!rep.files.empty());
  for (const auto& f : rep.files) {
    CHECK(fs::exists(f));
    std::ifstream in(f);
    std::string first_line;
    std::getline(in, first_line);
    CHECK(first_line.rfind("# ", 0) == 0);
  }

  cfg.format = "json";
  RunReport rep2 = run_experiment(cfg);
  REQUIRE(!rep2.files.empty());
  for (const auto& f : rep2.files) {
    CHECK(f.size() > 5);
    CHECK(f.substr(f.size() - 5) == ".json");
    CHECK(fs::exists(f));
  }

  fs::remove_all(dir);
}
