#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qev {

// Schema-level description of one experiment parameter. Integer parameters
// reject fractional or quoted values; real parameters accept any JSON number;
// text parameters require a JSON string. Bounds are inclusive.
enum class ParamKind { integer, real, text };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::real;
  std::string doc;
  bool required = false;
  long long def_int = 0;
  double def_real = 0.0;
  std::string def_text;
  bool has_min = false;
  double min_value = 0.0;
  bool has_max = false;
  double max_value = 0.0;
};

struct ExperimentSpec {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

// Catalog of every runnable experiment, in listing order.
const std::vector<ExperimentSpec>& experiment_catalog();

// Raised for any configuration problem: unreadable file, malformed JSON
// (message carries line and column), unknown keys, missing required
// parameters, type mismatches, or out-of-range values.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fully validated configuration with defaults merged in. Values live in
// per-kind maps keyed by parameter name.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, long long> ints;
  std::map<std::string, double> reals;
  std::map<std::string, std::string> texts;
  std::string output_dir = ".";
  std::string format = "csv";

  long long integer(const std::string& name) const;
  double real(const std::string& name) const;
  const std::string& text(const std::string& name) const;
};

// Parses and schema-checks a configuration without running any numerics.
// Throws ConfigError on any violation.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// One pass/fail check made by an experiment. relation is "<=" or ">=";
// pass means (value relation threshold) holds.
struct Assertion {
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";
  bool pass = false;
};

// One output table. Cells are pre-rendered strings so that numeric columns
// are written with a fixed %.17g format independent of locale or platform
// defaults.
struct DataTable {
  std::string metric;  // file stem suffix: <experiment>-<metric>.<ext>
  std::string description;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> parameter_echo;
  std::vector<std::string> files;
  std::vector<Assertion> assertions;
  double wall_seconds = 0.0;

  bool all_passed() const;
  std::vector<std::string> failed_metrics() const;
};

// Renders a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Runs the experiment named by the configuration, writes its output tables
// under cfg.output_dir in the configured format, and returns the report.
// Files are written only after all computation has finished.
RunReport run_experiment(const ExperimentConfig& cfg);

}  // namespace qev
