#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qev/experiments.hpp"

namespace {

int do_list() {
  for (const auto& spec : qev::experiment_catalog())
    std::printf("%-20s %s\n", spec.name.c_str(), spec.summary.c_str());
  return 0;
}

int do_validate(const std::string& path) {
  try {
    qev::parse_config_file(path);
  } catch (const qev::ConfigError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  }
  std::cout << "ok\n";
  return 0;
}

int do_run(const std::string& path, const std::string& out_dir,
           const std::string& format) {
  qev::ExperimentConfig cfg;
  try {
    cfg = qev::parse_config_file(path);
  } catch (const qev::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (!format.empty()) cfg.format = format;

  qev::RunReport rep;
  try {
    rep = qev::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::printf("experiment: %s\n", rep.experiment.c_str());
  std::printf("parameters:\n");
  for (const auto& [name, value] : rep.parameter_echo)
    std::printf("  %s = %s\n", name.c_str(), value.c_str());
  std::printf("assertions:\n");
  for (const auto& a : rep.assertions)
    std::printf("  [%s] %s: %s %s %s\n", a.pass ? "PASS" : "FAIL",
                a.metric.c_str(), qev::format_double(a.value).c_str(),
                a.relation.c_str(), qev::format_double(a.threshold).c_str());
  std::printf("files:\n");
  for (const auto& f : rep.files) std::printf("  %s\n", f.c_str());
  std::printf("wall time: %.3f s\n", rep.wall_seconds);

  if (!rep.all_passed()) {
    std::string names;
    for (const auto& m : rep.failed_metrics()) {
      if (!names.empty()) names += ", ";
      names += m;
    }
    std::printf("failed metrics: %s\n", names.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch driver for the discrete-interaction dynamics experiments"};
  app.require_subcommand(1);

  std::string run_config, run_out, run_format;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", run_config, "path to the JSON configuration")
      ->required();
  run->add_option("--out", run_out, "directory for the output tables");
  run->add_option("--format", run_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string val_config;
  CLI::App* val =
      app.add_subcommand("validate", "schema-check a config without running");
  val->add_option("--config", val_config, "path to the JSON configuration")
      ->required();

  CLI::App* list = app.add_subcommand("list", "list the available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) return do_list();
  if (val->parsed()) return do_validate(val_config);
  return do_run(run_config, run_out, run_format);
}
