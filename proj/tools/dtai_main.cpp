#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtai/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Design target achievement scoring and optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string report_path;
  std::string data_path;
  std::string generated_path;
  std::size_t threads = 0;
  std::vector<std::string> overrides;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "JSON run configuration")->required();
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_option("--set", overrides,
                    "dotted config override, e.g. --set generator.kind=interpolation");
    cmd->add_option("--threads", threads,
                    "worker threads for Monte Carlo hypervolume (0 = serial)");
  };

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Generate a candidate set and score it against the dataset");
  add_run_options(evaluate);
  evaluate->add_option("data", data_path,
                       "dataset CSV (overrides the config's data.path)");
  evaluate->add_option("generated", generated_path,
                       "pre-generated candidate CSV (overrides the generator)");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Run gradient ascent on a benchmark and score the result");
  add_run_options(optimize);

  CLI::App* report =
      app.add_subcommand("report", "Print the metric table of a saved report.json");
  report->add_option("report", report_path, "path to report.json")->required();

  CLI::App* demo = app.add_subcommand(
      "demo", "Write the bundled synthetic study (designs.csv + config.json)");
  demo->add_option("--out", out_dir, "output directory (default: out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dtai::exit_ok : dtai::exit_config;
  }

  if (evaluate->parsed())
    return dtai::cmd_evaluate(config_path, overrides, out_dir, threads, std::cout,
                              std::cerr, data_path, generated_path);
  if (optimize->parsed())
    return dtai::cmd_optimize(config_path, overrides, out_dir, threads, std::cout,
                              std::cerr);
  if (report->parsed()) return dtai::cmd_report(report_path, std::cout, std::cerr);
  if (demo->parsed()) return dtai::cmd_demo(out_dir, std::cout, std::cerr);
  return dtai::exit_config;
}
