// nyqenv: command-line front end for the Nyquist-envelope experiments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nyqenv/config.hpp"
#include "nyqenv/error.hpp"
#include "nyqenv/experiments.hpp"
#include "nyqenv/report_io.hpp"

namespace fs = std::filesystem;
using namespace nyqenv;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  int workers = 0;
  std::string figure;
  std::string parameter;
  std::vector<double> values;
  int rank = 0;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  const auto field = [&](const std::string& flag, const std::string& path, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&opts, path](const std::string& v) { opts.overrides.emplace_back(path, v); }, help);
  };
  field("--out", "output.path", "output file (directory for reproduce)");
  field("--format", "output.format", "csv or json");
  field("--scheme", "scheme", "cd or numerov");
  field("--k", "k", "number of top modes");
  field("--refine", "refine", "oracle grid refinement factor");
  field("--grid.x_min", "grid.x_min", "left end of the periodic window");
  field("--grid.L", "grid.L", "window length");
  field("--grid.h", "grid.h", "grid step");
  field("--potential.kind", "potential.kind", "sech or tabulated");
  field("--potential.A", "potential.A", "sech amplitude");
  field("--potential.w", "potential.w", "sech width parameter");
  field("--output.format", "output.format", "csv or json");
  field("--output.path", "output.path", "output file");
  sub->add_option("--workers", opts.workers, "sweep worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

ExperimentConfig resolve_config(const Options& opts) {
  ExperimentConfig config = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  for (const auto& [path, value] : opts.overrides) apply_override(config, path, value);
  validate(config);
  return config;
}

// Explicit path, else NYQENV_OUTPUT_DIR/<name>, else nothing.
std::optional<fs::path> output_path(const ExperimentConfig& config, const std::string& name) {
  if (!config.output.path.empty()) return fs::path(config.output.path);
  if (const char* dir = std::getenv("NYQENV_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / name;
  return std::nullopt;
}

std::string extension(const ExperimentConfig& config) {
  return config.output.format == OutputFormat::Json ? ".json" : ".csv";
}

void report_files(const std::vector<fs::path>& files) {
  for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
}

int run(const std::string& command, const Options& opts) {
  const ExperimentConfig config = resolve_config(opts);

  if (command == "spectrum") {
    const auto report = run_spectrum(config);
    print_spectrum(std::cout, report);
    if (auto path = output_path(config, "spectrum" + extension(config))) {
      report_files(write_report(report, config.output.format, *path));
    }
  } else if (command == "reproduce") {
    const auto report = run_reproduce(parse_figure(opts.figure), config);
    print_figure(std::cout, report);
    const auto dir = output_path(config, "").value_or(fs::path("."));
    report_files(write_report(report, config.output.format, dir));
  } else if (command == "predict") {
    const auto report = run_predict(config);
    print_predict(std::cout, report);
    if (auto path = output_path(config, "predict" + extension(config))) {
      report_files(write_report(report, config.output.format, *path));
    }
  } else if (command == "sweep") {
    const auto report = run_sweep(config, parse_sweep_parameter(opts.parameter), opts.values, opts.workers);
    print_sweep(std::cout, report);
    if (auto path = output_path(config, "sweep" + extension(config))) {
      report_files(write_report(report, config.output.format, *path));
    }
  } else if (command == "wkb") {
    const auto report = run_wkb(config, opts.rank);
    print_wkb(std::cout, report);
    if (auto path = output_path(config, "wkb.json")) report_files(write_report(report, *path));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nyquist-envelope artifact experiments for periodic finite-difference Schroedinger operators"};
  app.set_version_flag("--version", code_version());
  app.require_subcommand(1);

  Options opts;
  auto* spectrum = app.add_subcommand("spectrum", "top-k eigenvalues with localization flags");
  auto* reproduce = app.add_subcommand("reproduce", "figure datasets (fig1, fig2)");
  auto* predict = app.add_subcommand("predict", "envelope-equation bound states against the FD modes");
  auto* sweep = app.add_subcommand("sweep", "localized-mode counts over a parameter sweep");
  auto* wkb = app.add_subcommand("wkb", "amplitude of a resolved mode against the WKB prefactor");
  for (auto* sub : {spectrum, reproduce, predict, sweep, wkb}) add_common(sub, opts);

  reproduce->add_option("figure", opts.figure, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  sweep->add_option("--param", opts.parameter, "A, w or h")->required()->check(CLI::IsMember({"A", "w", "h"}));
  sweep->add_option("--values", opts.values, "comma-separated values")->required()->delimiter(',');
  wkb->add_option("--rank", opts.rank, "mode rank (default: first resolved)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
