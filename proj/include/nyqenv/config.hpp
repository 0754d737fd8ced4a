#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nyqenv/grid_potential.hpp"
#include "nyqenv/operator.hpp"

namespace nyqenv {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat format) noexcept;
OutputFormat parse_format(std::string_view name);

struct GridConfig {
  double x_min = -16.0;
  double L = 32.0;
  double h = 0.1;
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct PotentialConfig {
  std::string kind = "sech";   // "sech" or "tabulated"
  double A = 3.0;
  double w = 0.5;
  std::vector<double> values;  // tabulated samples on the configured grid
  friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  std::string path;
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

/// Everything needed to rerun an experiment. Defaults reproduce the reference
/// setup: V = 3 sech(0.5 x) on [-16, 16) with h = 0.1, top four modes.
struct ExperimentConfig {
  GridConfig grid;
  PotentialConfig potential;
  Scheme scheme = Scheme::CentralDifference;
  int k = 4;
  int refine = 8;
  OutputConfig output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json to_json(const ExperimentConfig& config);

// Missing fields keep their defaults; unknown fields are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Sets one field from its dotted path ("grid.h", "potential.A", "k", ...).
void apply_override(ExperimentConfig& config, std::string_view path, std::string_view value);

// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& config);

Grid build_grid(const ExperimentConfig& config);
Potential build_potential(const ExperimentConfig& config);

}  // namespace nyqenv
