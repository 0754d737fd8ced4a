#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nyqenv/config.hpp"
#include "nyqenv/envelope_oracle.hpp"
#include "nyqenv/wkb.hpp"

namespace nyqenv {

// Shared by every report.
struct RunMetadata {
  ExperimentConfig config;
  double solver_residual_max = 0.0;
  double gershgorin_lower = 0.0;
  double gershgorin_upper = 0.0;
};

struct SpectrumRow {
  int rank = 0;
  double lambda = 0.0;
  double delta_lambda = 0.0;
  bool localized = false;
  double tail_mass = 0.0;
  double residual = 0.0;
};

struct SpectrumReport {
  RunMetadata metadata;
  std::vector<SpectrumRow> rows;
};

SpectrumReport run_spectrum(const ExperimentConfig& config);

enum class Figure { Fig1, Fig2 };
Figure parse_figure(std::string_view name);
std::string_view to_string(Figure figure) noexcept;

struct FigureMode {
  std::string name;    // e.g. "repulsive_rank4"
  std::string panel;   // panel label within the figure
  double amplitude = 0.0;
  int rank = 0;
  double lambda = 0.0;
  double delta_lambda = 0.0;
  bool localized = false;
  double tail_mass = 0.0;
  std::vector<double> x;
  std::vector<double> envelope_abs;
  std::vector<double> envelope_signed;
  std::vector<double> V_normalized;  // V / max|V|, zero for V == 0
};

// Raw eigenvector on a window around x = 0.
struct CarrierWindow {
  double x_lo = -2.0;
  double x_hi = 2.0;
  int rank = 1;
  std::vector<double> x;
  std::vector<double> psi;
};

struct FigureDataset {
  Figure figure = Figure::Fig1;
  RunMetadata metadata;
  std::vector<FigureMode> modes;
  std::optional<CarrierWindow> carrier;
  // Largest eigenvalue per potential sign, for the attractive-case check.
  double lambda_max_repulsive = 0.0;
  double lambda_max_attractive = 0.0;
};

/**
 * fig1: ranks 1 and 4 for +|A| and the carrier window of rank 1.
 * fig2: rank 5 for +|A|, ranks 1, 4 and 5 for -|A|.
 * The sign of A in the config is ignored; w and the grid are taken as given.
 */
FigureDataset run_reproduce(Figure figure, const ExperimentConfig& config);

struct PredictRow {
  int rank = 0;
  double delta_lambda_pred = 0.0;
  int node_count = 0;
  double tail_mass = 0.0;
  bool localized = false;
  EnvelopeMatch match;  // against the FD mode of the same rank
};

struct PredictReport {
  RunMetadata metadata;
  std::vector<PredictRow> rows;  // localized bound states only
  int bound_state_count = 0;     // every state below the cutoff
  int localized_count = 0;
  int fd_localized_count = 0;
};

PredictReport run_predict(const ExperimentConfig& config);

enum class SweepParameter { A, w, h };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter parameter) noexcept;

struct SweepRow {
  double value = 0.0;
  int fd_localized = 0;
  int oracle_bound = 0;
  int oracle_localized = 0;
  double lambda_1 = 0.0;
  double delta_lambda_1 = 0.0;
  double gap_rank1 = 0.0;  // NaN when the oracle has no bound state
  double solver_residual_max = 0.0;
};

struct SweepReport {
  RunMetadata metadata;  // base config
  SweepParameter parameter = SweepParameter::A;
  std::vector<SweepRow> rows;  // input order
  // Non-decreasing in A, non-increasing in w; empty for h sweeps.
  std::optional<bool> monotone;
  bool counts_agree = false;        // fd_localized == oracle_localized on every row
  std::vector<double> gap_ratios;   // gap[i-1] / gap[i]
};

// workers == 0 picks the hardware concurrency.
SweepReport run_sweep(const ExperimentConfig& base, SweepParameter parameter, std::span<const double> values,
                      int workers = 0);

struct WkbReport {
  RunMetadata metadata;
  double resolved_limit = 0.0;
  WkbDeviation deviation;
  WkbDeviation control;  // same rank with V = 0
};

// rank == 0 selects the first resolved mode.
WkbReport run_wkb(const ExperimentConfig& config, int rank = 0);

std::string code_version();

}  // namespace nyqenv
