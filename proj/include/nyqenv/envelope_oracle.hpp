#pragma once

#include <vector>

#include "nyqenv/grid_potential.hpp"
#include "nyqenv/mode_analysis.hpp"

namespace nyqenv {

inline constexpr int kDefaultRefine = 8;
// Bound states need mu < -kBoundStateCutoff * max|V|.
inline constexpr double kBoundStateCutoff = 1e-8;

struct BoundState {
  double delta_lambda_pred = 0.0;  // -mu
  std::vector<double> phi;         // on the fine grid, max |phi| = 1, peak positive
  int node_count = 0;
  double tail_mass = 0.0;          // same window as the FD modes
  bool localized = false;
};

/**
 * Bound states of the continuum envelope equation phi'' + (V - dl) phi = 0,
 * ground state first.
 */
struct EnvelopePrediction {
  std::vector<BoundState> bound_states;
  Potential potential;
  Grid fine_grid;
  int refine = kDefaultRefine;

  // Leading run of bound states whose envelopes pass the localization test;
  // this is what the FD localized count should reproduce.
  int localized_count() const noexcept;
};

/**
 * Solves (-d^2/dx^2 - V) phi = mu phi by central differences on the same
 * periodic window with step h/refine and keeps every mu below the cutoff.
 * Tail masses use potential_center as the window anchor.
 */
EnvelopePrediction predict(const Potential& potential, const Grid& base_grid, int refine = kDefaultRefine);

struct EnvelopeMatch {
  int rank = 0;
  double delta_lambda_fd = 0.0;
  double delta_lambda_pred = 0.0;
  double gap = 0.0;            // |dl_fd - dl_pred|
  double correlation = 0.0;    // peak-aligned shape correlation of |envelopes|
  int nodes_fd = 0;
  int nodes_expected = 0;      // rank - 1
  bool nodes_match = false;
};

// Compares the FD mode of a given rank (1-based) with the matching bound state.
EnvelopeMatch compare(const EnvelopePrediction& prediction, const ModeAnalysis& analysis, int rank);

// max over circular shifts of <a, shift(b)> / (|a||b|).
double aligned_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace nyqenv
