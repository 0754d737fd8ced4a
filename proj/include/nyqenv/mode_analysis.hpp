#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nyqenv/eigensolver.hpp"

namespace nyqenv {

// A mode is localized when less than this fraction of its mass lies in the
// outer quarter of the periodic window.
inline constexpr double kLocalizedTailMass = 0.01;
inline constexpr double kTailWindowFraction = 0.375;

struct DemodulationOptions {
  Scheme scheme = Scheme::CentralDifference;
  // Centre of the tail window. When empty the envelope's own circular mean is
  // used. Pass potential_center(...) to measure mass far from the potential.
  std::optional<double> anchor;
};

struct ModeAnalysis {
  double lambda = 0.0;
  int rank_from_top = 0;
  std::vector<double> envelope_signed;  // (-1)^n psi_n, largest entry positive
  std::vector<double> envelope_abs;     // |psi_n| / max |psi|
  double delta_lambda = 0.0;            // lambda - nyquist_ceiling(scheme, h)
  double center = 0.0;                  // centre of the tail window
  double tail_mass = 0.0;
  bool localized = false;
};

/**
 * Strips the Nyquist carrier from an eigenvector. For the central-difference
 * scheme delta_lambda = lambda - 4/h^2. Requires an even grid.
 */
ModeAnalysis demodulate(const EigenPair& pair, const Grid& grid, const DemodulationOptions& options = {});

// Probability-weighted circular mean of |envelope|^2 on the periodic grid.
double circular_center(std::span<const double> envelope, const Grid& grid);

/**
 * Fraction of sum |envelope|^2 on samples whose periodic distance from the
 * centre exceeds 0.375*L. Samples exactly on the window edge count half, so a
 * uniform envelope gives exactly 0.25 for any centre.
 */
double tail_mass(std::span<const double> envelope, const Grid& grid, std::optional<double> center = std::nullopt);

// Leading run of localized modes in a descending slice.
int count_localized(const SpectrumSlice& slice, std::optional<double> anchor = std::nullopt);

// Sign changes of a signed envelope, ignoring entries below 1e-8 of its peak
// and starting the circular scan opposite the centre of mass.
int count_nodes(std::span<const double> envelope_signed, const Grid& grid);

// sum_n |v[n+1] - v[n]| around the periodic grid.
double total_variation(std::span<const double> v);

}  // namespace nyqenv
