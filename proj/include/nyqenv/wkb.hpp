#pragma once

#include <string>
#include <vector>

#include "nyqenv/eigensolver.hpp"
#include "nyqenv/grid_potential.hpp"

namespace nyqenv {

// Resolution rule: a mode is comparable when its wavelength spans at least
// this many grid steps.
inline constexpr double kPointsPerWavelength = 10.0;

/// High-frequency asymptotic mode (lambda/(lambda - V))^{1/4} exp(+-i S(x)).
struct WkbMode {
  double lambda = 0.0;
  std::vector<double> amplitude;  // (lambda / (lambda - V(x_n)))^{1/4}
  std::vector<double> phase;      // sqrt(lambda) x_n - (1/sqrt(lambda)) int_{x_min}^{x_n} V
  int sign = 1;                   // branch of exp(+-i S)
};

// Requires lambda > 2 max V (no turning points) and sign = +-1.
WkbMode wkb_evaluate(const Potential& potential, const Grid& grid, double lambda, int sign = 1);

// Largest lambda a grid resolves: wavelength 2 pi / sqrt(lambda) >= 10 h.
double resolved_lambda_limit(const Grid& grid) noexcept;

enum class AmplitudeMethod { AnalyticPair, Extrema };

struct WkbDeviation {
  int rank = 0;
  double lambda = 0.0;
  AmplitudeMethod method = AmplitudeMethod::Extrema;
  int partner_rank = 0;          // 0 when no partner was used
  double max_deviation = 0.0;    // max_n |a_fd - a_wkb| / a_wkb after mean matching
  double error_scale = 0.0;      // 1/sqrt(lambda)
  double wkb_wiggle = 0.0;       // max |a_wkb - 1|
  std::vector<double> amplitude_fd;
  std::vector<double> amplitude_wkb;
};

/**
 * Amplitude envelope of the FD mode of the given rank against the WKB
 * prefactor. The envelope is sqrt(psi^2 + psi~^2) with psi~ the quasi-degenerate
 * partner when one exists, otherwise a periodic linear interpolation through
 * the local maxima of |psi|. The FD amplitude is scaled to the WKB mean before
 * comparison. The slice must contain the neighbours of `rank`.
 */
WkbDeviation wkb_compare(const SpectrumSlice& slice, const Potential& potential, int rank);

// Smallest rank (largest lambda) in a descending slice whose mode passes the
// resolution rule; 0 if none does.
int first_resolved_rank(const SpectrumSlice& slice);

std::string to_string(AmplitudeMethod method);

}  // namespace nyqenv
