#include "nyqenv/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

WkbMode wkb_evaluate(const Potential& potential, const Grid& grid, double lambda, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument(fmt::format("wkb: branch sign must be +1 or -1, got {}", sign));
  const auto v = sample_potential(potential, grid);
  const double v_max = *std::max_element(v.begin(), v.end());
  if (!(lambda > 0.0) || !(lambda > 2.0 * v_max)) {
    throw InvalidArgument(fmt::format(
        "wkb: lambda={} must exceed 2*max V = {} (turning points inside the domain)", lambda, 2.0 * v_max));
  }

  WkbMode mode;
  mode.lambda = lambda;
  mode.sign = sign;
  mode.amplitude.resize(grid.size());
  mode.phase.resize(grid.size());
  const double root = std::sqrt(lambda);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    mode.amplitude[n] = std::pow(lambda / (lambda - v[n]), 0.25);
    mode.phase[n] = root * grid.x(n) - phase_integral(potential, grid, grid.x(n)) / root;
  }
  return mode;
}

double resolved_lambda_limit(const Grid& grid) noexcept {
  const double k = 2.0 * std::numbers::pi / (kPointsPerWavelength * grid.step());
  return k * k;
}

namespace {

bool resolved(double lambda, const Grid& grid) {
  return lambda > 0.0 && lambda <= resolved_lambda_limit(grid) * (1.0 + 1e-12);
}

const EigenPair* find_rank(const SpectrumSlice& slice, int rank) {
  for (const auto& p : slice.pairs) {
    if (p.rank_from_top == rank) return &p;
  }
  return nullptr;
}

// Periodic linear interpolation of |psi| through its local maxima.
std::vector<double> extrema_envelope(std::span<const double> psi) {
  const std::size_t n = psi.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double here = std::abs(psi[i]);
    if (here >= std::abs(psi[(i + n - 1) % n]) && here > std::abs(psi[(i + 1) % n])) peaks.push_back(i);
  }
  std::vector<double> env(n);
  if (peaks.empty()) {
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(psi[i]);
    return env;
  }
  if (peaks.size() == 1) {
    std::fill(env.begin(), env.end(), std::abs(psi[peaks[0]]));
    return env;
  }
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    const std::size_t a = peaks[p];
    const std::size_t b = peaks[(p + 1) % peaks.size()];
    const std::size_t span = (b + n - a) % n;
    const double va = std::abs(psi[a]);
    const double vb = std::abs(psi[b]);
    for (std::size_t k = 0; k < span; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(span);
      env[(a + k) % n] = (1.0 - t) * va + t * vb;
    }
  }
  return env;
}

}  // namespace

int first_resolved_rank(const SpectrumSlice& slice) {
  for (const auto& p : slice.pairs) {
    if (resolved(p.lambda, slice.grid)) return p.rank_from_top;
  }
  return 0;
}

WkbDeviation wkb_compare(const SpectrumSlice& slice, const Potential& potential, int rank) {
  const EigenPair* mode = find_rank(slice, rank);
  if (!mode) throw InvalidArgument(fmt::format("wkb_compare: rank {} not present in the spectrum", rank));
  const Grid& grid = slice.grid;
  if (!resolved(mode->lambda, grid)) {
    const double wavelength = mode->lambda > 0.0 ? 2.0 * std::numbers::pi / std::sqrt(mode->lambda) : 0.0;
    throw InvalidArgument(fmt::format(
        "wkb_compare: mode {} too coarse for comparison (wavelength {:.4g} < {} grid steps = {:.4g})", rank,
        wavelength, kPointsPerWavelength, kPointsPerWavelength * grid.step()));
  }
  const auto wkb = wkb_evaluate(potential, grid, mode->lambda, 1);

  WkbDeviation out;
  out.rank = rank;
  out.lambda = mode->lambda;
  out.error_scale = 1.0 / std::sqrt(mode->lambda);
  out.amplitude_wkb = wkb.amplitude;

  // Quasi-degenerate partner: the closer neighbour, if it is at least ten
  // times closer than the other one.
  const EigenPair* above = find_rank(slice, rank - 1);
  const EigenPair* below = find_rank(slice, rank + 1);
  const EigenPair* partner = nullptr;
  if (above && below) {
    const double gap_above = above->lambda - mode->lambda;
    const double gap_below = mode->lambda - below->lambda;
    if (gap_above < 0.1 * gap_below) partner = above;
    if (gap_below < 0.1 * gap_above) partner = below;
  }

  const std::size_t n = grid.size();
  out.amplitude_fd.resize(n);
  if (partner) {
    out.method = AmplitudeMethod::AnalyticPair;
    out.partner_rank = partner->rank_from_top;
    for (std::size_t i = 0; i < n; ++i) out.amplitude_fd[i] = std::hypot(mode->vector[i], partner->vector[i]);
  } else {
    out.method = AmplitudeMethod::Extrema;
    out.amplitude_fd = extrema_envelope(mode->vector);
  }

  const double mean_fd = std::accumulate(out.amplitude_fd.begin(), out.amplitude_fd.end(), 0.0);
  const double mean_wkb = std::accumulate(wkb.amplitude.begin(), wkb.amplitude.end(), 0.0);
  const double scale = mean_wkb / mean_fd;
  for (std::size_t i = 0; i < n; ++i) {
    out.amplitude_fd[i] *= scale;
    out.max_deviation = std::max(out.max_deviation, std::abs(out.amplitude_fd[i] - wkb.amplitude[i]) / wkb.amplitude[i]);
    out.wkb_wiggle = std::max(out.wkb_wiggle, std::abs(wkb.amplitude[i] - 1.0));
  }
  return out;
}

std::string to_string(AmplitudeMethod method) {
  return method == AmplitudeMethod::AnalyticPair ? "analytic_pair" : "extrema";
}

}  // namespace nyqenv
