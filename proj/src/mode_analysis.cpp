#include "nyqenv/mode_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

double circular_center(std::span<const double> envelope, const Grid& grid) {
  const std::size_t n = grid.size();
  double c = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = envelope[i] * envelope[i];
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    c += weight * std::cos(theta);
    s += weight * std::sin(theta);
  }
  double angle = std::atan2(s, c);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  return grid.x_min() + angle / (2.0 * std::numbers::pi) * grid.length();
}

double tail_mass(std::span<const double> envelope, const Grid& grid, std::optional<double> center) {
  if (envelope.size() != grid.size()) {
    throw InvalidArgument(fmt::format("tail_mass: envelope length {} does not match grid size {}",
                                      envelope.size(), grid.size()));
  }
  double total = 0.0;
  for (double v : envelope) total += v * v;
  if (!(total > 0.0)) throw InvalidArgument("tail_mass: zero envelope");

  const double x_center = center ? *center : circular_center(envelope, grid);
  const double cut = kTailWindowFraction * grid.length();
  const double edge_tol = 1e-9 * grid.step();
  double tail = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dist = std::abs(grid.periodic_offset(x_center, grid.x(i)));
    const double mass = envelope[i] * envelope[i];
    if (dist > cut + edge_tol) {
      tail += mass;
    } else if (dist >= cut - edge_tol) {
      tail += 0.5 * mass;
    }
  }
  return tail / total;
}

ModeAnalysis demodulate(const EigenPair& pair, const Grid& grid, const DemodulationOptions& options) {
  if (!grid.supports_nyquist()) {
    throw InvalidArgument(fmt::format("demodulate: N={} is odd; the carrier (-1)^n is not periodic", grid.size()));
  }
  if (pair.vector.size() != grid.size()) {
    throw InvalidArgument("demodulate: eigenvector length does not match the grid");
  }
  const std::size_t n = grid.size();
  ModeAnalysis m;
  m.lambda = pair.lambda;
  m.rank_from_top = pair.rank_from_top;
  m.envelope_signed.resize(n);
  m.envelope_abs.resize(n);

  std::size_t peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m.envelope_signed[i] = (i % 2 == 0 ? 1.0 : -1.0) * pair.vector[i];
    if (std::abs(pair.vector[i]) > std::abs(pair.vector[peak])) peak = i;
  }
  if (m.envelope_signed[peak] < 0.0) {
    for (double& v : m.envelope_signed) v = -v;
  }
  const double max_abs = std::abs(pair.vector[peak]);
  if (!(max_abs > 0.0)) throw InvalidArgument("demodulate: zero eigenvector");
  for (std::size_t i = 0; i < n; ++i) m.envelope_abs[i] = std::abs(pair.vector[i]) / max_abs;
  m.envelope_abs[peak] = 1.0;

  m.delta_lambda = pair.lambda - nyquist_ceiling(options.scheme, grid.step());
  m.center = options.anchor ? *options.anchor : circular_center(m.envelope_abs, grid);
  m.tail_mass = tail_mass(m.envelope_abs, grid, m.center);
  m.localized = m.tail_mass < kLocalizedTailMass;
  return m;
}

int count_localized(const SpectrumSlice& slice, std::optional<double> anchor) {
  int count = 0;
  for (const auto& pair : slice.pairs) {
    if (!demodulate(pair, slice.grid, {slice.scheme, anchor}).localized) break;
    ++count;
  }
  return count;
}

int count_nodes(std::span<const double> envelope, const Grid& grid) {
  const std::size_t n = envelope.size();
  double peak = 0.0;
  for (double v : envelope) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) return 0;
  const double floor = 1e-8 * peak;

  // Start opposite the centre of mass so the wraparound seam lies in the tail.
  const double center = circular_center(envelope, grid);
  const double offset = std::fmod(center - grid.x_min() + 0.5 * grid.length(), grid.length());
  const auto start = static_cast<std::size_t>(std::llround(offset / grid.step())) % n;

  int nodes = 0;
  int previous = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = envelope[(start + k) % n];
    if (std::abs(v) < floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (previous != 0 && sign != previous) ++nodes;
    previous = sign;
  }
  return nodes;
}

double total_variation(std::span<const double> v) {
  const std::size_t n = v.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) tv += std::abs(v[(i + 1) % n] - v[i]);
  return tv;
}

}  // namespace nyqenv
