#include "nyqenv/envelope_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nyqenv/eigensolver.hpp"
#include "nyqenv/error.hpp"
#include "nyqenv/operator.hpp"

namespace nyqenv {

int EnvelopePrediction::localized_count() const noexcept {
  int count = 0;
  for (const auto& s : bound_states) {
    if (!s.localized) break;
    ++count;
  }
  return count;
}

EnvelopePrediction predict(const Potential& potential, const Grid& base_grid, int refine) {
  if (refine < 1) throw InvalidArgument(fmt::format("predict: refine must be >= 1, got {}", refine));
  const Grid fine = base_grid.refined(refine);
  EnvelopePrediction out{{}, potential, fine, refine};

  const auto v = resample_potential(potential, fine);
  double v_scale = 0.0;
  for (double x : v) v_scale = std::max(v_scale, std::abs(x));
  if (v_scale == 0.0) return out;

  std::vector<double> minus_v(v.size());
  std::transform(v.begin(), v.end(), minus_v.begin(), [](double x) { return -x; });
  const auto op = assemble(Scheme::CentralDifference, minus_v, fine);

  const double cutoff = -kBoundStateCutoff * v_scale;
  const auto slice = eigen_interval(op, -std::numeric_limits<double>::infinity(), cutoff);
  const auto anchor = potential_center(potential, fine);

  // The slice is descending in mu; the ground state has the most negative mu.
  for (auto it = slice.pairs.rbegin(); it != slice.pairs.rend(); ++it) {
    BoundState s;
    s.delta_lambda_pred = -it->lambda;
    s.phi = it->vector;
    double peak = 0.0;
    for (double x : s.phi) peak = std::max(peak, std::abs(x));
    for (double& x : s.phi) x /= peak;
    s.node_count = count_nodes(s.phi, fine);
    s.tail_mass = tail_mass(s.phi, fine, anchor);
    s.localized = s.tail_mass < kLocalizedTailMass;
    out.bound_states.push_back(std::move(s));
  }
  return out;
}

double aligned_correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n || n == 0) throw InvalidArgument("aligned_correlation: length mismatch");
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0 && nb > 0.0)) throw InvalidArgument("aligned_correlation: zero vector");
  double best = 0.0;
  for (std::size_t shift = 0; shift < n; ++shift) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[(i + shift) % n];
    best = std::max(best, std::abs(s));
  }
  return best / std::sqrt(na * nb);
}

EnvelopeMatch compare(const EnvelopePrediction& prediction, const ModeAnalysis& analysis, int rank) {
  const int available = static_cast<int>(prediction.bound_states.size());
  if (rank < 1 || rank > available) {
    throw InvalidArgument(fmt::format("compare: rank {} outside the {} predicted bound states", rank, available));
  }
  const std::size_t coarse_n = analysis.envelope_abs.size();
  if (coarse_n * static_cast<std::size_t>(prediction.refine) != prediction.fine_grid.size()) {
    throw InvalidArgument("compare: mode analysis is not on the prediction's base grid");
  }
  const auto& state = prediction.bound_states[static_cast<std::size_t>(rank - 1)];

  std::vector<double> restricted(coarse_n);
  for (std::size_t i = 0; i < coarse_n; ++i) {
    restricted[i] = std::abs(state.phi[i * static_cast<std::size_t>(prediction.refine)]);
  }
  const Grid coarse = Grid::make(prediction.fine_grid.x_min(), prediction.fine_grid.length(),
                                 prediction.fine_grid.step() * prediction.refine);

  EnvelopeMatch m;
  m.rank = rank;
  m.delta_lambda_fd = analysis.delta_lambda;
  m.delta_lambda_pred = state.delta_lambda_pred;
  m.gap = std::abs(analysis.delta_lambda - state.delta_lambda_pred);
  m.correlation = aligned_correlation(analysis.envelope_abs, restricted);
  m.nodes_fd = count_nodes(analysis.envelope_signed, coarse);
  m.nodes_expected = rank - 1;
  m.nodes_match = m.nodes_fd == m.nodes_expected;
  return m;
}

}  // namespace nyqenv
