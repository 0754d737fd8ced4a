#include "nyqenv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "nyqenv/error.hpp"
#include "nyqenv/mode_analysis.hpp"

namespace nyqenv {

std::string code_version() { return NYQENV_VERSION; }

namespace {

RunMetadata metadata_for(const ExperimentConfig& config, const DiscreteOperator& op, double residual_max) {
  const auto [lo, hi] = spectral_bounds(op);
  return {config, residual_max, lo, hi};
}

FigureMode figure_mode(const SpectrumSlice& slice, const Potential& potential, int rank, std::string name,
                       std::string panel, double amplitude) {
  const Grid& grid = slice.grid;
  const auto analysis = demodulate(slice.rank(rank), grid, {slice.scheme, potential_center(potential, grid)});
  FigureMode m;
  m.name = std::move(name);
  m.panel = std::move(panel);
  m.amplitude = amplitude;
  m.rank = rank;
  m.lambda = analysis.lambda;
  m.delta_lambda = analysis.delta_lambda;
  m.localized = analysis.localized;
  m.tail_mass = analysis.tail_mass;
  m.x = grid.points();
  m.envelope_abs = analysis.envelope_abs;
  m.envelope_signed = analysis.envelope_signed;
  m.V_normalized = sample_potential(potential, grid);
  double peak = 0.0;
  for (double v : m.V_normalized) peak = std::max(peak, std::abs(v));
  for (double& v : m.V_normalized) v = peak > 0.0 ? v / peak : 0.0;
  return m;
}

}  // namespace

SpectrumReport run_spectrum(const ExperimentConfig& config) {
  validate(config);
  const Grid grid = build_grid(config);
  const Potential potential = build_potential(config);
  const auto op = assemble(config.scheme, potential, grid);
  const auto slice = top_k(op, static_cast<std::size_t>(config.k));
  const auto anchor = potential_center(potential, grid);

  SpectrumReport report;
  report.metadata = metadata_for(config, op, slice.max_residual());
  for (const auto& pair : slice.pairs) {
    const auto m = demodulate(pair, grid, {config.scheme, anchor});
    report.rows.push_back({pair.rank_from_top, pair.lambda, m.delta_lambda, m.localized, m.tail_mass, pair.residual});
  }
  return report;
}

Figure parse_figure(std::string_view name) {
  if (name == "fig1") return Figure::Fig1;
  if (name == "fig2") return Figure::Fig2;
  throw ConfigError("figure", fmt::format("unknown figure '{}' (expected fig1 or fig2)", name));
}

std::string_view to_string(Figure figure) noexcept { return figure == Figure::Fig1 ? "fig1" : "fig2"; }

FigureDataset run_reproduce(Figure figure, const ExperimentConfig& config) {
  validate(config);
  if (config.potential.kind != "sech") {
    throw ConfigError("potential.kind", "figure reproduction needs the sech family");
  }
  const Grid grid = build_grid(config);
  const double a = std::abs(config.potential.A);
  const Potential repulsive = Potential::sech(a, config.potential.w);
  const Potential attractive = Potential::sech(-a, config.potential.w);

  const auto op_rep = assemble(config.scheme, repulsive, grid);
  const auto op_att = assemble(config.scheme, attractive, grid);
  const auto rep = eigen_full(op_rep);
  const auto att = eigen_full(op_att);

  FigureDataset out;
  out.figure = figure;
  out.metadata = metadata_for(config, op_rep, std::max(rep.max_residual(), att.max_residual()));
  out.lambda_max_repulsive = rep.pairs.front().lambda;
  out.lambda_max_attractive = att.pairs.front().lambda;

  if (figure == Figure::Fig1) {
    out.modes.push_back(figure_mode(rep, repulsive, 1, "repulsive_rank1", "a", a));
    out.modes.push_back(figure_mode(rep, repulsive, 4, "repulsive_rank4", "b", a));
    CarrierWindow window;
    const auto& psi = rep.rank(1).vector;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const double x = grid.x(n);
      // Half-open [-2, 2) so the window holds exactly 4/h samples.
      if (x >= window.x_lo - 1e-9 * grid.step() && x < window.x_hi - 1e-9 * grid.step()) {
        window.x.push_back(x);
        window.psi.push_back(psi[n]);
      }
    }
    out.carrier = std::move(window);
  } else {
    out.modes.push_back(figure_mode(rep, repulsive, 5, "repulsive_rank5", "a", a));
    out.modes.push_back(figure_mode(att, attractive, 1, "attractive_rank1", "b", -a));
    out.modes.push_back(figure_mode(att, attractive, 4, "attractive_rank4", "c", -a));
    out.modes.push_back(figure_mode(att, attractive, 5, "attractive_rank5", "c_alt", -a));
  }
  return out;
}

PredictReport run_predict(const ExperimentConfig& config) {
  validate(config);
  const Grid grid = build_grid(config);
  const Potential potential = build_potential(config);
  const auto op = assemble(config.scheme, potential, grid);
  const auto prediction = predict(potential, grid, config.refine);
  const int localized = prediction.localized_count();

  const auto slice = eigen_full(op);
  const auto anchor = potential_center(potential, grid);

  PredictReport report;
  report.metadata = metadata_for(config, op, slice.max_residual());
  report.bound_state_count = static_cast<int>(prediction.bound_states.size());
  report.localized_count = localized;
  report.fd_localized_count = count_localized(slice, anchor);

  for (int r = 1; r <= localized; ++r) {
    const auto& s = prediction.bound_states[static_cast<std::size_t>(r - 1)];
    const auto fd = demodulate(slice.rank(r), grid, {config.scheme, anchor});
    report.rows.push_back({r, s.delta_lambda_pred, s.node_count, s.tail_mass, s.localized, compare(prediction, fd, r)});
  }
  return report;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "A") return SweepParameter::A;
  if (name == "w") return SweepParameter::w;
  if (name == "h") return SweepParameter::h;
  throw ConfigError("param", fmt::format("unknown sweep parameter '{}' (expected A, w or h)", name));
}

std::string_view to_string(SweepParameter parameter) noexcept {
  switch (parameter) {
    case SweepParameter::A: return "A";
    case SweepParameter::w: return "w";
    case SweepParameter::h: return "h";
  }
  return "?";
}

namespace {

ExperimentConfig sweep_point(ExperimentConfig c, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::A: c.potential.A = value; break;
    case SweepParameter::w: c.potential.w = value; break;
    case SweepParameter::h: c.grid.h = value; break;
  }
  return c;
}

SweepRow run_sweep_point(const ExperimentConfig& config, double value) {
  const Grid grid = build_grid(config);
  const Potential potential = build_potential(config);
  const auto slice = eigen_full(assemble(config.scheme, potential, grid));
  const auto anchor = potential_center(potential, grid);
  const auto prediction = predict(potential, grid, config.refine);

  SweepRow row;
  row.value = value;
  row.fd_localized = count_localized(slice, anchor);
  row.oracle_bound = static_cast<int>(prediction.bound_states.size());
  row.oracle_localized = prediction.localized_count();
  row.lambda_1 = slice.pairs.front().lambda;
  row.delta_lambda_1 = row.lambda_1 - nyquist_ceiling(config.scheme, grid.step());
  row.gap_rank1 = prediction.bound_states.empty()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : std::abs(row.delta_lambda_1 - prediction.bound_states.front().delta_lambda_pred);
  row.solver_residual_max = slice.max_residual();
  return row;
}

}  // namespace

SweepReport run_sweep(const ExperimentConfig& base, SweepParameter parameter, std::span<const double> values,
                      int workers) {
  validate(base);
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  std::vector<ExperimentConfig> points;
  for (double v : values) {
    points.push_back(sweep_point(base, parameter, v));
    try {
      validate(points.back());
    } catch (const ConfigError& e) {
      throw ConfigError("values", fmt::format("{} = {} rejected ({})", to_string(parameter), v, e.what()));
    }
  }

  SweepReport report;
  report.parameter = parameter;
  report.rows.resize(points.size());

  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        report.rows[i] = run_sweep_point(points[i], values[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  double residual = 0.0;
  for (const auto& r : report.rows) residual = std::max(residual, r.solver_residual_max);
  const auto base_op = assemble(base.scheme, build_potential(base), build_grid(base));
  report.metadata = metadata_for(base, base_op, residual);

  report.counts_agree = std::all_of(report.rows.begin(), report.rows.end(),
                                    [](const SweepRow& r) { return r.fd_localized == r.oracle_localized; });
  if (parameter != SweepParameter::h) {
    bool ok = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      const bool increasing = report.rows[i].value > report.rows[i - 1].value;
      const int prev = report.rows[i - 1].fd_localized;
      const int cur = report.rows[i].fd_localized;
      // Taller potentials hold more localized modes, narrower ones (larger w) fewer.
      const bool grows = parameter == SweepParameter::A ? increasing : !increasing;
      if (grows ? cur < prev : cur > prev) ok = false;
    }
    report.monotone = ok;
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    report.gap_ratios.push_back(report.rows[i - 1].gap_rank1 / report.rows[i].gap_rank1);
  }
  return report;
}

WkbReport run_wkb(const ExperimentConfig& config, int rank) {
  validate(config);
  const Grid grid = build_grid(config);
  const Potential potential = build_potential(config);
  const auto op = assemble(config.scheme, potential, grid);
  const auto slice = eigen_full(op);

  const auto free_slice = eigen_full(assemble(config.scheme, Potential::zero(), grid));
  const int free_rank = first_resolved_rank(free_slice);
  if (rank == 0) rank = first_resolved_rank(slice);
  if (rank == 0) throw InvalidArgument("wkb: no mode on this grid is resolved");

  WkbReport report;
  report.metadata = metadata_for(config, op, std::max(slice.max_residual(), free_slice.max_residual()));
  report.resolved_limit = resolved_lambda_limit(grid);
  report.deviation = wkb_compare(slice, potential, rank);
  report.control = wkb_compare(free_slice, Potential::zero(), free_rank);
  return report;
}

}  // namespace nyqenv
