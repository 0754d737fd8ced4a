#include "nyqenv/grid_potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

Grid Grid::make(double x_min, double length, double step, NyquistSupport nyquist) {
  if (!std::isfinite(x_min)) throw InvalidArgument("grid: x_min must be finite");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument(fmt::format("grid: length L must be positive and finite, got {}", length));
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgument(fmt::format("grid: step h must be positive and finite, got {}", step));
  }
  const double ratio = length / step;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(count * step - length) > 1e-12 * length) {
    throw InvalidArgument(fmt::format(
        "grid: step h={} must divide L={} exactly (L/h = {:.6f} is not an integer)", step, length,
        ratio));
  }
  const auto size = static_cast<std::size_t>(count);
  if (nyquist == NyquistSupport::Required && size % 2 != 0) {
    throw InvalidArgument(
        fmt::format("grid: N={} is odd; the Nyquist carrier (-1)^n needs an even point count", size));
  }
  return Grid(x_min, length, step, size);
}

Grid make_grid(double x_min, double length, double step, NyquistSupport nyquist) {
  return Grid::make(x_min, length, step, nyquist);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(size_);
  for (std::size_t n = 0; n < size_; ++n) xs[n] = x(n);
  return xs;
}

Grid Grid::refined(int factor) const {
  if (factor < 1) throw InvalidArgument(fmt::format("grid: refinement factor must be >= 1, got {}", factor));
  return Grid(x_min_, length_, step_ / factor, size_ * static_cast<std::size_t>(factor));
}

double Grid::periodic_offset(double a, double b) const noexcept {
  double d = std::fmod(b - a, length_);
  if (d >= 0.5 * length_) d -= length_;
  if (d < -0.5 * length_) d += length_;
  return d;
}

Potential Potential::sech(double amplitude, double width) {
  if (!std::isfinite(amplitude)) throw InvalidArgument("potential: amplitude must be finite");
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidArgument(fmt::format("potential: width must be positive, got {}", width));
  }
  return Potential(SechFamily{amplitude, width});
}

Potential Potential::tabulated(std::vector<double> values, const Grid& grid) {
  if (values.size() != grid.size()) {
    throw InvalidArgument(fmt::format("potential: {} tabulated values for a grid of {} points",
                                      values.size(), grid.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("potential: tabulated values must be finite");
  }
  return Potential(Tabulated{std::move(values), grid});
}

namespace {

double sech_value(const SechFamily& s, double x) {
  // 1/cosh overflows gracefully to 0 for large arguments.
  return s.amplitude / std::cosh(s.width * x);
}

double interpolate_periodic(const Tabulated& t, double x) {
  const Grid& g = t.grid;
  const double u = std::fmod(x - g.x_min(), g.length());
  const double pos = (u < 0.0 ? u + g.length() : u) / g.step();
  const double cell = std::floor(pos);
  const double frac = pos - cell;
  const std::size_t n = g.size();
  const auto i = static_cast<std::size_t>(cell) % n;
  const std::size_t j = (i + 1) % n;
  return (1.0 - frac) * t.values[i] + frac * t.values[j];
}

}  // namespace

double Potential::operator()(double x) const {
  return std::visit(
      [x](const auto& k) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, SechFamily>) {
          return sech_value(k, x);
        } else {
          return interpolate_periodic(k, x);
        }
      },
      kind_);
}

Potential Potential::negated() const {
  if (const auto* s = as_sech()) return Potential(SechFamily{-s->amplitude, s->width});
  const auto& t = std::get<Tabulated>(kind_);
  std::vector<double> neg(t.values.size());
  std::transform(t.values.begin(), t.values.end(), neg.begin(), [](double v) { return -v; });
  return Potential(Tabulated{std::move(neg), t.grid});
}

std::vector<double> sample_potential(const Potential& potential, const Grid& grid) {
  if (const auto* t = potential.as_tabulated()) {
    if (!(t->grid == grid)) {
      throw InvalidArgument("potential: tabulated potential is bound to a different grid");
    }
    return t->values;
  }
  const auto& s = *potential.as_sech();
  std::vector<double> values(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) values[n] = sech_value(s, grid.x(n));
  return values;
}

std::vector<double> resample_potential(const Potential& potential, const Grid& grid) {
  if (const auto* t = potential.as_tabulated()) {
    if (t->grid == grid) return t->values;
    if (std::abs(t->grid.length() - grid.length()) > 1e-12 * grid.length()) {
      throw InvalidArgument("potential: cannot resample onto a grid with a different period");
    }
  }
  std::vector<double> values(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) values[n] = potential(grid.x(n));
  return values;
}

double phase_integral(const Potential& potential, const Grid& grid, double x) {
  const double upper = grid.x_min() + grid.length();
  const double slack = 1e-12 * grid.length();
  if (!(x >= grid.x_min() - slack && x <= upper + slack)) {
    throw InvalidArgument(fmt::format("phase_integral: x={} outside [{}, {}]", x, grid.x_min(), upper));
  }
  x = std::clamp(x, grid.x_min(), upper);

  // Node values for n = 0..N; node N is x_min + L. The sech family is evaluated
  // there directly, tabulated data wraps to node 0.
  const std::size_t n_points = grid.size();
  const auto tab = potential.as_tabulated();
  if (tab && !(tab->grid == grid)) {
    throw InvalidArgument("phase_integral: tabulated potential is bound to a different grid");
  }
  auto node = [&](std::size_t n) {
    if (tab) return tab->values[n % n_points];
    return potential(grid.x(n));
  };

  const double h = grid.step();
  const double pos = (x - grid.x_min()) / h;
  auto full_cells = static_cast<std::size_t>(std::floor(pos));
  if (full_cells > n_points) full_cells = n_points;
  double frac = pos - static_cast<double>(full_cells);
  if (full_cells == n_points) frac = 0.0;

  double sum = 0.0;
  for (std::size_t n = 0; n < full_cells; ++n) sum += 0.5 * h * (node(n) + node(n + 1));
  if (frac > 0.0) {
    const double left = node(full_cells);
    const double right = node(full_cells + 1);
    const double at_x = left + frac * (right - left);
    sum += 0.5 * frac * h * (left + at_x);
  }
  return sum;
}

double sech_antiderivative(const SechFamily& sech, double x) {
  return 2.0 * sech.amplitude / sech.width * std::atan(std::tanh(0.5 * sech.width * x));
}

double phase_integral_exact(const SechFamily& sech, const Grid& grid, double x) {
  return sech_antiderivative(sech, x) - sech_antiderivative(sech, grid.x_min());
}

std::optional<double> potential_center(const Potential& potential, const Grid& grid) {
  const auto values = resample_potential(potential, grid);
  double total = 0.0;
  double c = 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double weight = std::abs(values[n]);
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(grid.size());
    total += weight;
    c += weight * std::cos(theta);
    s += weight * std::sin(theta);
  }
  if (total == 0.0 || std::hypot(c, s) < 1e-9 * total) return std::nullopt;
  double angle = std::atan2(s, c);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  return grid.x_min() + angle / (2.0 * std::numbers::pi) * grid.length();
}

}  // namespace nyqenv
