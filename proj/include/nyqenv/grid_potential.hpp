#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace nyqenv {

enum class NyquistSupport { NotRequired, Required };

/**
 * Uniform periodic 1-D lattice x_n = x_min + n*h, n = 0..N-1.
 *
 * The point x_min + L is identified with x_min. Construction enforces that h
 * divides L: |N*h - L| <= 1e-12*L with N = round(L/h).
 */
class Grid {
 public:
  static Grid make(double x_min, double length, double step,
                   NyquistSupport nyquist = NyquistSupport::NotRequired);

  double x_min() const noexcept { return x_min_; }
  double length() const noexcept { return length_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return size_; }

  double x(std::size_t n) const noexcept { return x_min_ + static_cast<double>(n) * step_; }
  std::vector<double> points() const;

  // The carrier (-1)^n is periodic on the lattice only for even N.
  bool supports_nyquist() const noexcept { return size_ % 2 == 0; }

  // Same periodic window, step h/factor.
  Grid refined(int factor) const;

  // Signed distance from a to b wrapped into [-L/2, L/2).
  double periodic_offset(double a, double b) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(double x_min, double length, double step, std::size_t size)
      : x_min_(x_min), length_(length), step_(step), size_(size) {}

  double x_min_;
  double length_;
  double step_;
  std::size_t size_;
};

Grid make_grid(double x_min, double length, double step,
               NyquistSupport nyquist = NyquistSupport::NotRequired);

/// V(x) = amplitude * sech(width * x).
struct SechFamily {
  double amplitude = 0.0;
  double width = 1.0;
  friend bool operator==(const SechFamily&, const SechFamily&) = default;
};

/// Sampled values bound to the grid they were taken on.
struct Tabulated {
  std::vector<double> values;
  Grid grid;
  friend bool operator==(const Tabulated&, const Tabulated&) = default;
};

class Potential {
 public:
  using Kind = std::variant<SechFamily, Tabulated>;

  static Potential sech(double amplitude, double width);
  static Potential tabulated(std::vector<double> values, const Grid& grid);
  static Potential zero() { return sech(0.0, 1.0); }

  const Kind& kind() const noexcept { return kind_; }
  const SechFamily* as_sech() const noexcept { return std::get_if<SechFamily>(&kind_); }
  const Tabulated* as_tabulated() const noexcept { return std::get_if<Tabulated>(&kind_); }

  // Pointwise value. Tabulated potentials interpolate linearly and periodically
  // between their nodes.
  double operator()(double x) const;

  // -V, same kind.
  Potential negated() const;

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  explicit Potential(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// values[n] = V(x_n). A tabulated potential must be bound to exactly this grid.
std::vector<double> sample_potential(const Potential& potential, const Grid& grid);

// Like sample_potential, but tabulated data is interpolated onto any grid that
// covers the same periodic window. Used to carry a potential onto a refined grid.
std::vector<double> resample_potential(const Potential& potential, const Grid& grid);

/**
 * Integral of V from x_min to x by the composite trapezoid rule on the grid
 * nodes, with V linearly interpolated inside the partial cell containing x.
 * x must lie in [x_min, x_min + L].
 */
double phase_integral(const Potential& potential, const Grid& grid, double x);

// Antiderivative F(x) = (2A/w) * atan(tanh(w*x/2)) = (A/w) * gd(w*x), F(0) = 0.
double sech_antiderivative(const SechFamily& sech, double x);

// Exact integral from x_min to x for the sech family.
double phase_integral_exact(const SechFamily& sech, const Grid& grid, double x);

/**
 * |V|-weighted circular mean position of the potential on the periodic grid.
 * Empty for V == 0 or when the weights have no preferred direction.
 */
std::optional<double> potential_center(const Potential& potential, const Grid& grid);

}  // namespace nyqenv
