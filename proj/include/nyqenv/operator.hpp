#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "nyqenv/grid_potential.hpp"

namespace nyqenv {

enum class Scheme { CentralDifference, Numerov };

std::string_view to_string(Scheme scheme) noexcept;  // "cd" / "numerov"
Scheme parse_scheme(std::string_view name);

/**
 * Symmetric cyclic-tridiagonal N x N matrix.
 *
 * diag[n] is entry (n, n); edge[n] is the single stored value of entries
 * (n, n+1) and (n+1, n), indices mod N, so edge[N-1] is the wraparound corner
 * (0, N-1). Symmetry is structural. Requires N >= 3.
 */
struct CyclicTridiagonal {
  std::vector<double> diag;
  std::vector<double> edge;

  std::size_t size() const noexcept { return diag.size(); }

  // Entry (i, j); zero outside the cyclic band.
  double at(std::size_t i, std::size_t j) const noexcept;

  void multiply(std::span<const double> v, std::span<double> out) const;

  // max_i sum_j |M_ij|
  double norm_inf() const noexcept;

  // Row-major dense copy.
  std::vector<double> dense() const;
};

/**
 * Discretized Schrodinger operator as a symmetric-definite pair:
 * stiffness * v = lambda * mass * v, periodic boundary conditions.
 *
 * CentralDifference: stiffness = tridiag(-1, 2, -1)/h^2 + diag(V), mass = I.
 * Numerov: mass = tridiag(1, 10, 1)/12 and stiffness = tridiag(-1, 2, -1)/h^2
 * plus the symmetric part of mass*diag(V).
 */
class DiscreteOperator {
 public:
  DiscreteOperator(Scheme scheme, CyclicTridiagonal stiffness, CyclicTridiagonal mass, Grid grid);

  Scheme scheme() const noexcept { return scheme_; }
  const CyclicTridiagonal& stiffness() const noexcept { return stiffness_; }
  const CyclicTridiagonal& mass() const noexcept { return mass_; }
  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return stiffness_.size(); }
  bool mass_is_identity() const noexcept { return scheme_ == Scheme::CentralDifference; }

 private:
  Scheme scheme_;
  CyclicTridiagonal stiffness_;
  CyclicTridiagonal mass_;
  Grid grid_;
};

DiscreteOperator assemble(Scheme scheme, const Potential& potential, const Grid& grid);

// Same, from potential samples already taken on the grid.
DiscreteOperator assemble(Scheme scheme, std::span<const double> potential_samples, const Grid& grid);

struct OperatorProducts {
  std::vector<double> stiffness;  // A v
  std::vector<double> mass;       // B v
};

OperatorProducts apply_operator(const DiscreteOperator& op, std::span<const double> v);

// Eigenvalue carried by the free carrier (-1)^n: 4/h^2 for central differences,
// 6/h^2 for Numerov (the carrier sees 4/h^2 in A and 2/3 in B).
double nyquist_ceiling(Scheme scheme, double step) noexcept;

enum class OperatorPart { Stiffness, Mass };

// Nonzero entries as CSV rows "i,j,value" (0-based, row-major, 17 significant digits).
void write_operator_csv(std::ostream& out, const DiscreteOperator& op,
                        OperatorPart part = OperatorPart::Stiffness);

}  // namespace nyqenv
