#include "nyqenv/operator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::Numerov ? "numerov" : "cd";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "cd" || name == "central" || name == "CentralDifference") return Scheme::CentralDifference;
  if (name == "numerov" || name == "Numerov") return Scheme::Numerov;
  throw InvalidArgument(fmt::format("unknown scheme '{}' (expected cd or numerov)", name));
}

double CyclicTridiagonal::at(std::size_t i, std::size_t j) const noexcept {
  const std::size_t n = size();
  if (i == j) return diag[i];
  if (j == (i + 1) % n) return edge[i];
  if (i == (j + 1) % n) return edge[j];
  return 0.0;
}

void CyclicTridiagonal::multiply(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = size();
  if (v.size() != n || out.size() != n) {
    throw InvalidArgument(fmt::format("apply: vector length {} does not match operator size {}", v.size(), n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const std::size_t prev = (i + n - 1) % n;
    out[i] = diag[i] * v[i] + edge[i] * v[next] + edge[prev] * v[prev];
  }
}

double CyclicTridiagonal::norm_inf() const noexcept {
  const std::size_t n = size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double row = std::abs(diag[i]) + std::abs(edge[i]) + std::abs(edge[(i + n - 1) % n]);
    norm = std::max(norm, row);
  }
  return norm;
}

std::vector<double> CyclicTridiagonal::dense() const {
  const std::size_t n = size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    m[i * n + i] = diag[i];
    m[i * n + j] = edge[i];
    m[j * n + i] = edge[i];
  }
  return m;
}

DiscreteOperator::DiscreteOperator(Scheme scheme, CyclicTridiagonal stiffness, CyclicTridiagonal mass,
                                   Grid grid)
    : scheme_(scheme), stiffness_(std::move(stiffness)), mass_(std::move(mass)), grid_(grid) {
  const std::size_t n = stiffness_.size();
  if (n < 3) throw InvalidArgument(fmt::format("operator: N={} < 3, three-point stencil undefined", n));
  if (stiffness_.edge.size() != n || mass_.diag.size() != n || mass_.edge.size() != n || grid_.size() != n) {
    throw InvalidArgument("operator: inconsistent matrix and grid sizes");
  }
}

DiscreteOperator assemble(Scheme scheme, std::span<const double> v, const Grid& grid) {
  const std::size_t n = grid.size();
  if (n < 3) throw InvalidArgument(fmt::format("assemble: N={} < 3, three-point stencil undefined", n));
  if (v.size() != n) {
    throw InvalidArgument(fmt::format("assemble: {} potential samples for a grid of {} points", v.size(), n));
  }
  const double h = grid.step();
  const double h2 = h * h;

  CyclicTridiagonal a{std::vector<double>(n), std::vector<double>(n)};
  CyclicTridiagonal b{std::vector<double>(n), std::vector<double>(n)};

  if (scheme == Scheme::CentralDifference) {
    // Literal form of tridiag(-1, 2, -1)/h^2 + diag(V) with -1/h^2 corners.
    for (std::size_t i = 0; i < n; ++i) {
      a.diag[i] = 2.0 / h2 + v[i];
      a.edge[i] = -1.0 / h2;
      b.diag[i] = 1.0;
      b.edge[i] = 0.0;
    }
  } else {
    // B*diag(V) is not symmetric; its symmetric part (B V + V B)/2 keeps the
    // pair symmetric-definite. The discarded part is antisymmetric and only
    // moves eigenvalues at O(h^4).
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      a.diag[i] = 2.0 / h2 + (10.0 / 12.0) * v[i];
      a.edge[i] = -1.0 / h2 + (v[i] + v[j]) / 24.0;
      b.diag[i] = 10.0 / 12.0;
      b.edge[i] = 1.0 / 12.0;
    }
  }
  return DiscreteOperator(scheme, std::move(a), std::move(b), grid);
}

DiscreteOperator assemble(Scheme scheme, const Potential& potential, const Grid& grid) {
  const auto samples = sample_potential(potential, grid);
  return assemble(scheme, samples, grid);
}

OperatorProducts apply_operator(const DiscreteOperator& op, std::span<const double> v) {
  OperatorProducts out{std::vector<double>(op.size()), std::vector<double>(op.size())};
  op.stiffness().multiply(v, out.stiffness);
  op.mass().multiply(v, out.mass);
  return out;
}

double nyquist_ceiling(Scheme scheme, double step) noexcept {
  const double h2 = step * step;
  return scheme == Scheme::Numerov ? 6.0 / h2 : 4.0 / h2;
}

void write_operator_csv(std::ostream& out, const DiscreteOperator& op, OperatorPart part) {
  const auto& m = part == OperatorPart::Stiffness ? op.stiffness() : op.mass();
  const std::size_t n = m.size();
  out << "i,j,value\n";
  for (std::size_t i = 0; i < n; ++i) {
    // Columns of row i in ascending order: the corner sits at 0 or N-1.
    std::size_t cols[3] = {(i + n - 1) % n, i, (i + 1) % n};
    std::sort(std::begin(cols), std::end(cols));
    for (std::size_t j : cols) {
      const double value = m.at(i, j);
      if (value == 0.0) continue;
      fmt::print(out, "{},{},{:.17g}\n", i, j, value);
    }
  }
}

}  // namespace nyqenv
