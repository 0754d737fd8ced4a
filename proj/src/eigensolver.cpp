#include "nyqenv/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "dense.hpp"
#include "nyqenv/error.hpp"

namespace nyqenv {

const EigenPair& SpectrumSlice::rank(int r) const {
  for (const auto& p : pairs) {
    if (p.rank_from_top == r) return p;
  }
  throw InvalidArgument(fmt::format("spectrum: rank {} not present in slice", r));
}

double SpectrumSlice::max_residual() const noexcept {
  double worst = 0.0;
  for (const auto& p : pairs) worst = std::max(worst, p.residual);
  return worst;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// First index whose magnitude is within rounding of the maximum, so flat
// vectors such as the Nyquist mode orient on their first entry.
std::size_t argmax_abs(std::span<const double> v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double floor = peak * (1.0 - 1e-9);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= floor) return i;
  }
  return 0;
}

// B-normalize, orient, and record the residual.
void finalize_pair(EigenPair& pair, const DiscreteOperator& op) {
  std::vector<double> bv(op.size());
  op.mass().multiply(pair.vector, bv);
  const double scale = 1.0 / std::sqrt(dot(pair.vector, bv));
  const double sign = pair.vector[argmax_abs(pair.vector)] < 0.0 ? -1.0 : 1.0;
  for (double& x : pair.vector) x *= sign * scale;
  pair.residual = certify(pair, op).residual;
}

// Descending by lambda; runs of eigenvalues closer than tie_tol are ordered by
// the position of the largest-magnitude entry.
void order_descending(std::vector<EigenPair>& pairs, double tie_tol) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.lambda > b.lambda; });
  std::size_t start = 0;
  while (start < pairs.size()) {
    std::size_t end = start + 1;
    while (end < pairs.size() && pairs[end - 1].lambda - pairs[end].lambda <= tie_tol) ++end;
    if (end - start > 1) {
      std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                       pairs.begin() + static_cast<std::ptrdiff_t>(end),
                       [](const EigenPair& a, const EigenPair& b) {
                         return argmax_abs(a.vector) < argmax_abs(b.vector);
                       });
    }
    start = end;
  }
}

void require_certified(const SpectrumSlice& slice, const DiscreteOperator& op) {
  for (const auto& p : slice.pairs) {
    const auto c = certify(p, op);
    if (!c.passed) {
      throw SolverError(fmt::format(
          "eigensolver: pair rank {} failed certification (residual {:.3e} > {:.3e}, |v'Bv-1| = {:.3e})",
          p.rank_from_top, c.residual, c.residual_bound, c.mass_norm_error));
    }
  }
}

}  // namespace

Certificate certify(const EigenPair& pair, const DiscreteOperator& op) {
  if (pair.vector.size() != op.size()) {
    throw InvalidArgument(fmt::format("certify: vector length {} does not match operator size {}",
                                      pair.vector.size(), op.size()));
  }
  const auto products = apply_operator(op, pair.vector);
  double sq = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    const double r = products.stiffness[i] - pair.lambda * products.mass[i];
    sq += r * r;
  }
  Certificate c;
  c.residual = std::sqrt(sq);
  c.mass_norm_error = std::abs(dot(pair.vector, products.mass) - 1.0);
  c.residual_bound = kEigenTolerance * op.stiffness().norm_inf();
  c.passed = c.residual <= c.residual_bound && c.mass_norm_error <= kMassNormTolerance;
  return c;
}

SpectrumSlice eigen_full(const DiscreteOperator& op) {
  const std::size_t n = op.size();
  if (n > kDenseLimit) {
    throw InvalidArgument(fmt::format("eigen_full: N={} exceeds the dense limit {}", n, kDenseLimit));
  }

  dense::SymmetricEigen eig;
  if (op.mass_is_identity()) {
    eig = dense::symmetric_eigen(op.stiffness().dense(), n);
  } else {
    const auto l = dense::cholesky(op.mass().dense(), n);
    eig = dense::symmetric_eigen(dense::reduce_generalized(op.stiffness().dense(), l, n), n);
    for (std::size_t k = 0; k < n; ++k) dense::back_substitute_transposed(l, n, &eig.vectors[k * n]);
  }

  SpectrumSlice slice{{}, op.scheme(), op.grid()};
  slice.pairs.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& p = slice.pairs[k];
    p.lambda = eig.values[k];
    p.vector.assign(eig.vectors.begin() + static_cast<std::ptrdiff_t>(k * n),
                    eig.vectors.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    finalize_pair(p, op);
  }
  order_descending(slice.pairs, kEigenTolerance * op.stiffness().norm_inf());
  for (std::size_t k = 0; k < n; ++k) slice.pairs[k].rank_from_top = static_cast<int>(k + 1);
  require_certified(slice, op);
  return slice;
}

SpectrumSlice top_k(const DiscreteOperator& op, std::size_t k) {
  if (k < 1 || k > op.size()) {
    throw InvalidArgument(fmt::format("top_k: k={} outside [1, {}]", k, op.size()));
  }
  auto full = eigen_full(op);
  const double kth = std::abs(full.pairs[k - 1].lambda);
  const double tie_tol = kEigenTolerance * op.stiffness().norm_inf();
  for (std::size_t j = k; j < full.pairs.size(); ++j) {
    if (std::abs(full.pairs[j].lambda) > kth + tie_tol) {
      throw SolverError(fmt::format(
          "top_k: eigenvalue {} outranks the k-th largest {} in magnitude; largest-magnitude and "
          "largest-algebraic selections disagree",
          full.pairs[j].lambda, full.pairs[k - 1].lambda));
    }
  }
  full.pairs.resize(k);
  return full;
}

// ---------------------------------------------------------------------------
// Structured path: inertia bisection and inverse iteration.

namespace {

struct Shifted {
  std::vector<double> diag;
  std::vector<double> edge;
  double norm = 0.0;
};

Shifted shifted(const DiscreteOperator& op, double sigma) {
  const auto& a = op.stiffness();
  const auto& b = op.mass();
  Shifted c{std::vector<double>(op.size()), std::vector<double>(op.size()), 0.0};
  for (std::size_t i = 0; i < op.size(); ++i) {
    c.diag[i] = a.diag[i] - sigma * b.diag[i];
    c.edge[i] = a.edge[i] - sigma * b.edge[i];
  }
  c.norm = CyclicTridiagonal{c.diag, c.edge}.norm_inf();
  return c;
}

// Negative pivots of the symmetric LDL^T factorization of a cyclic
// tridiagonal matrix. Eliminating in natural order fills only the last row,
// tracked in `fill`. Pivots smaller than eps*||C|| are replaced by -eps*||C||.
std::size_t negative_pivots(const Shifted& c) {
  const std::size_t n = c.diag.size();
  const double pivmin = std::numeric_limits<double>::epsilon() * std::max(c.norm, std::numeric_limits<double>::min());
  auto guard = [pivmin](double d) { return std::abs(d) < pivmin ? -pivmin : d; };

  std::vector<double> dd = c.diag;
  std::vector<double> fill(n, 0.0);
  fill[0] = c.edge[n - 1];
  double last = c.diag[n - 1];
  std::size_t negatives = 0;

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const double d = guard(dd[k]);
    if (d < 0.0) ++negatives;
    const double sub = c.edge[k];
    dd[k + 1] -= sub * sub / d;
    fill[k + 1] -= fill[k] * sub / d;
    last -= fill[k] * fill[k] / d;
  }
  const double d = guard(dd[n - 2]);
  if (d < 0.0) ++negatives;
  const double off = c.edge[n - 2] + fill[n - 2];
  last -= off * off / d;
  if (guard(last) < 0.0) ++negatives;
  if (!std::isfinite(last)) throw SolverError("count_below: inertia recurrence overflowed");
  return negatives;
}

// LU with partial pivoting of a tridiagonal matrix (LAPACK gttrf/gttrs layout).
class TridiagonalLU {
 public:
  TridiagonalLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper, double tiny)
      : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)), du2_(d_.size(), 0.0),
        pivot_(d_.size(), false) {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = tiny;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[i] = true;
      }
    }
    if (d_[n - 1] == 0.0) d_[n - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!pivot_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<bool> pivot_;
};

// Cyclic system solved as tridiagonal plus a rank-one corner correction
// (Sherman-Morrison).
class CyclicSolver {
 public:
  explicit CyclicSolver(const Shifted& c) : n_(c.diag.size()), tiny_(std::numeric_limits<double>::epsilon() * c.norm) {
    const double corner = c.edge[n_ - 1];
    gamma_ = std::abs(c.diag[0]) > tiny_ ? -c.diag[0] : -c.norm;
    corner_ratio_ = corner / gamma_;

    std::vector<double> diag = c.diag;
    diag[0] -= gamma_;
    diag[n_ - 1] -= corner * corner_ratio_;
    std::vector<double> off(c.edge.begin(), c.edge.end() - 1);
    lu_.emplace(off, std::move(diag), off, tiny_);

    z_.assign(n_, 0.0);
    z_[0] = gamma_;
    z_[n_ - 1] = corner;
    lu_->solve(z_);
    denom_ = 1.0 + z_[0] + corner_ratio_ * z_[n_ - 1];
    if (denom_ == 0.0) denom_ = std::numeric_limits<double>::epsilon();
  }

  void solve(std::vector<double>& b) const {
    lu_->solve(b);
    const double alpha = (b[0] + corner_ratio_ * b[n_ - 1]) / denom_;
    for (std::size_t i = 0; i < n_; ++i) b[i] -= alpha * z_[i];
  }

 private:
  std::size_t n_;
  double tiny_;
  double gamma_ = 0.0;
  double corner_ratio_ = 0.0;
  double denom_ = 1.0;
  std::optional<TridiagonalLU> lu_;
  std::vector<double> z_;
};

double bisect(const DiscreteOperator& op, std::size_t index, double lo, double hi) {
  // Invariant: count_below(lo) <= index < count_below(hi).
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 200; ++iter) {
    const double tol = 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + std::numeric_limits<double>::min();
    if (hi - lo <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(op, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rayleigh_quotient(const DiscreteOperator& op, std::span<const double> v) {
  std::vector<double> w(v.size());
  op.stiffness().multiply(v, w);
  const double num = dot(v, w);
  op.mass().multiply(v, w);
  return num / dot(v, w);
}

std::vector<double> inverse_iteration(const DiscreteOperator& op, double lambda,
                                      const std::vector<std::vector<double>>& previous, std::uint32_t seed) {
  const std::size_t n = op.size();
  const CyclicSolver solver(shifted(op, lambda));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = unit(rng);

  std::vector<double> bx(n);
  std::vector<double> bp(n);
  for (int iter = 0; iter < 4; ++iter) {
    op.mass().multiply(x, bx);
    solver.solve(bx);
    x.swap(bx);
    // Twice is enough for B-orthogonality at working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& p : previous) {
        op.mass().multiply(p, bp);
        const double proj = dot(x, bp);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * p[i];
      }
    }
    op.mass().multiply(x, bx);
    const double scale = 1.0 / std::sqrt(dot(x, bx));
    for (double& xi : x) xi *= scale;
  }
  return x;
}

}  // namespace

std::size_t count_below(const DiscreteOperator& op, double sigma) {
  return negative_pivots(shifted(op, sigma));
}

std::pair<double, double> spectral_bounds(const DiscreteOperator& op) {
  auto gershgorin = [](const CyclicTridiagonal& m) {
    const std::size_t n = m.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double radius = std::abs(m.edge[i]) + std::abs(m.edge[(i + n - 1) % n]);
      lo = std::min(lo, m.diag[i] - radius);
      hi = std::max(hi, m.diag[i] + radius);
    }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = gershgorin(op.stiffness());
  const auto [blo, bhi] = gershgorin(op.mass());
  if (!(blo > 0.0)) throw SolverError("spectral_bounds: mass matrix is not diagonally dominant");
  // lambda = v'Av / v'Bv with v'Bv in [blo, bhi] * |v|^2
  const double lo = std::min(alo / blo, alo / bhi);
  const double hi = std::max(ahi / blo, ahi / bhi);
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

SpectrumSlice eigen_interval(const DiscreteOperator& op, double lower, double upper) {
  const auto [gl, gu] = spectral_bounds(op);
  const double lo = std::max(lower, gl);
  const double hi = std::min(upper, gu);
  SpectrumSlice slice{{}, op.scheme(), op.grid()};
  if (!(lo < hi)) return slice;

  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t first = count_below(op, std::nextafter(lo, inf));
  const std::size_t last = count_below(op, std::nextafter(hi, inf));

  std::vector<std::vector<double>> found;
  for (std::size_t j = first; j < last; ++j) {
    EigenPair p;
    p.lambda = bisect(op, j, gl, std::nextafter(hi, inf));
    p.vector = inverse_iteration(op, p.lambda, found, static_cast<std::uint32_t>(0x9e3779b9u + j));
    // The cyclic inertia count wobbles within ~1e-9 of a double eigenvalue;
    // the Rayleigh quotient of the converged vector does not.
    p.lambda = rayleigh_quotient(op, p.vector);
    found.push_back(p.vector);
    p.rank_from_top = static_cast<int>(op.size() - j);
    finalize_pair(p, op);
    slice.pairs.push_back(std::move(p));
  }
  std::reverse(slice.pairs.begin(), slice.pairs.end());
  require_certified(slice, op);
  return slice;
}

}  // namespace nyqenv
