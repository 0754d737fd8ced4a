#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "nyqenv/operator.hpp"

namespace nyqenv {

// Residual bound relative to ||A||_inf.
inline constexpr double kEigenTolerance = 1e-10;
inline constexpr double kMassNormTolerance = 1e-12;
// Dense path bound on N.
inline constexpr std::size_t kDenseLimit = 4096;

/// One eigenpair of A v = lambda B v.
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;  // B-normalized, largest-magnitude entry positive
  double residual = 0.0;       // ||A v - lambda B v||_2
  int rank_from_top = 0;       // 1 = largest eigenvalue of the full spectrum
};

/// Eigenpairs sorted by descending lambda.
struct SpectrumSlice {
  std::vector<EigenPair> pairs;
  Scheme scheme = Scheme::CentralDifference;
  Grid grid;

  std::size_t size() const noexcept { return pairs.size(); }
  const EigenPair& rank(int r) const;  // by rank_from_top
  double max_residual() const noexcept;
};

/**
 * Full spectrum of the pair (A, B).
 *
 * B = L L^T by Cholesky reduces the problem to L^{-1} A L^{-T}, which is
 * tridiagonalized by Householder reflections and diagonalized by implicit-shift
 * QL; vectors are back-transformed with L^{-T}. Equal eigenvalues (within the
 * residual tolerance) are ordered by the index of the vector's largest entry.
 * Every returned pair is certified; a failure throws SolverError.
 */
SpectrumSlice eigen_full(const DiscreteOperator& op);

/**
 * The k largest eigenvalues, descending. Throws SolverError if a negative
 * eigenvalue outranks the k-th one in magnitude, i.e. when "largest magnitude"
 * and "largest algebraic" selections would disagree.
 */
SpectrumSlice top_k(const DiscreteOperator& op, std::size_t k);

struct Certificate {
  double residual = 0.0;          // ||A v - lambda B v||_2
  double mass_norm_error = 0.0;   // |v^T B v - 1|
  double residual_bound = 0.0;    // kEigenTolerance * ||A||_inf
  bool passed = false;
};

Certificate certify(const EigenPair& pair, const DiscreteOperator& op);

/// Number of eigenvalues of (A, B) strictly below sigma, from the inertia of A - sigma B.
std::size_t count_below(const DiscreteOperator& op, double sigma);

/// Interval guaranteed to contain the whole spectrum (Gershgorin on A and B).
std::pair<double, double> spectral_bounds(const DiscreteOperator& op);

/**
 * Eigenpairs with lambda in (lower, upper], found without forming dense
 * matrices: bisection on the inertia count of the cyclic-tridiagonal A - sigma B
 * and inverse iteration for the vectors. O(N) per step, so it serves grids far
 * beyond kDenseLimit. Result is descending with exact rank_from_top.
 */
SpectrumSlice eigen_interval(const DiscreteOperator& op, double lower, double upper);

}  // namespace nyqenv
