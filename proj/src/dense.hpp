#pragma once

// Dense symmetric kernels behind eigen_full. Row-major storage throughout.

#include <cstddef>
#include <vector>

namespace nyqenv::dense {

struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k stored contiguously at [k*n, (k+1)*n)
};

/**
 * All eigenpairs of a symmetric matrix: Householder reduction to tridiagonal
 * form with accumulated reflections, then implicit-shift QL. Throws
 * SolverError when the QL sweeps exceed 30*n iterations in total.
 */
SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n);

// Lower Cholesky factor L of an SPD matrix (upper triangle zeroed). Throws
// SolverError if a pivot is not positive.
std::vector<double> cholesky(const std::vector<double>& b, std::size_t n);

// L^{-1} A L^{-T}, symmetrized.
std::vector<double> reduce_generalized(const std::vector<double>& a, const std::vector<double>& l,
                                       std::size_t n);

// Solves L^T x = y in place.
void back_substitute_transposed(const std::vector<double>& l, std::size_t n, double* y);

}  // namespace nyqenv::dense
