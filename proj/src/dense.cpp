#include "dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "nyqenv/error.hpp"

namespace nyqenv::dense {

namespace {

// Column-major view: element (i, j) lives at data[j*n + i], so the column
// sweeps in both phases below walk contiguous memory.
class ColumnMajor {
 public:
  ColumnMajor(std::vector<double>& data, std::size_t n) : data_(data.data()), n_(n) {}
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * n_ + i]; }

 private:
  double* data_;
  std::size_t n_;
};

// Householder tridiagonalization (EISPACK tred2). On exit d holds the
// diagonal, e[1..n-1] the subdiagonal and V the accumulated orthogonal factor.
void tridiagonalize(ColumnMajor v, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);

    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0.0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) with rotations applied to V
// (EISPACK tql2).
void ql_implicit(ColumnMajor v, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_iterations = 30 * n;
  std::size_t iterations = 0;
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      do {
        if (++iterations > max_iterations) {
          throw SolverError(fmt::format("eigensolver: implicit QL did not converge within {} sweeps", max_iterations));
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0.0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            const double upper = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * upper;
            v(k, ii) = c * v(k, ii) - s * upper;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw InvalidArgument("symmetric_eigen: matrix size mismatch");
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);
  if (n == 1) return {{a[0]}, {1.0}};

  ColumnMajor v(a, n);
  tridiagonalize(v, n, d, e);
  ql_implicit(v, n, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });

  SymmetricEigen out{std::vector<double>(n), std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    std::copy_n(a.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  return out;
}

std::vector<double> cholesky(const std::vector<double>& b, std::size_t n) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = b[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag > 0.0)) {
      throw SolverError(fmt::format("eigensolver: Cholesky failed at pivot {} (mass matrix not positive definite)", j));
    }
    const double ljj = std::sqrt(diag);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = b[i * n + j];
      const double* li = &l[i * n];
      const double* lj = &l[j * n];
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l[i * n + j] = s / ljj;
    }
  }
  return l;
}

namespace {

// Solves L x = y in place for each of the n rows of m (row r is one right-hand side).
void forward_rows(const std::vector<double>& l, std::size_t n, std::vector<double>& m) {
  for (std::size_t r = 0; r < n; ++r) {
    double* y = &m[r * n];
    for (std::size_t i = 0; i < n; ++i) {
      double s = y[i];
      const double* li = &l[i * n];
      for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
      y[i] = s / li[i];
    }
  }
}

}  // namespace

std::vector<double> reduce_generalized(const std::vector<double>& a, const std::vector<double>& l, std::size_t n) {
  std::vector<double> m = a;
  forward_rows(l, n, m);  // m = (L^{-1} A)^T since rows of A are its columns
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) std::swap(m[i * n + j], m[j * n + i]);
  forward_rows(l, n, m);  // m = (L^{-1} A L^{-T})^T
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = avg;
      m[j * n + i] = avg;
    }
  }
  return m;
}

void back_substitute_transposed(const std::vector<double>& l, std::size_t n, double* y) {
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * y[k];
    y[i] = s / l[i * n + i];
  }
}

}  // namespace nyqenv::dense
