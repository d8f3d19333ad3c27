#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "fspace/cholesky.hpp"
#include "fspace/dense.hpp"
#include "fspace/errors.hpp"

namespace fspace {

struct SymEigResult {
  Vector values;        // ascending
  DenseMatrix vectors;  // orthonormal, column j pairs with values[j]
};

struct GenSymEigResult {
  Vector values;        // ascending eigenvalues of M x = lambda W x
  DenseMatrix vectors;  // W-orthonormal columns
};

namespace detail {

// Householder reduction to tridiagonal form; `a` is overwritten with the
// accumulated orthogonal transformation Q (Q^T A Q = tridiag(d, e)).
// d: diagonal, e: subdiagonal with e[0] = 0.
inline void tridiagonalize(DenseMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          double* aj = a.row_ptr(j);
          const double* ai = a.row_ptr(i);
          for (std::size_t k = 0; k <= j; ++k) aj[k] -= f * e[k] + g * ai[k];
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
        for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
  }
}

// Implicit QL with Wilkinson shifts on tridiag(d, e). `e` is renumbered on
// entry so e[m] couples positions (m, m+1). `zr` holds the transformation
// transposed (row r = column r of Q): each rotation then touches two
// contiguous rows. Sweep budget is 30 * n in total.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, DenseMatrix& zr) {
  using std::abs;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
  if (n <= 1) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (std::ptrdiff_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const std::size_t budget = 30 * static_cast<std::size_t>(n);
  std::size_t sweeps = 0;

  for (std::ptrdiff_t l = 0; l < n; ++l) {
    std::ptrdiff_t m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++sweeps > budget) throw ConvergenceFailure(budget);
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::ptrdiff_t i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double* zi = zr.row_ptr(i);
          double* zi1 = zr.row_ptr(i + 1);
          for (std::ptrdiff_t k = 0; k < n; ++k) {
            f = zi1[k];
            zi1[k] = s * zi[k] + c * f;
            zi[k] = c * zi[k] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

// Full symmetric eigendecomposition. Eigenvalues ascending, eigenvector
// matrix orthonormal. Throws ConvergenceFailure after 30 * dim QL sweeps.
inline SymEigResult sym_eig(const DenseSymMatrix& m) {
  const std::size_t n = m.dim();
  DenseMatrix work = m.matrix();
  std::vector<double> d, e;
  detail::tridiagonalize(work, d, e);

  // store Q transposed so QL rotations stream along rows
  DenseMatrix zr = work.transpose();
  detail::ql_implicit(d, e, zr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SymEigResult result{Vector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    result.values[j] = d[order[j]];
    const double* zrow = zr.row_ptr(order[j]);
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = zrow[i];
  }
  return result;
}

// Generalized symmetric-definite problem M x = lambda W x, reduced with the
// Cholesky factor of W to a standard symmetric problem on L^-1 M L^-T.
inline GenSymEigResult gen_sym_eig(const DenseSymMatrix& m, const DenseSymMatrix& w) {
  detail::require(m.dim() == w.dim(), "gen_sym_eig: dimension mismatch");
  const CholeskyFactor& lw = w.factor();
  DenseMatrix half = lw.solve_lower(m.matrix());
  DenseMatrix reduced = lw.solve_lower(half.transpose());
  SymEigResult se = sym_eig(DenseSymMatrix::symmetrize(reduced));
  DenseMatrix vectors = lw.solve_lower_transposed(se.vectors);
  return GenSymEigResult{std::move(se.values), std::move(vectors)};
}

}  // namespace fspace
