#pragma once

// Test-only reference implementations, algorithmically independent of the
// library: LU with partial pivoting for saddle-point systems, a cyclic
// Jacobi eigensolver, and a constrained-minimization oracle for
// minimum-norm preimages.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fspace/dense.hpp"

namespace oracles {

using fspace::DenseMatrix;
using fspace::DenseSymMatrix;
using fspace::Vector;

// Solve a general square system by LU with partial pivoting.
inline Vector lu_solve(DenseMatrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.dim() != n) throw std::runtime_error("lu_solve: shape");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    if (best == 0.0) throw std::runtime_error("lu_solve: singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

// Minimize x^T W x subject to R x = y via the stationarity system
// [W R^T; R 0] [x; mu] = [0; y].
inline Vector constrained_min_norm(const DenseMatrix& r, const DenseSymMatrix& w,
                                   const Vector& y) {
  const std::size_t h = r.rows();
  const std::size_t v = r.cols();
  DenseMatrix kkt(v + h, v + h);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) kkt(i, j) = w(i, j);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < v; ++j) {
      kkt(v + i, j) = r(i, j);
      kkt(j, v + i) = r(i, j);
    }
  Vector rhs(v + h);
  for (std::size_t i = 0; i < h; ++i) rhs[v + i] = y[i];
  Vector full = lu_solve(kkt, rhs);
  Vector x(v);
  for (std::size_t i = 0; i < v; ++i) x[i] = full[i];
  return x;
}

struct JacobiEig {
  Vector values;        // ascending
  DenseMatrix vectors;  // columns
};

// Cyclic Jacobi rotations; independent of the library's tridiagonal scheme.
inline JacobiEig jacobi_eig(const DenseSymMatrix& m, double tol = 1e-14) {
  const std::size_t n = m.dim();
  DenseMatrix a = m.matrix();
  DenseMatrix v = DenseMatrix::identity(n);

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * (1.0 + a.max_norm())) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(order[j], order[j]) < a(order[i], order[i])) std::swap(order[i], order[j]);

  JacobiEig out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// Dense inverse through the LU oracle (column by column).
inline DenseMatrix lu_inverse(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = 1.0;
    Vector col = lu_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace oracles
