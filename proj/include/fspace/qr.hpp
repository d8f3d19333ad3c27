#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fspace/dense.hpp"
#include "fspace/errors.hpp"

namespace fspace {

// Householder QR of an m x n matrix (m >= n): A = Q R with Q m x m
// orthogonal and R m x n upper trapezoidal.
struct QrResult {
  DenseMatrix q;  // m x m
  DenseMatrix r;  // m x n, zero below the diagonal
};

inline QrResult householder_qr(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  detail::require(m >= n, "householder_qr: expected rows >= cols");

  DenseMatrix r = a;
  DenseMatrix q = DenseMatrix::identity(m);
  std::vector<double> v(m);

  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;

    const double alpha = r(k, k) >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    v[k] = r(k, k) - alpha;
    vnorm2 += v[k] * v[k];
    for (std::size_t i = k + 1; i < m; ++i) {
      v[i] = r(i, k);
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // r := (I - beta v v^T) r on the trailing block
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i] * r(i, j);
      dot *= beta;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= dot * v[i];
    }
    // q := q (I - beta v v^T)
    for (std::size_t i = 0; i < m; ++i) {
      double* qi = q.row_ptr(i);
      double dot = 0.0;
      for (std::size_t j = k; j < m; ++j) dot += qi[j] * v[j];
      dot *= beta;
      for (std::size_t j = k; j < m; ++j) qi[j] -= dot * v[j];
    }
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
  }
  return QrResult{std::move(q), std::move(r)};
}

// Lower-triangular factor of the LQ factorization of a wide matrix
// (rows <= cols): A = L Q with Q having orthonormal rows, so A and L share
// singular values. Reflectors run along rows (contiguous storage).
inline DenseMatrix lq_lower_factor(DenseMatrix a) {
  const std::size_t h = a.rows();
  const std::size_t v = a.cols();
  detail::require(v >= h, "lq_lower_factor: expected cols >= rows");
  std::vector<double> w(v, 0.0);

  for (std::size_t k = 0; k < h; ++k) {
    double* rk = a.row_ptr(k);
    double norm = 0.0;
    for (std::size_t j = k; j < v; ++j) norm += rk[j] * rk[j];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;  // leaves an exact zero pivot

    const double alpha = rk[k] >= 0.0 ? -norm : norm;
    w[k] = rk[k] - alpha;
    double wnorm2 = w[k] * w[k];
    for (std::size_t j = k + 1; j < v; ++j) {
      w[j] = rk[j];
      wnorm2 += w[j] * w[j];
    }
    const double beta = 2.0 / wnorm2;
    rk[k] = alpha;
    for (std::size_t j = k + 1; j < v; ++j) rk[j] = 0.0;
    for (std::size_t i = k + 1; i < h; ++i) {
      double* ri = a.row_ptr(i);
      double dot = 0.0;
      for (std::size_t j = k; j < v; ++j) dot += ri[j] * w[j];
      dot *= beta;
      for (std::size_t j = k; j < v; ++j) ri[j] -= dot * w[j];
    }
  }

  DenseMatrix l(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j <= i; ++j) l(i, j) = a(i, j);
  return l;
}

// Orthonormal basis for the null space of a wide matrix (rows <= cols) of
// full row rank: the trailing columns of Q from the QR of the transpose.
// Result is cols x (cols - rows); each basis vector is a column.
inline DenseMatrix kernel_basis(const DenseMatrix& wide) {
  const std::size_t rows = wide.rows();
  const std::size_t cols = wide.cols();
  detail::require(cols >= rows, "kernel_basis: expected cols >= rows");
  QrResult qr = householder_qr(wide.transpose());
  DenseMatrix basis(cols, cols - rows);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols - rows; ++j) basis(i, j) = qr.q(i, rows + j);
  return basis;
}

}  // namespace fspace
