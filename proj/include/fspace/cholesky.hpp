#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "fspace/dense.hpp"
#include "fspace/errors.hpp"

namespace fspace {

// Lower-triangular Cholesky factor L with L L^T = M.
class CholeskyFactor {
 public:
  static CholeskyFactor compute(const DenseSymMatrix& m) { return compute(m.matrix()); }

  // Factor a matrix already known symmetric; reads the lower triangle.
  static CholeskyFactor compute(const DenseMatrix& m) {
    detail::require(m.rows() == m.cols(), "cholesky: not square");
    const std::size_t n = m.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = m(j, j);
      const double* lj = l.row_ptr(j);
      for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
      if (!(d > 0.0)) throw NotPositiveDefinite(j);
      const double ljj = std::sqrt(d);
      l(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = m(i, j);
        const double* li = l.row_ptr(i);
        for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
        l(i, j) = s / ljj;
      }
    }
    return CholeskyFactor(std::move(l));
  }

  std::size_t dim() const noexcept { return l_.rows(); }
  const DenseMatrix& lower() const noexcept { return l_; }

  // L L^T x = rhs
  Vector solve(const Vector& rhs) const {
    detail::require(rhs.dim() == dim(), "cholesky solve: dimension mismatch");
    Vector y = solve_lower(rhs);
    return solve_lower_transposed(y);
  }

  // L y = rhs (forward substitution)
  Vector solve_lower(const Vector& rhs) const {
    const std::size_t n = dim();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* li = l_.row_ptr(i);
      double s = rhs[i];
      for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
      y[i] = s / li[i];
    }
    return y;
  }

  // L^T x = rhs (back substitution)
  Vector solve_lower_transposed(const Vector& rhs) const {
    const std::size_t n = dim();
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
      double s = rhs[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * x[k];
      x[ii] = s / l_(ii, ii);
    }
    return x;
  }

  // L L^T X = rhs, column-block right-hand sides. Row sweeps keep the inner
  // loops contiguous over the right-hand-side columns.
  DenseMatrix solve(const DenseMatrix& rhs) const {
    return solve_lower_transposed(solve_lower(rhs));
  }

  // L X = rhs
  DenseMatrix solve_lower(const DenseMatrix& rhs) const {
    detail::require(rhs.rows() == dim(), "cholesky solve: dimension mismatch");
    const std::size_t n = dim(), m = rhs.cols();
    DenseMatrix x = rhs;
    for (std::size_t i = 0; i < n; ++i) {
      double* xi = x.row_ptr(i);
      const double* li = l_.row_ptr(i);
      for (std::size_t k = 0; k < i; ++k) {
        const double lik = li[k];
        if (lik == 0.0) continue;
        const double* xk = x.row_ptr(k);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= lik * xk[j];
      }
      const double inv = 1.0 / li[i];
      for (std::size_t j = 0; j < m; ++j) xi[j] *= inv;
    }
    return x;
  }

  // L^T X = rhs
  DenseMatrix solve_lower_transposed(const DenseMatrix& rhs) const {
    detail::require(rhs.rows() == dim(), "cholesky solve: dimension mismatch");
    const std::size_t n = dim(), m = rhs.cols();
    DenseMatrix x = rhs;
    for (std::size_t ii = n; ii-- > 0;) {
      double* xi = x.row_ptr(ii);
      for (std::size_t k = ii + 1; k < n; ++k) {
        const double lki = l_(k, ii);
        if (lki == 0.0) continue;
        const double* xk = x.row_ptr(k);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= lki * xk[j];
      }
      const double inv = 1.0 / l_(ii, ii);
      for (std::size_t j = 0; j < m; ++j) xi[j] *= inv;
    }
    return x;
  }

  DenseMatrix inverse() const { return solve(DenseMatrix::identity(dim())); }

 private:
  explicit CholeskyFactor(DenseMatrix l) : l_(std::move(l)) {}
  DenseMatrix l_;
};

inline const CholeskyFactor& DenseSymMatrix::factor() const {
  detail::SpdCache& cache = *cache_;
  std::call_once(cache.once, [&] {
    try {
      cache.payload = std::make_shared<const CholeskyFactor>(CholeskyFactor::compute(m_));
    } catch (...) {
      cache.error = std::current_exception();
    }
  });
  if (cache.error) std::rethrow_exception(cache.error);
  return *static_cast<const CholeskyFactor*>(cache.payload.get());
}

inline bool DenseSymMatrix::is_spd() const noexcept {
  try {
    factor();
    return true;
  } catch (...) {
    return false;
  }
}

// Lower-triangular factor of an SPD matrix; throws NotPositiveDefinite
// with the failing pivot index otherwise.
inline DenseMatrix cholesky(const DenseSymMatrix& m) { return m.factor().lower(); }

inline Vector solve_spd(const DenseSymMatrix& m, const Vector& rhs) {
  detail::require(rhs.dim() == m.dim(), "solve_spd: dimension mismatch");
  return m.factor().solve(rhs);
}

inline DenseMatrix solve_spd(const DenseSymMatrix& m, const DenseMatrix& rhs) {
  detail::require(rhs.rows() == m.dim(), "solve_spd: dimension mismatch");
  return m.factor().solve(rhs);
}

namespace detail {

// Deterministic start vector for the power iterations: not axis-aligned, so
// it has a component on every eigenvector of typical test operators.
inline Vector power_start(std::size_t n) {
  Vector v(n);
  double x = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    x = std::fmod(x * 997.0 + 0.123456789, 1.0);
    v[i] = 0.5 + x;
  }
  return v;
}

template <typename Apply>
inline double power_iteration_norm(std::size_t n, Apply&& apply, std::size_t iters) {
  Vector v = power_start(n);
  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    Vector w = apply((1.0 / nv) * v);
    lambda = std::sqrt(dot(w, w));
    v = std::move(w);
  }
  return lambda;
}

}  // namespace detail

// Power-iteration estimate of the spectral norm ||M||_2.
inline double spectral_norm_estimate(const DenseSymMatrix& m, std::size_t iters = 20) {
  return detail::power_iteration_norm(m.dim(), [&](const Vector& v) { return m * v; }, iters);
}

// ||M||_2 * ||M^-1||_2 estimated by forward and inverse power iterations.
inline double condition_estimate(const DenseSymMatrix& m, std::size_t iters = 20) {
  const CholeskyFactor& f = m.factor();
  const double largest =
      detail::power_iteration_norm(m.dim(), [&](const Vector& v) { return m * v; }, iters);
  const double inv_largest =
      detail::power_iteration_norm(m.dim(), [&](const Vector& v) { return f.solve(v); }, iters);
  return largest * inv_largest;
}

}  // namespace fspace
