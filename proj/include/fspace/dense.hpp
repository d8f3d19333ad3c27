#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "fspace/errors.hpp"

namespace fspace {

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw DimensionMismatch(what);
}

inline void require_finite(const std::vector<double>& entries, const char* what) {
  for (double v : entries) {
    if (!std::isfinite(v)) throw Error(std::string(what) + ": non-finite entry");
  }
}

// Type-erased slot for a lazily computed, shared factorization.
// Complete here so DenseSymMatrix can allocate it; filled in cholesky.hpp.
struct SpdCache {
  std::once_flag once;
  std::shared_ptr<const void> payload;
  std::exception_ptr error;
};

}  // namespace detail

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : v_(dim, fill) {}
  Vector(std::initializer_list<double> init) : v_(init) {
    detail::require_finite(v_, "Vector");
  }
  static Vector from_entries(std::vector<double> entries) {
    detail::require_finite(entries, "Vector");
    Vector v;
    v.v_ = std::move(entries);
    return v;
  }

  std::size_t dim() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const double* data() const noexcept { return v_.data(); }
  double* data() noexcept { return v_.data(); }
  std::span<const double> entries() const noexcept { return v_; }

  bool is_finite() const noexcept {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
  }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> v_;
};

inline double dot(const Vector& a, const Vector& b) {
  detail::require(a.dim() == b.dim(), "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double norm_inf(const Vector& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

// y += alpha * x
inline void axpy(double alpha, const Vector& x, Vector& y) {
  detail::require(x.dim() == y.dim(), "axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

inline Vector operator+(const Vector& a, const Vector& b) {
  detail::require(a.dim() == b.dim(), "vector add: dimension mismatch");
  Vector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector operator-(const Vector& a, const Vector& b) {
  detail::require(a.dim() == b.dim(), "vector sub: dimension mismatch");
  Vector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector operator*(double s, const Vector& a) {
  Vector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    detail::require(a_.size() == rows_ * cols_, "DenseMatrix: entry count");
    detail::require_finite(a_, "DenseMatrix");
  }
  DenseMatrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      detail::require(row.size() == cols_, "DenseMatrix: ragged initializer");
      a_.insert(a_.end(), row.begin(), row.end());
    }
    detail::require_finite(a_, "DenseMatrix");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  const double* row_ptr(std::size_t i) const noexcept { return a_.data() + i * cols_; }
  double* row_ptr(std::size_t i) noexcept { return a_.data() + i * cols_; }
  std::span<const double> entries() const noexcept { return a_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  double max_norm() const noexcept {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  bool is_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.cols() == b.rows(), "matmul: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t inner = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;  // scatter maps are mostly zeros
      const double* bk = b.row_ptr(k);
      for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Vector operator*(const DenseMatrix& a, const Vector& x) {
  detail::require(a.cols() == x.dim(), "matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add: dimension mismatch");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub: dimension mismatch");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

class CholeskyFactor;

// Symmetric matrix with full dense storage. Construction enforces
// ||M - M^T||_max <= 1e-12 * ||M||_max and then averages the two triangles,
// so downstream identities see an exactly symmetric operand.
class DenseSymMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  DenseSymMatrix() : cache_(std::make_shared<detail::SpdCache>()) {}

  explicit DenseSymMatrix(const DenseMatrix& m) : DenseSymMatrix() {
    detail::require(m.rows() == m.cols(), "DenseSymMatrix: not square");
    const double scale = m.max_norm();
    double asym = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = i + 1; j < m.cols(); ++j)
        asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > kSymmetryTolerance * scale) {
      throw NotSymmetric("asymmetry " + std::to_string(asym) + " exceeds tolerance");
    }
    m_ = average_with_transpose(m);
  }

  DenseSymMatrix(std::initializer_list<std::initializer_list<double>> init)
      : DenseSymMatrix(DenseMatrix(init)) {}

  // Unconditional (M + M^T)/2. For results of similarity transforms whose
  // asymmetry is known round-off, not data error.
  static DenseSymMatrix symmetrize(const DenseMatrix& m) {
    detail::require(m.rows() == m.cols(), "symmetrize: not square");
    DenseSymMatrix s;
    s.m_ = average_with_transpose(m);
    return s;
  }

  static DenseSymMatrix identity(std::size_t n) { return DenseSymMatrix(DenseMatrix::identity(n)); }

  static DenseSymMatrix diagonal(const Vector& d) {
    DenseMatrix m(d.dim(), d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
    return DenseSymMatrix(m);
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const DenseMatrix& matrix() const noexcept { return m_; }
  double max_norm() const noexcept { return m_.max_norm(); }

  // Cached Cholesky factorization; throws NotPositiveDefinite on first
  // failure and on every later call. Defined in cholesky.hpp.
  const CholeskyFactor& factor() const;
  bool is_spd() const noexcept;

 private:
  static DenseMatrix average_with_transpose(const DenseMatrix& m) {
    DenseMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      r(i, i) = m(i, i);
      for (std::size_t j = i + 1; j < m.cols(); ++j) {
        const double v = 0.5 * (m(i, j) + m(j, i));
        r(i, j) = v;
        r(j, i) = v;
      }
    }
    return r;
  }

  DenseMatrix m_;
  std::shared_ptr<detail::SpdCache> cache_;

  friend class CholeskyFactor;
  template <typename T>
  friend const T& spd_cache_get(const DenseSymMatrix&);
};

inline Vector operator*(const DenseSymMatrix& a, const Vector& x) { return a.matrix() * x; }
inline DenseMatrix operator*(const DenseSymMatrix& a, const DenseMatrix& b) {
  return a.matrix() * b;
}
inline DenseMatrix operator*(const DenseMatrix& a, const DenseSymMatrix& b) {
  return a * b.matrix();
}
inline DenseSymMatrix operator*(double s, const DenseSymMatrix& a) {
  return DenseSymMatrix::symmetrize(s * a.matrix());
}

// (x, y)_W = (W x, y)
inline double weighted_dot(const DenseSymMatrix& w, const Vector& x, const Vector& y) {
  return dot(w * x, y);
}

inline double weighted_norm(const DenseSymMatrix& w, const Vector& x) {
  return std::sqrt(std::max(0.0, weighted_dot(w, x, x)));
}

}  // namespace fspace
