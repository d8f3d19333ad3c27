#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "fspace/cholesky.hpp"
#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/qr.hpp"

namespace fspace {

// Wide matrix R (rows <= cols) of full row rank, i.e. a surjection onto the
// target space. Construction gates sigma_min / sigma_max >= 1e-10. The
// singular values are estimated on the triangular factor of an LQ
// factorization (same singular values as R, no Gram squaring, so ratios far
// below sqrt(machine epsilon) remain detectable); the factor is kept as the
// rank witness.
class SurjectiveMap {
 public:
  static constexpr double kRankTolerance = 1e-10;

  explicit SurjectiveMap(DenseMatrix map) : map_(std::move(map)), witness_(gate(map_)) {}

  const DenseMatrix& matrix() const { return map_; }
  std::size_t target_dim() const { return map_.rows(); }  // rows
  std::size_t source_dim() const { return map_.cols(); }  // cols

  double sigma_min() const { return witness_.sigma_min; }
  double sigma_max() const { return witness_.sigma_max; }

  Vector apply(const Vector& v) const { return map_ * v; }
  Vector apply_transposed(const Vector& u) const {
    detail::require(u.dim() == map_.rows(), "SurjectiveMap: adjoint dim");
    Vector out(map_.cols());
    for (std::size_t i = 0; i < map_.rows(); ++i) {
      const double ui = u[i];
      const double* row = map_.row_ptr(i);
      for (std::size_t j = 0; j < map_.cols(); ++j) out[j] += row[j] * ui;
    }
    return out;
  }

 private:
  struct Witness {
    DenseMatrix lower;  // triangular factor, sigma(lower) = sigma(map)
    double sigma_min;
    double sigma_max;
  };

  static Witness gate(const DenseMatrix& m) {
    detail::require(m.rows() >= 1, "SurjectiveMap: empty target space");
    detail::require(m.cols() >= m.rows(), "SurjectiveMap: expected rows <= cols");
    const std::size_t h = m.rows();
    DenseMatrix l = lq_lower_factor(m);
    for (std::size_t i = 0; i < h; ++i)
      if (l(i, i) == 0.0) throw RankDeficient("SurjectiveMap: zero pivot in rank witness");

    auto apply_llt = [&](const Vector& x) {
      Vector t(h);  // t = L^T x
      for (std::size_t i = 0; i < h; ++i) {
        const double xi = x[i];
        const double* li = l.row_ptr(i);
        for (std::size_t j = 0; j <= i; ++j) t[j] += li[j] * xi;
      }
      Vector y(h);  // y = L t
      for (std::size_t i = 0; i < h; ++i) {
        const double* li = l.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += li[j] * t[j];
        y[i] = s;
      }
      return y;
    };
    auto apply_llt_inv = [&](const Vector& x) {
      Vector t(h);  // L t = x (forward substitution)
      for (std::size_t i = 0; i < h; ++i) {
        const double* li = l.row_ptr(i);
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= li[j] * t[j];
        t[i] = s / li[i];
      }
      Vector y(h);  // L^T y = t (back substitution)
      for (std::size_t ii = h; ii-- > 0;) {
        double s = t[ii];
        for (std::size_t k = ii + 1; k < h; ++k) s -= l(k, ii) * y[k];
        y[ii] = s / l(ii, ii);
      }
      return y;
    };

    const double lam_max = detail::power_iteration_norm(h, apply_llt, 40);
    const double lam_min_inv = detail::power_iteration_norm(h, apply_llt_inv, 40);
    const double sigma_max = std::sqrt(std::max(lam_max, 0.0));
    const double sigma_min =
        (std::isfinite(lam_min_inv) && lam_min_inv > 0.0) ? std::sqrt(1.0 / lam_min_inv) : 0.0;
    if (!(sigma_min >= kRankTolerance * sigma_max) || sigma_max == 0.0)
      throw RankDeficient("SurjectiveMap: smallest singular value below rank tolerance");
    return Witness{std::move(l), sigma_min, sigma_max};
  }

  DenseMatrix map_;
  Witness witness_;
};

// Right inverse of a surjection selecting the preimage of minimal norm
// (minimal W-norm when a weight W is attached). dagger has shape
// source_dim x target_dim and satisfies map * dagger = I.
class PseudoInverseOperator {
 public:
  PseudoInverseOperator(SurjectiveMap source, std::optional<DenseSymMatrix> weight,
                        DenseMatrix dagger, DenseSymMatrix weighted_gram)
      : source_(std::move(source)),
        weight_(std::move(weight)),
        dagger_(std::move(dagger)),
        weighted_gram_(std::move(weighted_gram)) {
    detail::require(dagger_.rows() == source_.source_dim() &&
                        dagger_.cols() == source_.target_dim(),
                    "PseudoInverseOperator: dagger shape");
  }

  const SurjectiveMap& source() const { return source_; }
  const DenseMatrix& dagger() const { return dagger_; }
  bool has_weight() const { return weight_.has_value(); }
  const DenseSymMatrix& weight() const {
    detail::require(weight_.has_value(), "PseudoInverseOperator: no weight attached");
    return *weight_;
  }

  // R W^-1 R^T (W = identity when unweighted), factor cached
  const DenseSymMatrix& weighted_gram() const { return weighted_gram_; }

  // minimal-norm preimage of y
  Vector apply(const Vector& y) const { return dagger_ * y; }

  // dagger^T W dagger: the energy matrix of the selected preimages.
  // By construction it inverts weighted_gram() up to round-off.
  DenseSymMatrix dagger_gram() const {
    if (weight_) {
      DenseMatrix wd = (*weight_) * dagger_;
      return DenseSymMatrix::symmetrize(dagger_.transpose() * wd);
    }
    return DenseSymMatrix::symmetrize(dagger_.transpose() * dagger_);
  }

 private:
  SurjectiveMap source_;
  std::optional<DenseSymMatrix> weight_;
  DenseMatrix dagger_;
  DenseSymMatrix weighted_gram_;
};

// dagger = R^T (R R^T)^-1
inline PseudoInverseOperator pseudo_inverse(const SurjectiveMap& r) {
  DenseSymMatrix gram = DenseSymMatrix::symmetrize(r.matrix() * r.matrix().transpose());
  const CholeskyFactor* fg = nullptr;
  try {
    fg = &gram.factor();
  } catch (const NotPositiveDefinite&) {
    throw RankDeficient("pseudo_inverse: gram matrix numerically singular");
  }
  DenseMatrix gi_r = fg->solve(r.matrix());  // (R R^T)^-1 R
  return PseudoInverseOperator(r, std::nullopt, gi_r.transpose(), gram);
}

// dagger = W^-1 R^T (R W^-1 R^T)^-1
inline PseudoInverseOperator weighted_pseudo_inverse(const SurjectiveMap& r,
                                                     const DenseSymMatrix& b) {
  detail::require(b.dim() == r.source_dim(), "weighted_pseudo_inverse: weight dim");
  const CholeskyFactor& fb = b.factor();          // NotPositiveDefinite propagates
  DenseMatrix x = fb.solve(r.matrix().transpose());  // W^-1 R^T
  DenseSymMatrix schur = DenseSymMatrix::symmetrize(r.matrix() * x);
  const CholeskyFactor* fs = nullptr;
  try {
    fs = &schur.factor();
  } catch (const NotPositiveDefinite&) {
    throw RankDeficient("weighted_pseudo_inverse: weighted gram numerically singular");
  }
  DenseMatrix dagger_t = fs->solve(x.transpose());  // (R W^-1 R^T)^-1 R W^-1
  return PseudoInverseOperator(r, b, dagger_t.transpose(), schur);
}

// P = dagger * map: the W-orthogonal projector onto the complement of the
// kernel of map (idempotent; self-adjoint in the W inner product).
inline DenseMatrix projector(const PseudoInverseOperator& p) {
  return p.dagger() * p.source().matrix();
}

// max-norm residual of (R W^-1 R^T) * (dagger^T W dagger) - I; the two
// factors are mutually inverse for any SPD weight.
inline double schur_identity_check(const SurjectiveMap& r, const DenseSymMatrix& b) {
  PseudoInverseOperator op = weighted_pseudo_inverse(r, b);
  DenseMatrix prod = op.weighted_gram() * op.dagger_gram().matrix();
  const std::size_t n = prod.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

// Orthonormal basis of Ker(map) as columns (source_dim x (source_dim - target_dim)).
inline DenseMatrix kernel_basis(const SurjectiveMap& r) { return kernel_basis(r.matrix()); }

}  // namespace fspace
