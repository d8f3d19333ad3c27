#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fspace/cholesky.hpp"
#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/pseudoinverse.hpp"

namespace fspace {

// Overlapping cover of {0..global_dim-1}. Each subdomain is sorted and
// duplicate-free; subdomains may (and usually do) overlap each other.
class Decomposition {
 public:
  Decomposition(std::size_t global_dim, std::vector<std::vector<std::size_t>> subdomains)
      : global_dim_(global_dim), subdomains_(std::move(subdomains)) {
    if (global_dim_ == 0) throw InvalidDecomposition("global dimension must be positive");
    if (subdomains_.empty()) throw InvalidDecomposition("no subdomains");
    multiplicity_.assign(global_dim_, 0);
    offsets_.reserve(subdomains_.size());
    std::size_t offset = 0;
    for (const auto& sub : subdomains_) {
      if (sub.empty()) throw InvalidDecomposition("empty subdomain");
      for (std::size_t k = 0; k < sub.size(); ++k) {
        if (sub[k] >= global_dim_) throw InvalidDecomposition("index out of range");
        if (k > 0 && sub[k] <= sub[k - 1])
          throw InvalidDecomposition("subdomain indices must be sorted and duplicate-free");
        ++multiplicity_[sub[k]];
      }
      offsets_.push_back(offset);
      offset += sub.size();
    }
    total_dim_ = offset;
    for (std::size_t j = 0; j < global_dim_; ++j)
      if (multiplicity_[j] == 0) throw NotCovering(j);
  }

  std::size_t global_dim() const { return global_dim_; }
  std::size_t count() const { return subdomains_.size(); }
  std::size_t total_dim() const { return total_dim_; }  // sum of subdomain sizes
  const std::vector<std::size_t>& subdomain(std::size_t i) const { return subdomains_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }  // flat position of block i
  std::size_t multiplicity(std::size_t j) const { return multiplicity_[j]; }

  // one line per subdomain, space-separated zero-based indices
  std::string to_text() const {
    std::ostringstream out;
    for (const auto& sub : subdomains_) {
      for (std::size_t k = 0; k < sub.size(); ++k) {
        if (k > 0) out << ' ';
        out << sub[k];
      }
      out << '\n';
    }
    return out.str();
  }

  static Decomposition from_text(const std::string& text, std::size_t global_dim) {
    std::vector<std::vector<std::size_t>> subs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream tokens(line);
      std::vector<std::size_t> sub;
      std::string tok;
      while (tokens >> tok) {
        try {
          std::size_t pos = 0;
          const unsigned long long v = std::stoull(tok, &pos);
          if (pos != tok.size()) throw std::invalid_argument(tok);
          sub.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
          throw InvalidDecomposition("bad index token: " + tok);
        }
      }
      subs.push_back(std::move(sub));
    }
    return Decomposition(global_dim, std::move(subs));
  }

 private:
  std::size_t global_dim_;
  std::vector<std::vector<std::size_t>> subdomains_;
  std::vector<std::size_t> multiplicity_;
  std::vector<std::size_t> offsets_;
  std::size_t total_dim_ = 0;
};

// Element of the product space: one vector per subdomain.
class ProductVector {
 public:
  ProductVector(const Decomposition& d, std::vector<Vector> blocks) : blocks_(std::move(blocks)) {
    detail::require(blocks_.size() == d.count(), "ProductVector: block count");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      detail::require(blocks_[i].dim() == d.subdomain(i).size(), "ProductVector: block dim");
  }

  static ProductVector zeros(const Decomposition& d) {
    std::vector<Vector> blocks;
    blocks.reserve(d.count());
    for (std::size_t i = 0; i < d.count(); ++i) blocks.emplace_back(d.subdomain(i).size());
    return ProductVector(d, std::move(blocks));
  }

  static ProductVector from_flat(const Decomposition& d, const Vector& flat) {
    detail::require(flat.dim() == d.total_dim(), "ProductVector: flat dim");
    std::vector<Vector> blocks;
    blocks.reserve(d.count());
    for (std::size_t i = 0; i < d.count(); ++i) {
      Vector block(d.subdomain(i).size());
      for (std::size_t k = 0; k < block.dim(); ++k) block[k] = flat[d.offset(i) + k];
      blocks.push_back(std::move(block));
    }
    return ProductVector(d, std::move(blocks));
  }

  std::size_t count() const { return blocks_.size(); }
  const Vector& block(std::size_t i) const { return blocks_[i]; }
  Vector& block(std::size_t i) { return blocks_[i]; }

  Vector flatten() const {
    std::size_t total = 0;
    for (const Vector& b : blocks_) total += b.dim();
    Vector flat(total);
    std::size_t at = 0;
    for (const Vector& b : blocks_)
      for (std::size_t k = 0; k < b.dim(); ++k) flat[at++] = b[k];
    return flat;
  }

 private:
  std::vector<Vector> blocks_;
};

// sum of injections: u = sum_i E_i v_i
inline Vector scatter_sum(const Decomposition& d, const ProductVector& v) {
  Vector u(d.global_dim());
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto& sub = d.subdomain(i);
    const Vector& block = v.block(i);
    for (std::size_t k = 0; k < sub.size(); ++k) u[sub[k]] += block[k];
  }
  return u;
}

// per-subdomain restrictions: block i = E_i^T u
inline ProductVector gather_blocks(const Decomposition& d, const Vector& u) {
  detail::require(u.dim() == d.global_dim(), "gather_blocks: dim");
  ProductVector v = ProductVector::zeros(d);
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto& sub = d.subdomain(i);
    for (std::size_t k = 0; k < sub.size(); ++k) v.block(i)[k] = u[sub[k]];
  }
  return v;
}

// R maps the product space onto the global space; column (i, k) carries a
// single 1 in global row subdomain_i[k].
inline SurjectiveMap build_r_map(const Decomposition& d) {
  DenseMatrix r(d.global_dim(), d.total_dim());
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto& sub = d.subdomain(i);
    for (std::size_t k = 0; k < sub.size(); ++k) r(sub[k], d.offset(i) + k) = 1.0;
  }
  return SurjectiveMap(std::move(r));
}

enum class BlockVariant {
  full,      // B_i = E_i^T A E_i (exact subdomain solves)
  diagonal,  // B_i = diag(E_i^T A E_i) (subdomain Jacobi)
};

// Block-diagonal weight on the product space; block i is the principal
// submatrix of a on subdomain i (or its diagonal).
inline DenseSymMatrix build_block_b(const Decomposition& d, const DenseSymMatrix& a,
                                    BlockVariant variant = BlockVariant::full) {
  detail::require(a.dim() == d.global_dim(), "build_block_b: dim");
  DenseMatrix b(d.total_dim(), d.total_dim());
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto& sub = d.subdomain(i);
    const std::size_t at = d.offset(i);
    for (std::size_t k = 0; k < sub.size(); ++k) {
      if (variant == BlockVariant::diagonal) {
        b(at + k, at + k) = a(sub[k], sub[k]);
      } else {
        for (std::size_t l = 0; l < sub.size(); ++l) b(at + k, at + l) = a(sub[k], sub[l]);
      }
    }
  }
  return DenseSymMatrix(std::move(b));
}

namespace detail {

inline std::vector<CholeskyFactor> factor_blocks(const Decomposition& d,
                                                 const DenseSymMatrix& b) {
  std::vector<CholeskyFactor> factors;
  factors.reserve(d.count());
  for (std::size_t i = 0; i < d.count(); ++i) {
    const std::size_t size = d.subdomain(i).size();
    const std::size_t at = d.offset(i);
    DenseMatrix block(size, size);
    for (std::size_t k = 0; k < size; ++k)
      for (std::size_t l = 0; l < size; ++l) block(k, l) = b(at + k, at + l);
    factors.push_back(CholeskyFactor::compute(block));
  }
  return factors;
}

}  // namespace detail

// M^-1 = sum_i E_i B_i^-1 E_i^T assembled by scatter-adding block inverses.
inline DenseSymMatrix assemble_preconditioner(const Decomposition& d,
                                              const std::vector<CholeskyFactor>& block_factors) {
  DenseMatrix m_inv(d.global_dim(), d.global_dim());
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto& sub = d.subdomain(i);
    DenseMatrix inv = block_factors[i].inverse();
    for (std::size_t k = 0; k < sub.size(); ++k)
      for (std::size_t l = 0; l < sub.size(); ++l) m_inv(sub[k], sub[l]) += inv(k, l);
  }
  return DenseSymMatrix::symmetrize(m_inv);
}

inline DenseSymMatrix assemble_preconditioner(const Decomposition& d, const DenseSymMatrix& a,
                                              BlockVariant variant = BlockVariant::full) {
  DenseSymMatrix b = build_block_b(d, a, variant);
  return assemble_preconditioner(d, detail::factor_blocks(d, b));
}

// The assembled one-level overlapping Schwarz setup: map R, global matrix A,
// block weight B, preconditioner M^-1, and cached block factorizations for
// matrix-free preconditioner application.
class SchwarzOperators {
 public:
  SchwarzOperators(Decomposition d, DenseSymMatrix a, BlockVariant variant = BlockVariant::full)
      : decomposition_(std::move(d)),
        r_map_(build_r_map(decomposition_)),
        a_(std::move(a)),
        b_(build_block_b(decomposition_, a_, variant)),
        block_factors_(detail::factor_blocks(decomposition_, b_)),
        m_inv_(assemble_preconditioner(decomposition_, block_factors_)) {}

  const Decomposition& decomposition() const { return decomposition_; }
  const SurjectiveMap& r_map() const { return r_map_; }
  const DenseSymMatrix& a() const { return a_; }
  const DenseSymMatrix& b() const { return b_; }
  const DenseSymMatrix& m_inv() const { return m_inv_; }

  // z = M^-1 residual via gather / block solve / scatter-add, summed in
  // subdomain order (deterministic)
  Vector apply_preconditioner(const Vector& residual) const {
    detail::require(residual.dim() == decomposition_.global_dim(),
                    "apply_preconditioner: dim");
    Vector z(decomposition_.global_dim());
    Vector local;
    for (std::size_t i = 0; i < decomposition_.count(); ++i) {
      const auto& sub = decomposition_.subdomain(i);
      local = Vector(sub.size());
      for (std::size_t k = 0; k < sub.size(); ++k) local[k] = residual[sub[k]];
      Vector solved = block_factors_[i].solve(local);
      for (std::size_t k = 0; k < sub.size(); ++k) z[sub[k]] += solved[k];
    }
    return z;
  }

 private:
  Decomposition decomposition_;
  SurjectiveMap r_map_;
  DenseSymMatrix a_;
  DenseSymMatrix b_;
  std::vector<CholeskyFactor> block_factors_;
  DenseSymMatrix m_inv_;
};

inline Vector apply_preconditioner(const SchwarzOperators& ops, const Vector& residual) {
  return ops.apply_preconditioner(residual);
}

}  // namespace fspace
