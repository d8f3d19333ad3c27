#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fspace {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// Construction-time gate of DenseSymMatrix.
class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(const std::string& what) : Error(what) {}
};

// Cholesky pivot failure; carries the zero-based index of the offending pivot.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(std::size_t iterations)
      : Error("eigen-iteration failed to converge within " + std::to_string(iterations) +
              " sweeps"),
        iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

// A map failed the numerical full-row-rank gate.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what) : Error(what) {}
};

// A decomposition misses at least one global index.
class NotCovering : public Error {
 public:
  explicit NotCovering(std::size_t missing_index)
      : Error("decomposition does not cover global index " + std::to_string(missing_index)),
        missing_index_(missing_index) {}
  std::size_t missing_index() const noexcept { return missing_index_; }

 private:
  std::size_t missing_index_;
};

// Malformed subdomain index set (unsorted, duplicate, empty, out of range).
class InvalidDecomposition : public Error {
 public:
  explicit InvalidDecomposition(const std::string& what) : Error(what) {}
};

class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& what) : Error(what) {}
};

// Self-adjointness gate of the Rayleigh quotient checks.
class NotSelfAdjoint : public Error {
 public:
  explicit NotSelfAdjoint(const std::string& what) : Error(what) {}
};

// PCG hit a non-positive curvature inner product; the input is not SPD.
class BreakdownDetected : public Error {
 public:
  explicit BreakdownDetected(const std::string& what) : Error(what) {}
};

// Independent certification routes disagree beyond tolerance.
class CertificationFailed : public Error {
 public:
  explicit CertificationFailed(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace fspace
