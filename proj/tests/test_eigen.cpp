#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fspace/dense.hpp"
#include "fspace/eigen.hpp"
#include "fspace/errors.hpp"

using namespace fspace;

namespace {

double eig_residual(const DenseSymMatrix& m, const SymEigResult& r) {
  const std::size_t n = m.dim();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = r.vectors.column(j);
    Vector mv = m * v;
    axpy(-r.values[j], v, mv);
    worst = std::max(worst, norm2(mv));
  }
  return worst;
}

double orthonormality_defect(const DenseMatrix& v) {
  DenseMatrix g = v.transpose() * v;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_CASE("eigenvalues of the 3-point second difference matrix, n = 3") {
  // closed form: 2 - 2 cos(k pi / 4), k = 1..3
  DenseSymMatrix m(DenseMatrix{{2.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 2.0}});
  SymEigResult r = sym_eig(m);
  const double s2 = std::sqrt(2.0);
  REQUIRE(r.values[0] == Catch::Approx(2.0 - s2).margin(1e-13));
  REQUIRE(r.values[1] == Catch::Approx(2.0).margin(1e-13));
  REQUIRE(r.values[2] == Catch::Approx(2.0 + s2).margin(1e-13));
  REQUIRE(eig_residual(m, r) < 1e-13);
  REQUIRE(orthonormality_defect(r.vectors) < 1e-14);
}

TEST_CASE("two by two with known spectrum") {
  DenseSymMatrix m(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}});
  SymEigResult r = sym_eig(m);
  REQUIRE(r.values[0] == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(r.values[1] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("diagonal input comes back sorted ascending") {
  DenseSymMatrix m = DenseSymMatrix::diagonal(Vector{5.0, -1.0, 3.0, 0.0});
  SymEigResult r = sym_eig(m);
  REQUIRE(r.values[0] == Catch::Approx(-1.0).margin(1e-14));
  REQUIRE(r.values[1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(r.values[2] == Catch::Approx(3.0).margin(1e-14));
  REQUIRE(r.values[3] == Catch::Approx(5.0).margin(1e-14));
}

TEST_CASE("one by one") {
  DenseSymMatrix m = DenseSymMatrix::diagonal(Vector{4.25});
  SymEigResult r = sym_eig(m);
  REQUIRE(r.values[0] == 4.25);
  REQUIRE(std::abs(std::abs(r.vectors(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("second difference matrix at larger size matches the closed form") {
  const std::size_t n = 60;
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) {
      t(i, i + 1) = -1.0;
      t(i + 1, i) = -1.0;
    }
  }
  DenseSymMatrix m(t);
  SymEigResult r = sym_eig(m);
  const double pi = 3.14159265358979323846;
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = 2.0 - 2.0 * std::cos((k + 1) * pi / (n + 1));
    REQUIRE(r.values[k] == Catch::Approx(expected).margin(1e-11));
  }
  REQUIRE(eig_residual(m, r) < 1e-11);
  REQUIRE(orthonormality_defect(r.vectors) < 1e-12);
}

TEST_CASE("dense symmetric matrix with multiple clustered eigenvalues") {
  // Householder-reflected diagonal: Q D Q^T with a deterministic reflector
  const std::size_t n = 8;
  Vector diag_vals{1.0, 1.0, 1.0, 2.0, 2.0, 5.0, 5.0, 9.0};
  Vector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(1.0 + static_cast<double>(i));
  const double un = norm2(u);
  for (std::size_t i = 0; i < n; ++i) u[i] /= un;
  DenseMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * u[i] * u[j];
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = diag_vals[i];
  DenseSymMatrix m = DenseSymMatrix::symmetrize(q * d * q.transpose());

  SymEigResult r = sym_eig(m);
  Vector sorted = diag_vals;  // already ascending
  for (std::size_t k = 0; k < n; ++k)
    REQUIRE(r.values[k] == Catch::Approx(sorted[k]).margin(1e-12));
  REQUIRE(eig_residual(m, r) < 1e-12);
  REQUIRE(orthonormality_defect(r.vectors) < 1e-13);
}

TEST_CASE("generalized problem on diagonal matrices") {
  // M v = lambda W v with M = diag(2, 8), W = diag(1, 2): lambdas {2, 4}
  DenseSymMatrix m = DenseSymMatrix::diagonal(Vector{2.0, 8.0});
  DenseSymMatrix w = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
  GenSymEigResult r = gen_sym_eig(m, w);
  REQUIRE(r.values[0] == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(r.values[1] == Catch::Approx(4.0).margin(1e-14));

  // columns are W-orthonormal
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const double g = weighted_dot(w, r.vectors.column(a), r.vectors.column(b));
      REQUIRE(g == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-14));
    }
}

TEST_CASE("generalized problem with coupled right-hand matrix") {
  DenseSymMatrix m(DenseMatrix{{3.0, 1.0}, {1.0, 3.0}});
  DenseSymMatrix w(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}});
  GenSymEigResult r = gen_sym_eig(m, w);
  // pencil (M - lambda W): det = (3-2l)^2 - (1-l)^2 = 0 -> l in {4/3, 2}
  REQUIRE(r.values[0] == Catch::Approx(4.0 / 3.0).margin(1e-13));
  REQUIRE(r.values[1] == Catch::Approx(2.0).margin(1e-13));
  for (std::size_t j = 0; j < 2; ++j) {
    Vector v = r.vectors.column(j);
    Vector res = m * v - r.values[j] * (w * v);
    REQUIRE(norm2(res) < 1e-13);
  }
}

TEST_CASE("generalized problem rejects mismatched dimensions") {
  DenseSymMatrix m = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
  DenseSymMatrix w = DenseSymMatrix::diagonal(Vector{1.0});
  REQUIRE_THROWS_AS(gen_sym_eig(m, w), DimensionMismatch);
}

TEST_CASE("generalized problem requires positive definite weight") {
  DenseSymMatrix m = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
  DenseSymMatrix w = DenseSymMatrix::diagonal(Vector{1.0, -1.0});
  REQUIRE_THROWS_AS(gen_sym_eig(m, w), NotPositiveDefinite);
}
