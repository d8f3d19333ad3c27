#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fspace/pseudoinverse.hpp"
#include "fspace/random.hpp"
#include "oracles.hpp"

using namespace fspace;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

double identity_defect(const DenseMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

SurjectiveMap random_map(CounterRng& rng, std::size_t h, std::size_t v) {
  return SurjectiveMap(random_matrix(rng, h, v));
}

}  // namespace

TEST_CASE("identity map inverts to identity") {
  SurjectiveMap r(DenseMatrix::identity(3));
  PseudoInverseOperator p = pseudo_inverse(r);
  REQUIRE(max_abs_diff(p.dagger(), DenseMatrix::identity(3)) < 1e-14);
}

TEST_CASE("orthonormal rows give dagger equal to the transpose") {
  SurjectiveMap r(DenseMatrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  PseudoInverseOperator p = pseudo_inverse(r);
  REQUIRE(max_abs_diff(p.dagger(), r.matrix().transpose()) < 1e-14);
}

TEST_CASE("row sum map selects the centroid preimage") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  PseudoInverseOperator p = pseudo_inverse(r);
  REQUIRE(p.dagger()(0, 0) == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(p.dagger()(1, 0) == Catch::Approx(0.5).margin(1e-14));

  // against the constrained-minimization oracle
  Vector y{1.0};
  Vector x = oracles::constrained_min_norm(r.matrix(), DenseSymMatrix::identity(2), y);
  REQUIRE(p.apply(y)[0] == Catch::Approx(x[0]).margin(1e-12));
  REQUIRE(p.apply(y)[1] == Catch::Approx(x[1]).margin(1e-12));
}

TEST_CASE("weighted inverse shifts mass toward the cheap coordinate") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  DenseSymMatrix b = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
  PseudoInverseOperator p = weighted_pseudo_inverse(r, b);
  REQUIRE(p.dagger()(0, 0) == Catch::Approx(2.0 / 3.0).margin(1e-14));
  REQUIRE(p.dagger()(1, 0) == Catch::Approx(1.0 / 3.0).margin(1e-14));

  Vector x = oracles::constrained_min_norm(r.matrix(), b, Vector{1.0});
  REQUIRE(x[0] == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(x[1] == Catch::Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("weight aligned with the kernel leaves the transpose inverse") {
  SurjectiveMap r(DenseMatrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  DenseSymMatrix b = DenseSymMatrix::diagonal(Vector{1.0, 2.0, 3.0});
  PseudoInverseOperator p = weighted_pseudo_inverse(r, b);
  REQUIRE(max_abs_diff(p.dagger(), r.matrix().transpose()) < 1e-14);

  Vector x = oracles::constrained_min_norm(r.matrix(), b, Vector{0.3, -0.7});
  Vector got = p.apply(Vector{0.3, -0.7});
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(got[i] == Catch::Approx(x[i]).margin(1e-12));
}

TEST_CASE("identity weight reduces to the unweighted inverse") {
  CounterRng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t h = 2 + rep, v = h + 3 + rep % 4;
    SurjectiveMap r = random_map(rng, h, v);
    PseudoInverseOperator plain = pseudo_inverse(r);
    PseudoInverseOperator weighted = weighted_pseudo_inverse(r, DenseSymMatrix::identity(v));
    REQUIRE(max_abs_diff(plain.dagger(), weighted.dagger()) < 1e-10);
  }
}

TEST_CASE("right inverse property holds on random instances") {
  CounterRng rng(22);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t h = 2 + static_cast<std::size_t>(rng.uniform() * 18);  // <= 20
    const std::size_t v = 20 + static_cast<std::size_t>(rng.uniform() * 20);  // <= 40
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    PseudoInverseOperator p = weighted_pseudo_inverse(r, b);
    REQUIRE(identity_defect(r.matrix() * p.dagger()) < 1e-9);
  }
}

TEST_CASE("random preimages match the constrained-minimization oracle") {
  CounterRng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t h = 3 + rep % 5, v = h + 2 + rep;
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    PseudoInverseOperator p = weighted_pseudo_inverse(r, b);
    Vector y = random_vector(rng, h);
    Vector expect = oracles::constrained_min_norm(r.matrix(), b, y);
    Vector got = p.apply(y);
    for (std::size_t i = 0; i < v; ++i) REQUIRE(got[i] == Catch::Approx(expect[i]).margin(1e-9));
  }
}

TEST_CASE("projector on the identity map is the identity") {
  SurjectiveMap r(DenseMatrix::identity(2));
  REQUIRE(identity_defect(projector(pseudo_inverse(r))) < 1e-14);
}

TEST_CASE("rank one projector onto the diagonal direction") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  DenseMatrix p = projector(pseudo_inverse(r));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) REQUIRE(p(i, j) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("weighted projector matches the worked instance") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  DenseSymMatrix b = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
  DenseMatrix p = projector(weighted_pseudo_inverse(r, b));
  REQUIRE(p(0, 0) == Catch::Approx(2.0 / 3.0).margin(1e-14));
  REQUIRE(p(0, 1) == Catch::Approx(2.0 / 3.0).margin(1e-14));
  REQUIRE(p(1, 0) == Catch::Approx(1.0 / 3.0).margin(1e-14));
  REQUIRE(p(1, 1) == Catch::Approx(1.0 / 3.0).margin(1e-14));
}

TEST_CASE("projector is idempotent and self-adjoint in the weight inner product") {
  CounterRng rng(24);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t h = 2 + rep % 6, v = h + 1 + rep % 7;
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    PseudoInverseOperator op = weighted_pseudo_inverse(r, b);
    DenseMatrix p = projector(op);
    REQUIRE(max_abs_diff(p * p, p) < 1e-9);
    DenseMatrix wp = b * p;
    REQUIRE(max_abs_diff(wp, wp.transpose()) < 1e-9);
  }
}

TEST_CASE("inverse identity on worked scalars") {
  {
    SurjectiveMap r(DenseMatrix::identity(2));
    REQUIRE(schur_identity_check(r, DenseSymMatrix::identity(2)) < 1e-14);
  }
  {
    SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
    DenseSymMatrix b = DenseSymMatrix::diagonal(Vector{1.0, 2.0});
    // R B^-1 R^T = 3/2 and dagger^T B dagger = 2/3: product is exactly 1
    PseudoInverseOperator op = weighted_pseudo_inverse(r, b);
    REQUIRE(op.weighted_gram()(0, 0) == Catch::Approx(1.5).margin(1e-14));
    REQUIRE(op.dagger_gram()(0, 0) == Catch::Approx(2.0 / 3.0).margin(1e-14));
    REQUIRE(schur_identity_check(r, b) < 1e-14);
  }
}

TEST_CASE("inverse identity over a hundred random pairs") {
  CounterRng rng(25);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t h = 2 + static_cast<std::size_t>(rng.uniform() * 19);  // 2..20
    const std::size_t v = 20 + static_cast<std::size_t>(rng.uniform() * 21);  // 20..40
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    REQUIRE(schur_identity_check(r, b) < 1e-8);
  }
}

TEST_CASE("minimal-norm preimage beats every kernel perturbation") {
  CounterRng rng(26);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t h = 3 + rep, v = h + 2 + rep;
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    PseudoInverseOperator op = weighted_pseudo_inverse(r, b);
    DenseMatrix kb = kernel_basis(r);

    for (int trial = 0; trial < 50; ++trial) {
      Vector y = random_vector(rng, h);
      Vector x = op.apply(y);
      Vector coeff = random_vector(rng, v - h);
      Vector k = kb * coeff;
      Vector perturbed = x + k;
      const double base = weighted_norm(b, x);
      const double moved = weighted_norm(b, perturbed);
      REQUIRE(base <= moved + 1e-12);
      if (norm2(k) > 1e-12) REQUIRE(base < moved);
    }
  }
}

TEST_CASE("dagger columns are orthogonal to the kernel in the weight product") {
  CounterRng rng(27);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t h = 2 + rep % 5, v = h + 1 + rep;
    SurjectiveMap r = random_map(rng, h, v);
    DenseSymMatrix b = random_spd(rng, v);
    PseudoInverseOperator op = weighted_pseudo_inverse(r, b);
    DenseMatrix p = projector(op);
    // (I - P)^T W dagger == 0
    DenseMatrix ip(v, v);
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < v; ++j) ip(i, j) = (i == j ? 1.0 : 0.0) - p(i, j);
    DenseMatrix defect = ip.transpose() * (b * op.dagger());
    REQUIRE(defect.max_norm() < 1e-9);
  }
}

TEST_CASE("dagger has full column rank") {
  CounterRng rng(28);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t h = 2 + rep, v = h + 3;
    SurjectiveMap r = random_map(rng, h, v);
    PseudoInverseOperator op = pseudo_inverse(r);
    DenseSymMatrix gram = DenseSymMatrix::symmetrize(op.dagger().transpose() * op.dagger());
    REQUIRE(gram.is_spd());
  }
}

TEST_CASE("kernel basis spans the kernel orthonormally") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  DenseMatrix kb = kernel_basis(r);
  REQUIRE(kb.rows() == 2);
  REQUIRE(kb.cols() == 1);
  REQUIRE(std::abs(norm2(kb.column(0)) - 1.0) < 1e-14);
  Vector image = r.matrix() * kb.column(0);
  REQUIRE(std::abs(image[0]) < 1e-14);

  CounterRng rng(29);
  SurjectiveMap r2(random_matrix(rng, 4, 9));
  DenseMatrix kb2 = kernel_basis(r2);
  REQUIRE(kb2.cols() == 5);
  DenseMatrix imag = r2.matrix() * kb2;
  REQUIRE(imag.max_norm() < 1e-12);
  DenseMatrix gram = kb2.transpose() * kb2;
  REQUIRE(identity_defect(gram) < 1e-12);
}

TEST_CASE("rank-deficient maps are rejected") {
  REQUIRE_THROWS_AS(SurjectiveMap(DenseMatrix{{1.0, 1.0}, {1.0, 1.0}}), RankDeficient);
  REQUIRE_THROWS_AS(SurjectiveMap(DenseMatrix{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}}), RankDeficient);
  REQUIRE_THROWS_AS(SurjectiveMap(DenseMatrix{{0.0, 0.0}}), RankDeficient);
}

TEST_CASE("rank gate separates tiny but honest singular values from noise") {
  // ratio 1e-8: acceptable; ratio 1e-12: rejected
  REQUIRE_NOTHROW(SurjectiveMap(DenseMatrix{{1.0, 0.0, 0.0}, {0.0, 1e-8, 0.0}}));
  REQUIRE_THROWS_AS(SurjectiveMap(DenseMatrix{{1.0, 0.0, 0.0}, {0.0, 1e-12, 0.0}}),
                    RankDeficient);
}

TEST_CASE("triangular rank witness shares singular values with the map") {
  CounterRng rng(31);
  DenseMatrix r = random_matrix(rng, 5, 11);
  DenseMatrix l = lq_lower_factor(r);
  oracles::JacobiEig from_map =
      oracles::jacobi_eig(DenseSymMatrix::symmetrize(r * r.transpose()));
  oracles::JacobiEig from_l = oracles::jacobi_eig(DenseSymMatrix::symmetrize(l * l.transpose()));
  for (std::size_t i = 0; i < 5; ++i)
    REQUIRE(from_l.values[i] == Catch::Approx(from_map.values[i]).margin(1e-11));
}

TEST_CASE("tall maps are rejected as shape errors") {
  REQUIRE_THROWS_AS(SurjectiveMap(DenseMatrix{{1.0}, {0.0}}), DimensionMismatch);
}

TEST_CASE("singular value gate stores plausible estimates") {
  SurjectiveMap r(DenseMatrix{{2.0, 0.0, 0.0}, {0.0, 3.0, 0.0}});
  REQUIRE(r.sigma_max() == Catch::Approx(3.0).epsilon(1e-6));
  REQUIRE(r.sigma_min() == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("weighted inverse propagates a bad weight") {
  SurjectiveMap r(DenseMatrix{{1.0, 1.0}});
  DenseSymMatrix bad = DenseSymMatrix::diagonal(Vector{1.0, -2.0});
  REQUIRE_THROWS_AS(weighted_pseudo_inverse(r, bad), NotPositiveDefinite);
}

TEST_CASE("adjoint application matches the transpose") {
  CounterRng rng(30);
  SurjectiveMap r(random_matrix(rng, 3, 7));
  Vector u = random_vector(rng, 3);
  Vector viaT = r.matrix().transpose() * u;
  Vector direct = r.apply_transposed(u);
  for (std::size_t i = 0; i < 7; ++i) REQUIRE(direct[i] == Catch::Approx(viaT[i]).margin(1e-14));
}
