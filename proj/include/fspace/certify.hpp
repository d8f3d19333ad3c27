#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "fspace/dense.hpp"
#include "fspace/eigen.hpp"
#include "fspace/errors.hpp"
#include "fspace/pseudoinverse.hpp"
#include "fspace/random.hpp"

namespace fspace {

// The hypotheses bundle: surjection r onto the space of a, SPD a on the
// target, SPD b on the source. Definiteness of a and b is checked eagerly
// (their factors are needed downstream anyway).
class OperatorTriple {
 public:
  OperatorTriple(SurjectiveMap r, DenseSymMatrix a, DenseSymMatrix b)
      : r_(std::move(r)), a_(std::move(a)), b_(std::move(b)) {
    detail::require(a_.dim() == r_.target_dim(), "OperatorTriple: a dim");
    detail::require(b_.dim() == r_.source_dim(), "OperatorTriple: b dim");
    a_.factor();
    b_.factor();
  }

  const SurjectiveMap& r() const { return r_; }
  const DenseSymMatrix& a() const { return a_; }
  const DenseSymMatrix& b() const { return b_; }

 private:
  SurjectiveMap r_;
  DenseSymMatrix a_;
  DenseSymMatrix b_;
};

struct RouteResiduals {
  double witness_minus_residual = 0.0;  // relative eigen-residual at the minus witness
  double witness_plus_residual = 0.0;   // relative eigen-residual at the plus witness
  double disagreement_minus = 0.0;      // relative gap between the two routes (combined only)
  double disagreement_plus = 0.0;
  double inverse_identity = 0.0;     // max-norm of S * M^-1 - I (combined only)
  double agreement_tolerance = 0.0;  // threshold applied to the disagreements (combined only)
};

// Spectral bounds c_minus <= c_plus on the preconditioned operator, with the
// extremal eigenvectors as witnesses and the residuals that were accepted.
struct SpectralCertificate {
  double c_minus = 0.0;
  double c_plus = 0.0;
  double kappa = 0.0;  // c_plus / c_minus
  RouteResiduals route_residuals;
  Vector witness_minus;
  Vector witness_plus;
};

// S = dagger^T B dagger; by the inverse identity S * (R B^-1 R^T) = I, so the
// pencil (A, S) and the operator R B^-1 R^T A share spectra.
inline DenseSymMatrix build_s(const OperatorTriple& t) {
  return weighted_pseudo_inverse(t.r(), t.b()).dagger_gram();
}

namespace detail {

inline double relative_eig_residual(const DenseSymMatrix& m, const DenseSymMatrix& w,
                                    double lambda, const Vector& x) {
  Vector res = m * x - lambda * (w * x);
  const double scale = (m.max_norm() + std::abs(lambda) * w.max_norm()) * norm2(x);
  return scale > 0.0 ? norm2(res) / scale : norm2(res);
}

inline SpectralCertificate certificate_from_pencil(const DenseSymMatrix& m,
                                                   const DenseSymMatrix& w) {
  GenSymEigResult eig = gen_sym_eig(m, w);
  const std::size_t n = eig.values.dim();
  SpectralCertificate cert;
  cert.c_minus = eig.values[0];
  cert.c_plus = eig.values[n - 1];
  if (!(cert.c_minus > 0.0))
    throw CertificationFailed("nonpositive lower constant: operator not definite");
  cert.kappa = cert.c_plus / cert.c_minus;
  cert.witness_minus = eig.vectors.column(0);
  cert.witness_plus = eig.vectors.column(n - 1);
  cert.route_residuals.witness_minus_residual =
      relative_eig_residual(m, w, cert.c_minus, cert.witness_minus);
  cert.route_residuals.witness_plus_residual =
      relative_eig_residual(m, w, cert.c_plus, cert.witness_plus);
  return cert;
}

struct SharedOperators {
  DenseSymMatrix s;      // dagger^T B dagger
  DenseSymMatrix m_inv;  // R B^-1 R^T
};

inline SharedOperators shared_operators(const OperatorTriple& t) {
  PseudoInverseOperator op = weighted_pseudo_inverse(t.r(), t.b());
  return SharedOperators{op.dagger_gram(), op.weighted_gram()};
}

// extreme eigenvalues of the pencil (A, S)
inline SpectralCertificate pencil_route(const OperatorTriple& t, const DenseSymMatrix& s) {
  return certificate_from_pencil(t.a(), s);
}

// extreme eigenvalues of M^-1 A via the pencil (A M^-1 A, A)
inline SpectralCertificate operator_route(const OperatorTriple& t,
                                          const DenseSymMatrix& m_inv) {
  DenseMatrix k = t.a() * (m_inv * t.a().matrix());
  return certificate_from_pencil(DenseSymMatrix::symmetrize(k), t.a());
}

}  // namespace detail

inline SpectralCertificate certify_via_pencil(const OperatorTriple& t) {
  return detail::pencil_route(t, build_s(t));
}

inline SpectralCertificate certify_via_preconditioned_operator(const OperatorTriple& t) {
  DenseSymMatrix m_inv = weighted_pseudo_inverse(t.r(), t.b()).weighted_gram();
  return detail::operator_route(t, m_inv);
}

// Runs both routes, demands agreement (1e-8 relative, relaxed to 1e-6 for
// kappa above 1e6), and records the cross-route residuals. Returns the
// pencil-route constants and witnesses.
inline SpectralCertificate certify(const OperatorTriple& t) {
  detail::SharedOperators shared = detail::shared_operators(t);
  SpectralCertificate pencil = detail::pencil_route(t, shared.s);
  SpectralCertificate op_route = detail::operator_route(t, shared.m_inv);

  SpectralCertificate cert = std::move(pencil);
  RouteResiduals& rr = cert.route_residuals;
  rr.disagreement_minus = std::abs(cert.c_minus - op_route.c_minus) / cert.c_minus;
  rr.disagreement_plus = std::abs(cert.c_plus - op_route.c_plus) / cert.c_plus;
  rr.agreement_tolerance = cert.kappa > 1e6 ? 1e-6 : 1e-8;

  DenseMatrix prod = shared.s * shared.m_inv.matrix();
  double defect = 0.0;
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j)
      defect = std::max(defect, std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)));
  rr.inverse_identity = defect;

  if (rr.disagreement_minus > rr.agreement_tolerance ||
      rr.disagreement_plus > rr.agreement_tolerance)
    throw CertificationFailed("spectral routes disagree beyond tolerance");
  return cert;
}

// Largest relative violation of c_minus * |dagger u|_B^2 <= (u, u)_A over
// random u: nonpositive up to round-off when c_minus is valid, and tight at
// the minus witness.
inline double verify_condition_i(const OperatorTriple& t, const SpectralCertificate& cert,
                                 std::size_t samples,
                                 CounterRng rng = CounterRng(CounterRng::kDefaultSeed).split(1)) {
  PseudoInverseOperator op = weighted_pseudo_inverse(t.r(), t.b());
  double worst = -1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector u = random_vector(rng, t.r().target_dim());
    Vector v = op.apply(u);
    const double decomposition_energy = weighted_dot(t.b(), v, v);
    const double target_energy = weighted_dot(t.a(), u, u);
    if (target_energy == 0.0) continue;
    const double violation =
        (cert.c_minus * decomposition_energy - target_energy) / target_energy;
    worst = std::max(worst, violation);
  }
  return worst;
}

// Largest relative violation of (Rv, Rv)_A <= c_plus * (v, v)_B over random
// v from the full product space.
inline double verify_condition_ii(const OperatorTriple& t, const SpectralCertificate& cert,
                                  std::size_t samples,
                                  CounterRng rng = CounterRng(CounterRng::kDefaultSeed).split(2)) {
  double worst = -1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector v = random_vector(rng, t.r().source_dim());
    Vector rv = t.r().apply(v);
    const double image_energy = weighted_dot(t.a(), rv, rv);
    const double source_energy = weighted_dot(t.b(), v, v);
    if (source_energy == 0.0) continue;
    const double violation = (image_energy - cert.c_plus * source_energy) / source_energy;
    worst = std::max(worst, violation);
  }
  return worst;
}

struct MinimaxResult {
  double rayleigh_min = 0.0;  // smallest sampled quotient
  double rayleigh_max = 0.0;  // largest sampled quotient
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double witness_min_quotient = 0.0;  // quotient evaluated at the extreme eigenvectors
  double witness_max_quotient = 0.0;
};

// Samples Rayleigh quotients (W M x, x) / (W x, x) of an operator m that is
// self-adjoint with respect to the SPD inner product w; all quotients lie in
// the closed span of the spectrum and the extreme eigenvectors attain it.
inline MinimaxResult minimax_check(const DenseMatrix& m, const DenseSymMatrix& w,
                                   std::size_t samples,
                                   CounterRng rng = CounterRng(CounterRng::kDefaultSeed).split(3)) {
  detail::require(m.rows() == m.cols() && m.rows() == w.dim(), "minimax_check: dims");
  const std::size_t n = m.rows();
  DenseMatrix wm = w * m;
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(wm(i, j) - wm(j, i)));
  if (asym > 1e-9 * std::max(wm.max_norm(), 1.0))
    throw NotSelfAdjoint("minimax_check: operator not self-adjoint in the given product");

  GenSymEigResult eig = gen_sym_eig(DenseSymMatrix::symmetrize(wm), w);

  auto quotient = [&](const Vector& x) {
    return weighted_dot(w, m * x, x) / weighted_dot(w, x, x);
  };

  MinimaxResult out;
  out.lambda_min = eig.values[0];
  out.lambda_max = eig.values[n - 1];
  out.witness_min_quotient = quotient(eig.vectors.column(0));
  out.witness_max_quotient = quotient(eig.vectors.column(n - 1));

  bool first = true;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector x = random_vector(rng, n);
    if (norm2(x) == 0.0) continue;
    const double q = quotient(x);
    if (first) {
      out.rayleigh_min = out.rayleigh_max = q;
      first = false;
    } else {
      out.rayleigh_min = std::min(out.rayleigh_min, q);
      out.rayleigh_max = std::max(out.rayleigh_max, q);
    }
  }
  return out;
}

}  // namespace fspace
