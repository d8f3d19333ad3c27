#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/schwarz.hpp"

namespace fspace {

struct SolveReport {
  std::size_t iterations = 0;
  std::vector<double> residual_history;  // |r_k|_2 / |r_0|_2, starting at 1
  bool converged = false;
  double kappa_used = 0.0;
  std::size_t iteration_bound = 0;  // ceil(sqrt(kappa)/2 * ln(2/tol)), 0 if no kappa given
};

struct PcgResult {
  Vector x;
  SolveReport report;
};

using PrecondApply = std::function<Vector(const Vector&)>;
using PcgObserver = std::function<void(std::size_t iteration, const Vector& iterate)>;

inline PrecondApply identity_preconditioner() {
  return [](const Vector& r) { return r; };
}

inline PrecondApply schwarz_preconditioner(const SchwarzOperators& ops) {
  return [&ops](const Vector& r) { return ops.apply_preconditioner(r); };
}

inline std::size_t pcg_iteration_bound(double kappa, double tol) {
  if (!(kappa >= 1.0)) return 0;
  return static_cast<std::size_t>(std::ceil(std::sqrt(kappa) / 2.0 * std::log(2.0 / tol)));
}

// Standard preconditioned conjugate gradient from the zero initial guess.
// Convergence requires both the preconditioned residual sqrt(r^T z) and the
// true residual |a x - rhs| to drop below tol relative to their initial
// values; the latter keeps reported convergence honest. Running out of
// iterations is a soft failure (best iterate, converged = false); an
// indefinite direction p^T A p <= 0 throws.
inline PcgResult pcg(const DenseSymMatrix& a, const PrecondApply& m_inv, const Vector& rhs,
                     double tol, std::size_t max_iter = 0, double kappa = 0.0,
                     const PcgObserver& observer = {}) {
  const std::size_t n = a.dim();
  detail::require(rhs.dim() == n, "pcg: rhs dim");
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidSpec("pcg: tol must lie in (0, 1)");
  if (max_iter == 0) max_iter = n + 5;

  PcgResult out{Vector(n), SolveReport{}};
  SolveReport& rep = out.report;
  rep.kappa_used = kappa;
  rep.iteration_bound = pcg_iteration_bound(kappa, tol);

  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    return out;
  }

  Vector r = rhs;
  Vector z = m_inv(r);
  double rz = dot(r, z);
  if (rz < 0.0) throw BreakdownDetected("pcg: preconditioner is not positive definite");
  const double rz0 = rz;
  Vector p = z;
  rep.residual_history.push_back(1.0);

  for (std::size_t k = 1; k <= max_iter; ++k) {
    Vector ap = a * p;
    const double pap = dot(p, ap);
    if (pap <= 0.0) throw BreakdownDetected("pcg: matrix is not positive definite");
    const double alpha = rz / pap;

    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rep.iterations = k;
    if (observer) observer(k, out.x);

    const double true_rel = norm2(r) / rhs_norm;
    rep.residual_history.push_back(true_rel);

    z = m_inv(r);
    const double rz_next = dot(r, z);
    if (rz_next < 0.0 && true_rel >= tol)
      throw BreakdownDetected("pcg: preconditioner is not positive definite");
    const double precond_rel = std::sqrt(std::max(rz_next, 0.0) / rz0);
    if (precond_rel < tol && true_rel < tol) {
      rep.converged = true;
      return out;
    }

    const double beta = rz_next / rz;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
  }
  return out;  // out of iterations: best iterate, converged stays false
}

}  // namespace fspace
