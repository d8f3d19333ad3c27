#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fspace/certify.hpp"
#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/io_util.hpp"
#include "fspace/pseudoinverse.hpp"
#include "fspace/random.hpp"

namespace fspace {

struct PropertyResult {
  std::string name;
  double max_residual = -std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  bool passed = true;
};

struct VerifySummary {
  std::vector<PropertyResult> properties;
  std::size_t instances = 0;
  std::size_t aborted_instances = 0;  // rejected cleanly (e.g. indefinite weight)
  bool all_passed = true;
};

struct VerifyOptions {
  std::size_t instances = 100;
  std::size_t samples = 50;        // random probes per instance for the two inequalities
  std::size_t perturbations = 50;  // kernel perturbations per instance for minimality
};

using TripleFactory = std::function<OperatorTriple(CounterRng&)>;

// Random surjection with modest dimensions and well-conditioned SPD weights.
inline TripleFactory default_triple_factory() {
  return [](CounterRng& rng) {
    const std::size_t h = 2 + rng.next_u64() % 19;  // target dim <= 20
    const std::size_t v = h + rng.next_u64() % std::min<std::size_t>(41 - h, 21);
    return OperatorTriple(SurjectiveMap(random_matrix(rng, h, v)), random_spd(rng, h),
                          random_spd(rng, v));
  };
}

namespace detail {

inline double max_abs_diff_identity(const DenseMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

}  // namespace detail

// Runs every library invariant on seeded random instances and reports the
// worst residual seen per property. Instances whose inputs fail the
// definiteness or rank gates abort individually without failing the suite.
inline VerifySummary run_property_suite(std::uint64_t seed, const VerifyOptions& opts = {},
                                        const TripleFactory& factory = default_triple_factory()) {
  enum Property {
    kRightInverse = 0,
    kMinimalNorm,
    kProjector,
    kWeightedAdjointness,
    kInverseIdentity,
    kRayleighRange,
    kRouteAgreement,
    kDecompositionBounds,
    kPropertyCount
  };
  const char* names[kPropertyCount] = {
      "right_inverse_consistency",   "minimal_norm",
      "projector_idempotent_selfadjoint", "weighted_adjointness",
      "inverse_identity",            "rayleigh_range",
      "route_agreement",             "stable_decomposition_bounds"};
  const double thresholds[kPropertyCount] = {1e-9, 1e-12, 1e-9, 1e-9, 1e-8, 1e-9, 1e-8, 1e-9};

  VerifySummary summary;
  summary.properties.resize(kPropertyCount);
  for (std::size_t p = 0; p < kPropertyCount; ++p) {
    summary.properties[p].name = names[p];
    summary.properties[p].threshold = thresholds[p];
  }
  auto record = [&](Property p, double residual) {
    summary.properties[p].max_residual = std::max(summary.properties[p].max_residual, residual);
  };

  CounterRng root(seed);
  for (std::size_t inst = 0; inst < opts.instances; ++inst) {
    CounterRng rng = root.split(inst);
    try {
      OperatorTriple t = factory(rng);
      ++summary.instances;
      const std::size_t h = t.r().target_dim();
      const DenseMatrix& r = t.r().matrix();

      PseudoInverseOperator plain = pseudo_inverse(t.r());
      PseudoInverseOperator weighted = weighted_pseudo_inverse(t.r(), t.b());

      record(kRightInverse,
             std::max(detail::max_abs_diff_identity(r * plain.dagger()),
                      detail::max_abs_diff_identity(r * weighted.dagger())));

      DenseMatrix kernel = kernel_basis(t.r());
      for (std::size_t s = 0; s < opts.perturbations; ++s) {
        Vector y = random_vector(rng, h);
        Vector x = weighted.apply(y);
        Vector k = kernel * random_vector(rng, kernel.cols());
        const double base = weighted_norm(t.b(), x);
        const double perturbed = weighted_norm(t.b(), x + k);
        record(kMinimalNorm, (base - perturbed) / base);
      }

      DenseMatrix p = projector(plain);
      record(kProjector, std::max(detail::max_abs_diff(p * p, p),
                                  detail::max_abs_diff(p, p.transpose())));

      DenseMatrix pb = projector(weighted);
      DenseMatrix bp = t.b() * pb;
      record(kWeightedAdjointness, detail::max_abs_diff(bp, bp.transpose()));

      record(kInverseIdentity, detail::max_abs_diff_identity(
                                   weighted.dagger_gram() * weighted.weighted_gram().matrix()));

      SpectralCertificate cert;
      try {
        cert = certify(t);
        record(kRouteAgreement, std::max(cert.route_residuals.disagreement_minus,
                                         cert.route_residuals.disagreement_plus));
      } catch (const CertificationFailed&) {
        record(kRouteAgreement, std::numeric_limits<double>::infinity());
        continue;
      }

      DenseMatrix preconditioned = weighted.weighted_gram() * t.a().matrix();
      MinimaxResult mm = minimax_check(preconditioned, t.a(), opts.samples, rng.split(1 << 20));
      const double scale = std::max(std::abs(mm.lambda_max), 1.0);
      double range_violation =
          std::max(mm.lambda_min - mm.rayleigh_min, mm.rayleigh_max - mm.lambda_max) / scale;
      range_violation = std::max(range_violation, 0.0);
      const double witness_gap =
          std::max(std::abs(mm.witness_min_quotient - mm.lambda_min) / std::abs(mm.lambda_min),
                   std::abs(mm.witness_max_quotient - mm.lambda_max) / std::abs(mm.lambda_max));
      record(kRayleighRange, std::max(range_violation, witness_gap));

      record(kDecompositionBounds,
             std::max(verify_condition_i(t, cert, opts.samples, rng.split(1 << 21)),
                      verify_condition_ii(t, cert, opts.samples, rng.split(1 << 22))));
    } catch (const NotPositiveDefinite&) {
      ++summary.aborted_instances;
    } catch (const RankDeficient&) {
      ++summary.aborted_instances;
    }
  }

  for (PropertyResult& p : summary.properties) {
    p.passed = p.max_residual <= p.threshold;
    summary.all_passed = summary.all_passed && p.passed;
  }
  return summary;
}

inline std::string verify_summary_text(const VerifySummary& summary) {
  std::string out;
  for (const PropertyResult& p : summary.properties) {
    out += p.name;
    out += ": max_residual = ";
    out += detail::format_real(p.max_residual);
    out += p.passed ? "  pass" : "  FAIL";
    out += '\n';
  }
  out += "instances = " + std::to_string(summary.instances) + '\n';
  out += "aborted_instances = " + std::to_string(summary.aborted_instances) + '\n';
  out += summary.all_passed ? "all properties pass\n" : "property failures detected\n";
  return out;
}

}  // namespace fspace
