#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minrisk/hyperparams.hpp"
#include "minrisk/types.hpp"

namespace minrisk {

/// Outcome of one named identity/property check.
struct CheckResult {
  std::string name;
  double residual = 0;   // worst observed residual
  double tolerance = 0;  // threshold the residual is held to
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 20240817;
  /// Negative-control hook: this offset is added to the minimal risk inside
  /// the Sharpe-square identity check. Any nonzero value (e.g. 1e-6) must
  /// make that check fail; it exists so the suite can prove it would catch
  /// a broken identity.
  double inject_epsilon_fault = 0.0;
  int n_random_moment_sets = 1000;
  int n_oracle_instances = 100;
};

/// Reference risk minimizer via the stacked (N+2) x (N+2) KKT system
/// [J A'; A 0] [w; lambda] = [0; b] with A = [e'; r'], b = (N, N R)',
/// solved by full-pivot LU. Deliberately ignorant of the production solver's
/// Schur-complement path.
Vector kkt_min_risk_reference(const Matrix& j, const Vector& r, double R);

/// Same stacked-system reference for the diagonal expected-risk objective
/// alpha * diag(v).
Vector kkt_min_expected_risk_reference(const Vector& v, double alpha,
                                       const Vector& r, double R);

/// Run the full identity/property suite: Sharpe-square identity, duality
/// roundtrip, opportunity-loss invariance, risk convexity and symmetry,
/// scaling/translation laws, Sharpe argmax location, moment scale/shift
/// laws, and small-N agreement of both solvers with the KKT reference.
std::vector<CheckResult> run_checks(const CheckOptions& options = {});

}  // namespace minrisk
