#pragma once

#include <cstdint>

#include "minrisk/types.hpp"

namespace minrisk {

/// Power-law density f(x) proportional to x^(-power), truncated to
/// [lower, upper] with lower > 0. lower == upper is accepted as the
/// point-mass limit (every draw returns lower).
struct BoundedPareto {
  double lower = 1.0;
  double upper = 2.0;
  double power = 2.0;

  void validate() const;
  bool is_point_mass() const { return lower == upper; }

  double density(double x) const;
  double cdf(double x) const;

  /// Inverse CDF at u in [0, 1]. For power == 1 the normalization is
  /// logarithmic and the inverse becomes lower * (upper/lower)^u; the
  /// general-power branch is (u*upper^(1-c) + (1-u)*lower^(1-c))^(1/(1-c)).
  double inverse_cdf(double u) const;
};

/// Draw one value from dist by inverse-transform sampling of the supplied
/// uniform variate. Pure function: the caller owns the random stream.
double sample_bounded_pareto(const BoundedPareto& dist, double uniform_draw);

/// Generating rule for per-asset (mean, variance) pairs. Under ScaledSquare
/// the variance is v = h * r^2 with h drawn from scale_dist; under Direct
/// the variance is drawn from scale_dist itself. r and the scale draw are
/// independent in both cases.
struct HyperModel {
  enum class Coupling { ScaledSquare, Direct };

  BoundedPareto mean_dist;   // r_i
  BoundedPareto scale_dist;  // h_i (ScaledSquare) or v_i (Direct)
  Coupling coupling = Coupling::ScaledSquare;

  void validate() const;
};

/// One realized set of per-asset hyperparameters.
struct HyperParams {
  Vector means;      // r_i
  Vector variances;  // v_i, all strictly positive

  Index size() const { return means.size(); }
  void validate() const;
};

/// The six inverse-variance-weighted raw moments of (r, v) together with the
/// derived weighted mean and variance of r under the v^-1 and v^-2 measures:
///   r1 = <v^-1 r>/<v^-1>,  v1 = <v^-1 r^2>/<v^-1> - r1^2,
///   r2 = <v^-2 r>/<v^-2>,  v2 = <v^-2 r^2>/<v^-2> - r2^2.
struct MomentSet {
  double m_v1 = 0, m_v1r = 0, m_v1r2 = 0;  // <v^-1>, <v^-1 r>, <v^-1 r^2>
  double m_v2 = 0, m_v2r = 0, m_v2r2 = 0;  // <v^-2>, <v^-2 r>, <v^-2 r^2>
  double r1 = 0, r2 = 0, v1 = 0, v2 = 0;

  /// Build from the six raw moments; derives r1, r2, v1, v2 and enforces
  /// positivity invariants. Weighted variances within one rounding unit of
  /// zero are clamped to exactly zero.
  static MomentSet from_raw(double m_v1, double m_v1r, double m_v1r2,
                            double m_v2, double m_v2r, double m_v2r2);

  /// c(R) = v2 (R-r1)^2 + (v1 + (R-r1)(r2-r1))^2.
  double c_of(double R) const;

  /// True when v1 is numerically indistinguishable from zero
  /// (|v1| < 1e-14 * (r1^2 + 1)); predictions then exist only at R = r1.
  bool degenerate_v1() const;
};

/// Draw n_assets (r_i, v_i) pairs. Deterministic for a fixed seed; assets
/// are drawn in index order, mean before scale.
HyperParams sample_hyperparams(const HyperModel& model, Index n_assets,
                               std::uint64_t rng_seed);

/// Population moments of the model, each raw moment evaluated by adaptive
/// quadrature over the generating densities (products of 1-D integrals,
/// since the mean and scale draws are independent). Tolerance 1e-10.
MomentSet population_moments(const HyperModel& model);

/// Plug-in moments of one realized (r, v) set: arithmetic means of v^-1,
/// v^-1 r, ... over assets, derived quantities via the same formulas as
/// population_moments.
MomentSet empirical_moments(const HyperParams& params);

}  // namespace minrisk
