#pragma once

#include "minrisk/hyperparams.hpp"

namespace minrisk::replica {

/// All closed-form large-system predictions at one (alpha, R) point.
struct ReplicaPrediction {
  double alpha = 0;          // period ratio p/N
  double r = 0;              // expected-return coefficient
  double epsilon = 0;        // minimal investment risk per asset
  double q_w = 0;            // investment concentration of the optimum
  double sharpe = 0;         // R / sqrt(2 epsilon)
  double q_s = 0;            // variance-weighted concentration limit
  double epsilon_prime = 0;  // expected risk of the risk-minimizing portfolio
  double epsilon_or = 0;     // minimal expected risk
  double q_w_or = 0;         // concentration of the expected-risk minimizer
  double kappa = 0;          // epsilon_or / epsilon = alpha/(alpha-1)
  double kappa_prime = 0;    // epsilon_prime / epsilon = kappa^2
};

/// The maximal Sharpe ratio together with its two orthogonal components:
/// the budget-only value S(r1) and the high-return limit S(inf). These
/// satisfy s_at_rstar^2 == s_at_r1^2 + s_at_inf^2.
struct SharpeTriple {
  double r_star = 0;
  double s_at_rstar = 0;
  double s_at_r1 = 0;
  double s_at_inf = 0;
};

/// Feasible expected-return window at a fixed risk budget.
struct ReturnBounds {
  double r_max = 0;
  double r_min = 0;
};

/// Predictions for the expected-risk-minimizing portfolio and the two
/// opportunity-loss ratios.
struct OrPrediction {
  double epsilon_or = 0;
  double q_w_or = 0;
  double kappa = 0;
  double kappa_prime = 0;
  double epsilon_prime = 0;
};

/// Minimal investment risk per asset:
///   (alpha-1)/(2 <v^-1>) * (1 + (R - r1)^2 / v1),
/// a convex parabola in R with vertex at R = r1. Requires alpha > 1; for a
/// degenerate v1 only R = r1 is feasible.
double min_risk(const MomentSet& moments, double alpha, double R);

/// Risk floor under the budget constraint alone: (alpha-1)/(2 <v^-1>).
double min_risk_budget_only(const MomentSet& moments, double alpha);

/// Investment concentration of the risk minimizer:
///   1/(alpha-1) * (1 + (R-r1)^2/v1) + <v^-2> c(R) / (<v^-1>^2 v1^2).
/// In the degenerate-v1 limit (R = r1) this reduces to
/// 1/(alpha-1) + <v^-2>/<v^-1>^2.
double concentration(const MomentSet& moments, double alpha, double R);

/// Budget-only concentration: 1/(alpha-1) + <v^-2>/<v^-1>^2.
double concentration_budget_only(const MomentSet& moments, double alpha);

/// Sharpe ratio R / sqrt(2 min_risk). Negative for R < 0.
double sharpe_ratio(const MomentSet& moments, double alpha, double R);

/// Sharpe ratio at the risk-minimizing return R = r1.
double sharpe_budget_only(const MomentSet& moments, double alpha);

/// Limit of the Sharpe ratio as R grows without bound,
/// sqrt(<v^-1> v1 / (alpha-1)). Dedicated entry point; never computed by
/// plugging a large R into sharpe_ratio.
double sharpe_high_return_limit(const MomentSet& moments, double alpha);

/// Maximal Sharpe ratio, attained at r_star = (r1^2 + v1)/r1. Requires a
/// nonzero r1.
SharpeTriple max_sharpe(const MomentSet& moments, double alpha);

/// Bounds of the dual problem: the largest and smallest expected return
/// reachable at risk budget epsilon,
///   r1 +/- sqrt(v1 (2 <v^-1> epsilon / (alpha-1) - 1)).
/// epsilon below the budget-only floor is infeasible.
ReturnBounds return_bounds(const MomentSet& moments, double alpha,
                           double epsilon);

/// Minimal expected risk alpha/(2 <v^-1>) * (1 + (R-r1)^2/v1), the matching
/// concentration, the opportunity losses kappa = alpha/(alpha-1) and
/// kappa' = kappa^2, and the expected risk of the true risk minimizer.
OrPrediction min_expected_risk(const MomentSet& moments, double alpha,
                               double R);

/// Variance-weighted concentration of the optimum,
/// alpha / ((alpha-1) <v^-1>) * (1 + (R-r1)^2/v1).
double q_s_limit(const MomentSet& moments, double alpha, double R);

/// Evaluate every prediction at (alpha, R).
ReplicaPrediction predict(const MomentSet& moments, double alpha, double R);

}  // namespace minrisk::replica
