#pragma once

#include "minrisk/hyperparams.hpp"
#include "minrisk/market.hpp"
#include "minrisk/types.hpp"

namespace minrisk {

/// Position sizes per asset, normalized so weights sum to N. Short selling
/// is allowed: any sign.
struct Portfolio {
  Vector weights;
};

/// The three J^-1 quadratic forms per asset: e'J^-1 e/N, r'J^-1 e/N,
/// r'J^-1 r/N. Positive definite J implies ee > 0, rr > 0 and the
/// Cauchy-Schwarz bound re^2 <= ee * rr.
struct QuadraticForms {
  double ee = 0;
  double re = 0;
  double rr = 0;
};

/// Exact risk minimizer under budget and return constraints, with its
/// multipliers. risk == (k + R*theta)/2 == w'Jw/(2N).
struct MinRiskSolution {
  Portfolio portfolio;
  double k = 0;
  double theta = 0;
  double risk = 0;
};

/// Budget-normalized maximal-Sharpe portfolio with its realized return and
/// Sharpe ratio.
struct MaxSharpeSolution {
  Portfolio portfolio;
  double r_star = 0;
  double s_star = 0;
};

/// Everything measured on one trial at one return coefficient.
struct TrialResult {
  double r = 0;                    // return coefficient this row was solved at
  double epsilon = 0;              // minimal risk per asset, H(w*|X)/N
  double q_w = 0;                  // (1/N) sum w*_i^2
  double sharpe = 0;               // R / sqrt(2 epsilon)
  double epsilon_or = 0;           // realized risk of the OR portfolio
  double expected_epsilon_or = 0;  // (alpha/2N) sum v_i (w^OR_i)^2
  double epsilon_prime = 0;        // (alpha/2N) sum v_i (w*_i)^2
  QuadraticForms forms;
  double r_star_emp = 0;  // r'J^-1 r / r'J^-1 e
  double s_star_emp = 0;  // sqrt(r'J^-1 r / N)
};

/// Shares one Cholesky factorization of J across every per-trial solve: the
/// two right-hand sides J y = e and J z = r are solved once, and each
/// return coefficient costs only a 2x2 system afterwards. Holds references
/// to the sample and params, which must outlive the solver.
///
/// Throws FactorizationError if the factorization fails or the reciprocal
/// condition estimate falls below 1e-12.
class TrialSolver {
 public:
  TrialSolver(const MarketSample& sample, const HyperParams& params);

  const QuadraticForms& forms() const { return forms_; }

  /// Risk minimizer at return coefficient R: w* = k J^-1 e + theta J^-1 r.
  /// Collinear constraints (r proportional to e) fall back to the
  /// budget-only minimizer when R is consistent and throw otherwise.
  MinRiskSolution min_risk(double R) const;

  /// Maximal-Sharpe portfolio w = J^-1 r * N / (r'J^-1 e). Requires
  /// r'J^-1 e away from zero.
  MaxSharpeSolution max_sharpe() const;

  /// Realized risk per asset of any portfolio: w'Jw/(2N).
  double risk_of(const Portfolio& portfolio) const;

  const MarketSample& sample() const { return *sample_; }
  const HyperParams& params() const { return *params_; }

 private:
  const MarketSample* sample_;
  const HyperParams* params_;
  Vector j_inv_e_;  // J^-1 e
  Vector j_inv_r_;  // J^-1 r
  QuadraticForms forms_;
};

/// One-shot variants; each factorizes J internally.
MinRiskSolution solve_min_risk(const MarketSample& sample,
                               const HyperParams& params, double R);
QuadraticForms quadratic_forms(const MarketSample& sample,
                               const HyperParams& params);
MaxSharpeSolution max_sharpe_portfolio(const MarketSample& sample,
                                       const HyperParams& params);

/// Minimizer of the expected risk (alpha/2) sum v_i w_i^2 under budget and
/// return constraints: w_i = (k' + theta' r_i)/v_i with (k', theta') from
/// the 2x2 system of empirical inverse-variance moments. Independent of the
/// market realization. Equal means fall back to the budget-only solution
/// when R is consistent and throw otherwise.
Portfolio solve_min_expected_risk(const HyperParams& params, double alpha,
                                  double R);

/// Full per-trial measurement at one return coefficient.
TrialResult evaluate_trial(const TrialSolver& solver, double R);

}  // namespace minrisk
