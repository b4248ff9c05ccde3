#include "minrisk/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace minrisk {

namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kCollinearTol = 1e-12;
constexpr double kConstraintTol = 1e-8;

void check_constraints(const Vector& w, const Vector& r, double R,
                       bool return_imposed) {
  const double n = static_cast<double>(w.size());
  if (std::abs(w.sum() / n - 1.0) > kConstraintTol)
    throw FactorizationError("solved portfolio violates the budget constraint");
  if (return_imposed &&
      std::abs(r.dot(w) / n - R) > kConstraintTol * (1.0 + std::abs(R)))
    throw FactorizationError("solved portfolio violates the return constraint");
}

}  // namespace

TrialSolver::TrialSolver(const MarketSample& sample, const HyperParams& params)
    : sample_(&sample), params_(&params) {
  params.validate();
  if (params.size() != sample.n_assets())
    throw std::invalid_argument("TrialSolver: params/sample size mismatch");

  Eigen::LLT<Matrix> llt(sample.j);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("J is not positive definite");
  if (llt.rcond() < kMinRcond)
    throw FactorizationError("J condition estimate exceeds 1e12");

  const Index n = sample.n_assets();
  j_inv_e_ = llt.solve(Vector::Ones(n));
  j_inv_r_ = llt.solve(params.means);
  const double dn = static_cast<double>(n);
  forms_.ee = j_inv_e_.sum() / dn;
  forms_.re = params.means.dot(j_inv_e_) / dn;
  forms_.rr = params.means.dot(j_inv_r_) / dn;
  if (!(forms_.ee > 0.0) || !(forms_.rr > 0.0))
    throw FactorizationError("nonpositive quadratic form from solve");
}

MinRiskSolution TrialSolver::min_risk(double R) const {
  const double ee = forms_.ee, re = forms_.re, rr = forms_.rr;
  const double det = ee * rr - re * re;

  MinRiskSolution sol;
  if (det <= kCollinearTol * ee * rr) {
    // r is proportional to e: the return constraint is either implied by the
    // budget constraint or unsatisfiable.
    const double implied = re / ee;
    if (std::abs(R - implied) > kConstraintTol * (1.0 + std::abs(R)))
      throw std::domain_error(
          "collinear constraints: all means equal and R differs from them");
    sol.k = 1.0 / ee;
    sol.theta = 0.0;
    sol.portfolio.weights = j_inv_e_ / ee;
    sol.risk = 0.5 * sol.k;
    check_constraints(sol.portfolio.weights, params_->means, R, false);
    return sol;
  }

  sol.k = (rr - re * R) / det;
  sol.theta = (ee * R - re) / det;
  sol.portfolio.weights = sol.k * j_inv_e_ + sol.theta * j_inv_r_;
  sol.risk = 0.5 * (sol.k + R * sol.theta);
  check_constraints(sol.portfolio.weights, params_->means, R, true);
  return sol;
}

MaxSharpeSolution TrialSolver::max_sharpe() const {
  const double ee = forms_.ee, re = forms_.re, rr = forms_.rr;
  if (std::abs(re) <= 1e-12 * std::sqrt(ee * rr))
    throw std::domain_error(
        "maximal-Sharpe normalization undefined: r'J^-1 e is zero");
  MaxSharpeSolution sol;
  sol.portfolio.weights = j_inv_r_ / re;
  sol.r_star = rr / re;
  sol.s_star = std::sqrt(rr);
  check_constraints(sol.portfolio.weights, params_->means, 0.0, false);
  return sol;
}

double TrialSolver::risk_of(const Portfolio& portfolio) const {
  const double n = static_cast<double>(sample_->n_assets());
  return 0.5 * portfolio.weights.dot(sample_->j * portfolio.weights) / n;
}

MinRiskSolution solve_min_risk(const MarketSample& sample,
                               const HyperParams& params, double R) {
  return TrialSolver(sample, params).min_risk(R);
}

QuadraticForms quadratic_forms(const MarketSample& sample,
                               const HyperParams& params) {
  return TrialSolver(sample, params).forms();
}

MaxSharpeSolution max_sharpe_portfolio(const MarketSample& sample,
                                       const HyperParams& params) {
  return TrialSolver(sample, params).max_sharpe();
}

Portfolio solve_min_expected_risk(const HyperParams& params, double alpha,
                                  double R) {
  params.validate();
  if (!(alpha > 1.0))
    throw std::invalid_argument("solve_min_expected_risk: alpha must exceed 1");

  // Empirical inverse-variance moments; the objective is diagonal, so the
  // stationary weights are (k' + theta' r_i)/v_i.
  const double n = static_cast<double>(params.size());
  const Vector inv_v = params.variances.cwiseInverse();
  const double a = inv_v.sum() / n;
  const double b = inv_v.dot(params.means) / n;
  const double c = inv_v.cwiseProduct(params.means).dot(params.means) / n;
  const double det = a * c - b * b;

  Portfolio portfolio;
  if (det <= kCollinearTol * a * c) {
    const double implied = b / a;
    if (std::abs(R - implied) > kConstraintTol * (1.0 + std::abs(R)))
      throw std::domain_error(
          "infeasible: all means equal and R differs from them");
    portfolio.weights = inv_v / a;
    check_constraints(portfolio.weights, params.means, R, false);
    return portfolio;
  }

  const double k = (c - b * R) / det;
  const double theta = (a * R - b) / det;
  portfolio.weights =
      inv_v.cwiseProduct(Vector::Constant(params.size(), k) +
                         theta * params.means);
  check_constraints(portfolio.weights, params.means, R, true);
  return portfolio;
}

TrialResult evaluate_trial(const TrialSolver& solver, double R) {
  const HyperParams& params = solver.params();
  const double n = static_cast<double>(params.size());
  const double alpha = solver.sample().period_ratio();

  TrialResult result;
  result.r = R;
  result.forms = solver.forms();

  const MinRiskSolution min_sol = solver.min_risk(R);
  result.epsilon = min_sol.risk;
  result.q_w = min_sol.portfolio.weights.squaredNorm() / n;
  result.sharpe = R / std::sqrt(2.0 * min_sol.risk);
  result.epsilon_prime =
      0.5 * alpha *
      params.variances.cwiseProduct(min_sol.portfolio.weights)
          .dot(min_sol.portfolio.weights) /
      n;

  const Portfolio or_portfolio = solve_min_expected_risk(params, alpha, R);
  result.epsilon_or = solver.risk_of(or_portfolio);
  result.expected_epsilon_or =
      0.5 * alpha *
      params.variances.cwiseProduct(or_portfolio.weights)
          .dot(or_portfolio.weights) /
      n;

  result.r_star_emp = result.forms.rr / result.forms.re;
  result.s_star_emp = std::sqrt(result.forms.rr);
  return result;
}

}  // namespace minrisk
