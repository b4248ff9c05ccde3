#include "minrisk/replica.hpp"

#include <cmath>
#include <stdexcept>

namespace minrisk::replica {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 + 1e-9))
    throw std::invalid_argument(
        "period ratio alpha must exceed 1: no typical minimum exists for "
        "p <= N");
}

// 1 + (R - r1)^2 / v1, the factor shared by every prediction. A degenerate
// v1 admits only R = r1, where the factor is 1.
double excess_factor(const MomentSet& m, double R) {
  if (m.degenerate_v1()) {
    if (std::abs(R - m.r1) <= 1e-9 * (1.0 + std::abs(m.r1))) return 1.0;
    throw std::domain_error(
        "return constraint infeasible: v1 is degenerate, only R = r1 is "
        "reachable");
  }
  const double d = R - m.r1;
  return 1.0 + d * d / m.v1;
}

}  // namespace

double min_risk(const MomentSet& moments, double alpha, double R) {
  check_alpha(alpha);
  return (alpha - 1.0) / (2.0 * moments.m_v1) * excess_factor(moments, R);
}

double min_risk_budget_only(const MomentSet& moments, double alpha) {
  check_alpha(alpha);
  return (alpha - 1.0) / (2.0 * moments.m_v1);
}

double concentration(const MomentSet& moments, double alpha, double R) {
  check_alpha(alpha);
  const double factor = excess_factor(moments, R);
  const double ratio =
      moments.degenerate_v1()
          ? 1.0  // c(r1)/v1^2 == 1 for any v1, including the limit
          : moments.c_of(R) / (moments.v1 * moments.v1);
  return factor / (alpha - 1.0) +
         moments.m_v2 / (moments.m_v1 * moments.m_v1) * ratio;
}

double concentration_budget_only(const MomentSet& moments, double alpha) {
  check_alpha(alpha);
  return 1.0 / (alpha - 1.0) + moments.m_v2 / (moments.m_v1 * moments.m_v1);
}

double sharpe_ratio(const MomentSet& moments, double alpha, double R) {
  check_alpha(alpha);
  return std::sqrt(moments.m_v1 / (alpha - 1.0)) * R /
         std::sqrt(excess_factor(moments, R));
}

double sharpe_budget_only(const MomentSet& moments, double alpha) {
  check_alpha(alpha);
  return std::sqrt(moments.m_v1 / (alpha - 1.0)) * moments.r1;
}

double sharpe_high_return_limit(const MomentSet& moments, double alpha) {
  check_alpha(alpha);
  return std::sqrt(moments.m_v1 * moments.v1 / (alpha - 1.0));
}

SharpeTriple max_sharpe(const MomentSet& moments, double alpha) {
  check_alpha(alpha);
  const double scale = moments.r1 * moments.r1 + moments.v1;
  if (moments.r1 == 0.0 || std::abs(moments.r1) < 1e-12 * std::sqrt(scale))
    throw std::domain_error("maximal Sharpe ratio undefined: r1 is zero");
  SharpeTriple t;
  const double a = moments.m_v1 / (alpha - 1.0);
  t.r_star = scale / moments.r1;
  t.s_at_rstar = std::sqrt(a * scale);
  t.s_at_r1 = std::sqrt(a) * moments.r1;
  t.s_at_inf = std::sqrt(a * moments.v1);
  return t;
}

ReturnBounds return_bounds(const MomentSet& moments, double alpha,
                           double epsilon) {
  check_alpha(alpha);
  const double ratio = 2.0 * moments.m_v1 * epsilon / (alpha - 1.0);
  double disc = ratio - 1.0;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, ratio))
      throw std::domain_error(
          "risk budget below the budget-only floor: no feasible portfolio");
    disc = 0.0;
  }
  const double half_width = std::sqrt(moments.v1 * disc);
  return {moments.r1 + half_width, moments.r1 - half_width};
}

OrPrediction min_expected_risk(const MomentSet& moments, double alpha,
                               double R) {
  check_alpha(alpha);
  const double factor = excess_factor(moments, R);
  OrPrediction p;
  p.epsilon_or = alpha / (2.0 * moments.m_v1) * factor;
  const double ratio = moments.degenerate_v1()
                           ? 1.0
                           : moments.c_of(R) / (moments.v1 * moments.v1);
  p.q_w_or = moments.m_v2 / (moments.m_v1 * moments.m_v1) * ratio;
  p.kappa = alpha / (alpha - 1.0);
  p.kappa_prime = p.kappa * p.kappa;
  p.epsilon_prime = min_risk(moments, alpha, R) * p.kappa_prime;
  return p;
}

double q_s_limit(const MomentSet& moments, double alpha, double R) {
  check_alpha(alpha);
  return alpha / ((alpha - 1.0) * moments.m_v1) * excess_factor(moments, R);
}

ReplicaPrediction predict(const MomentSet& moments, double alpha, double R) {
  ReplicaPrediction p;
  p.alpha = alpha;
  p.r = R;
  p.epsilon = min_risk(moments, alpha, R);
  p.q_w = concentration(moments, alpha, R);
  p.sharpe = sharpe_ratio(moments, alpha, R);
  p.q_s = q_s_limit(moments, alpha, R);
  const OrPrediction orp = min_expected_risk(moments, alpha, R);
  p.epsilon_or = orp.epsilon_or;
  p.q_w_or = orp.q_w_or;
  p.kappa = orp.kappa;
  p.kappa_prime = orp.kappa_prime;
  p.epsilon_prime = orp.epsilon_prime;
  return p;
}

}  // namespace minrisk::replica
