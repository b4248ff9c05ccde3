#include "minrisk/validation.hpp"

#include <algorithm>
#include <cmath>

#include "minrisk/market.hpp"
#include "minrisk/optimizer.hpp"
#include "minrisk/replica.hpp"
#include "minrisk/rng.hpp"

namespace minrisk {

namespace {

// Random well-conditioned moment sets: finite asset lists with spread means
// (r1 > 0, v1 bounded away from zero) so every closed form is defined.
MomentSet random_moment_set(Rng& rng) {
  for (;;) {
    const Index n = 12;
    HyperParams params;
    params.means.resize(n);
    params.variances.resize(n);
    for (Index i = 0; i < n; ++i) {
      params.means[i] = rng.uniform(0.2, 3.0);
      params.variances[i] = rng.uniform(0.2, 4.0);
    }
    const MomentSet m = empirical_moments(params);
    if (m.v1 > 0.01) return m;
  }
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

CheckResult sharpe_square_identity(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 1, 0));
  double worst = 0;
  for (int i = 0; i < options.n_random_moment_sets; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    const replica::SharpeTriple t = replica::max_sharpe(m, alpha);
    // Route the maximal Sharpe ratio through the risk curve so the check is
    // sensitive to epsilon, which is also where the fault hook injects.
    const double eps_at_star =
        replica::min_risk(m, alpha, t.r_star) + options.inject_epsilon_fault;
    const double s_star = t.r_star / std::sqrt(2.0 * eps_at_star);
    const double residual =
        std::abs(s_star * s_star - t.s_at_r1 * t.s_at_r1 -
                 t.s_at_inf * t.s_at_inf) /
        (s_star * s_star);
    worst = std::max(worst, residual);
  }
  CheckResult result{"sharpe_square_identity", worst, 1e-12, worst <= 1e-12,
                     "S^2(R*) = S^2(r1) + S^2(inf), relative residual"};
  return result;
}

CheckResult duality_roundtrip(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 2, 0));
  double worst = 0;
  for (int i = 0; i < options.n_random_moment_sets; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    // log-spread offsets exercise both tight and wide risk budgets
    const double scale = std::sqrt(m.v1) *
                         std::pow(10.0, rng.uniform(-3.0, 1.0));
    const bool upper = rng.uniform01() < 0.5;
    const double r = m.r1 + (upper ? scale : -scale);
    const double eps = replica::min_risk(m, alpha, r);
    const replica::ReturnBounds bounds = replica::return_bounds(m, alpha, eps);
    const double recovered = upper ? bounds.r_max : bounds.r_min;
    worst = std::max(worst, rel_diff(recovered, r));
  }
  return {"duality_roundtrip", worst, 1e-10, worst <= 1e-10,
          "return recovered from its own minimal risk"};
}

CheckResult opportunity_loss_invariance(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 3, 0));
  double worst = 0;
  for (int i = 0; i < options.n_random_moment_sets; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    const double r = m.r1 + rng.uniform(-1.0, 1.0);
    const replica::OrPrediction p = replica::min_expected_risk(m, alpha, r);
    const double eps = replica::min_risk(m, alpha, r);
    const double kappa_expected = alpha / (alpha - 1.0);
    worst = std::max(worst, rel_diff(p.kappa, kappa_expected));
    worst = std::max(worst, rel_diff(p.epsilon_or / eps, kappa_expected));
    worst = std::max(worst,
                     rel_diff(p.epsilon_prime / eps, kappa_expected * kappa_expected));
  }
  return {"opportunity_loss_invariance", worst, 1e-13, worst <= 1e-13,
          "kappa and kappa' depend on alpha only"};
}

CheckResult risk_convexity_symmetry(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 4, 0));
  double worst_sym = 0;
  bool convex = true;
  for (int i = 0; i < 200; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    const double at_min = replica::min_risk(m, alpha, m.r1);
    for (double delta : {1e-3, 0.1, 0.5, 2.0}) {
      const double up = replica::min_risk(m, alpha, m.r1 + delta);
      const double down = replica::min_risk(m, alpha, m.r1 - delta);
      convex = convex && up > at_min && down > at_min;
      worst_sym = std::max(worst_sym, rel_diff(up, down));
    }
  }
  const double residual = convex ? worst_sym : 1.0;
  return {"risk_convexity_symmetry", residual, 1e-12, residual <= 1e-12,
          "epsilon(R) convex with vertex r1, symmetric about it"};
}

CheckResult scaling_translation_laws(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 5, 0));
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    const double r = m.r1 + rng.uniform(-1.0, 1.0);

    const double c = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const MomentSet scaled =
        MomentSet::from_raw(m.m_v1 / c, m.m_v1r / c, m.m_v1r2 / c,
                            m.m_v2 / (c * c), m.m_v2r / (c * c),
                            m.m_v2r2 / (c * c));
    worst = std::max(worst, rel_diff(replica::min_risk(scaled, alpha, r),
                                     c * replica::min_risk(m, alpha, r)));
    worst = std::max(worst,
                     rel_diff(replica::sharpe_ratio(scaled, alpha, r),
                              replica::sharpe_ratio(m, alpha, r) / std::sqrt(c)));
    worst = std::max(worst, rel_diff(replica::max_sharpe(scaled, alpha).r_star,
                                     replica::max_sharpe(m, alpha).r_star));

    const double delta = rng.uniform(-1.0, 1.0);
    const MomentSet shifted = MomentSet::from_raw(
        m.m_v1, m.m_v1r + delta * m.m_v1,
        m.m_v1r2 + 2.0 * delta * m.m_v1r + delta * delta * m.m_v1, m.m_v2,
        m.m_v2r + delta * m.m_v2,
        m.m_v2r2 + 2.0 * delta * m.m_v2r + delta * delta * m.m_v2);
    worst = std::max(worst, rel_diff(replica::min_risk(shifted, alpha, r + delta),
                                     replica::min_risk(m, alpha, r)));
  }
  return {"scaling_translation_laws", worst, 1e-11, worst <= 1e-11,
          "variance scaling and mean translation act as expected"};
}

CheckResult sharpe_argmax_location(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 6, 0));
  double worst_steps = 0;
  for (int i = 0; i < 50; ++i) {
    const MomentSet m = random_moment_set(rng);
    const double alpha = rng.uniform(1.1, 4.0);
    const replica::SharpeTriple t = replica::max_sharpe(m, alpha);
    const double width = 2.0 * std::max(std::sqrt(m.v1), 0.1);
    const int n_points = 2001;
    const double step = 2.0 * width / (n_points - 1);
    double best_r = t.r_star - width;
    double best_s = -1e300;
    for (int g = 0; g < n_points; ++g) {
      const double r = t.r_star - width + g * step;
      const double s = replica::sharpe_ratio(m, alpha, r);
      if (s > best_s) {
        best_s = s;
        best_r = r;
      }
    }
    worst_steps = std::max(worst_steps, std::abs(best_r - t.r_star) / step);
  }
  return {"sharpe_argmax_location", worst_steps, 1.0, worst_steps <= 1.0,
          "grid argmax of S(R) within one step of r_star (residual in steps)"};
}

CheckResult moment_scale_shift(const CheckOptions& options) {
  Rng rng(derive_seed(options.seed, 7, 0));
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Index n = 16;
    HyperParams params;
    params.means.resize(n);
    params.variances.resize(n);
    for (Index j = 0; j < n; ++j) {
      params.means[j] = rng.uniform(-1.0, 3.0);
      params.variances[j] = rng.uniform(0.2, 4.0);
    }
    const MomentSet base = empirical_moments(params);

    const double c = std::pow(10.0, rng.uniform(-2.0, 2.0));
    HyperParams scaled = params;
    scaled.variances *= c;
    const MomentSet ms = empirical_moments(scaled);
    worst = std::max(worst, rel_diff(ms.m_v1, base.m_v1 / c));
    worst = std::max(worst, rel_diff(ms.r1, base.r1));
    worst = std::max(worst, rel_diff(1.0 + ms.v1, 1.0 + base.v1));

    const double delta = rng.uniform(-2.0, 2.0);
    HyperParams shifted = params;
    shifted.means.array() += delta;
    const MomentSet sh = empirical_moments(shifted);
    worst = std::max(worst, rel_diff(sh.r1, base.r1 + delta));
    worst = std::max(worst, rel_diff(sh.r2, base.r2 + delta));
    worst = std::max(worst, rel_diff(1.0 + sh.v1, 1.0 + base.v1));
    worst = std::max(worst, rel_diff(1.0 + sh.v2, 1.0 + base.v2));
  }
  return {"moment_scale_shift", worst, 1e-11, worst <= 1e-11,
          "scale acts on <v^-1> only; shift moves r1, r2 and fixes v1, v2"};
}

CheckResult small_n_oracle(const CheckOptions& options) {
  const Index n = 5, p = 10;
  HyperModel model;  // (1,2,2) for both draws, v = h r^2
  double worst = 0;
  for (int i = 0; i < options.n_oracle_instances; ++i) {
    const std::uint64_t seed = derive_seed(options.seed, 8, i);
    const HyperParams params = sample_hyperparams(model, n, seed);
    const MarketSample sample =
        generate_market(params, p, NoiseSpec{}, splitmix64(seed));
    const double R = 1.5;

    const MinRiskSolution sol = solve_min_risk(sample, params, R);
    const Vector oracle = kkt_min_risk_reference(sample.j, params.means, R);
    worst = std::max(
        worst, (sol.portfolio.weights - oracle).cwiseAbs().maxCoeff());

    const double alpha = sample.period_ratio();
    const Portfolio or_portfolio = solve_min_expected_risk(params, alpha, R);
    const Vector or_oracle =
        kkt_min_expected_risk_reference(params.variances, alpha, params.means, R);
    worst = std::max(
        worst, (or_portfolio.weights - or_oracle).cwiseAbs().maxCoeff());
  }
  return {"small_n_oracle", worst, 1e-8, worst <= 1e-8,
          "both solvers match the stacked KKT reference (max-norm)"};
}

}  // namespace

Vector kkt_min_risk_reference(const Matrix& j, const Vector& r, double R) {
  const Index n = j.rows();
  Matrix kkt = Matrix::Zero(n + 2, n + 2);
  kkt.topLeftCorner(n, n) = j;
  kkt.block(0, n, n, 1) = Vector::Ones(n);
  kkt.block(0, n + 1, n, 1) = r;
  kkt.block(n, 0, 1, n) = Vector::Ones(n).transpose();
  kkt.block(n + 1, 0, 1, n) = r.transpose();
  Vector rhs = Vector::Zero(n + 2);
  rhs[n] = static_cast<double>(n);
  rhs[n + 1] = static_cast<double>(n) * R;
  const Vector solution = kkt.fullPivLu().solve(rhs);
  return solution.head(n);
}

Vector kkt_min_expected_risk_reference(const Vector& v, double alpha,
                                       const Vector& r, double R) {
  const Matrix q = (alpha * v).asDiagonal();
  return kkt_min_risk_reference(q, r, R);
}

std::vector<CheckResult> run_checks(const CheckOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(sharpe_square_identity(options));
  results.push_back(duality_roundtrip(options));
  results.push_back(opportunity_loss_invariance(options));
  results.push_back(risk_convexity_symmetry(options));
  results.push_back(scaling_translation_laws(options));
  results.push_back(sharpe_argmax_location(options));
  results.push_back(moment_scale_shift(options));
  results.push_back(small_n_oracle(options));
  return results;
}

}  // namespace minrisk
