#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "minrisk/hyperparams.hpp"
#include "minrisk/rng.hpp"
#include "oracles.hpp"

using namespace minrisk;

namespace {

const BoundedPareto kUnitPareto{1.0, 2.0, 2.0};  // the reference (1,2,2) law

HyperModel reference_model() {
  HyperModel model;
  model.mean_dist = kUnitPareto;
  model.scale_dist = kUnitPareto;
  model.coupling = HyperModel::Coupling::ScaledSquare;
  return model;
}

}  // namespace

TEST_CASE("inverse CDF endpoints and interior point") {
  CHECK(kUnitPareto.inverse_cdf(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kUnitPareto.inverse_cdf(1.0) == doctest::Approx(2.0).epsilon(1e-15));

  // interior point against numerical CDF inversion
  const double median = sample_bounded_pareto(kUnitPareto, 0.5);
  CHECK(median > 1.0);
  CHECK(median < 2.0);
  const double oracle = oracles::invert_cdf_numerically(
      [](double x) { return kUnitPareto.density(x); }, 1.0, 2.0, 0.5);
  CHECK(median == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("inverse CDF is monotone in the uniform draw") {
  for (double power : {0.5, 1.0, 2.0, 3.7}) {
    const BoundedPareto dist{0.5, 4.0, power};
    double previous = dist.inverse_cdf(0.0);
    for (int i = 1; i <= 100; ++i) {
      const double current = dist.inverse_cdf(i / 100.0);
      CHECK(current >= previous);
      previous = current;
    }
    CHECK(dist.inverse_cdf(0.0) == doctest::Approx(0.5));
    CHECK(dist.inverse_cdf(1.0) == doctest::Approx(4.0));
  }
}

TEST_CASE("power == 1 uses the logarithmic branch") {
  const BoundedPareto dist{1.0, 4.0, 1.0};
  // l * (u/l)^u matches the numerically inverted CDF
  CHECK(dist.inverse_cdf(0.5) == doctest::Approx(2.0).epsilon(1e-12));
  const double at = dist.inverse_cdf(0.3);
  const double oracle = oracles::invert_cdf_numerically(
      [&dist](double x) { return dist.density(x); }, 1.0, 4.0, 0.3);
  CHECK(at == doctest::Approx(oracle).epsilon(1e-10));
  // continuity across the branch
  const BoundedPareto near{1.0, 4.0, 1.0 + 1e-9};
  CHECK(near.inverse_cdf(0.3) == doctest::Approx(at).epsilon(1e-7));
}

TEST_CASE("invalid distributions are rejected") {
  CHECK_THROWS_AS((BoundedPareto{0.0, 2.0, 2.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((BoundedPareto{2.0, 1.0, 2.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((BoundedPareto{1.0, 2.0, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(kUnitPareto.inverse_cdf(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(kUnitPareto.inverse_cdf(1.1), std::invalid_argument);
}

TEST_CASE("point-mass model yields constant hyperparameters") {
  HyperModel model;
  model.mean_dist = {1.0, 1.0, 2.0};
  model.scale_dist = {1.0, 1.0, 2.0};
  const HyperParams params = sample_hyperparams(model, 64, 7);
  CHECK(params.means.minCoeff() == 1.0);
  CHECK(params.means.maxCoeff() == 1.0);
  CHECK(params.variances.minCoeff() == 1.0);
  CHECK(params.variances.maxCoeff() == 1.0);
}

TEST_CASE("sampling is deterministic and respects the coupling rule") {
  const HyperModel model = reference_model();
  const HyperParams a = sample_hyperparams(model, 100, 42);
  const HyperParams b = sample_hyperparams(model, 100, 42);
  CHECK((a.means.array() == b.means.array()).all());
  CHECK((a.variances.array() == b.variances.array()).all());

  // degenerate scale draw pins h, exposing v = h r^2 exactly
  HyperModel pinned = model;
  pinned.scale_dist = {1.5, 1.5, 2.0};
  const HyperParams c = sample_hyperparams(pinned, 100, 42);
  for (Index i = 0; i < c.size(); ++i)
    CHECK(c.variances[i] ==
          doctest::Approx(1.5 * c.means[i] * c.means[i]).epsilon(1e-15));
}

TEST_CASE("large-sample means match the closed-form integrals") {
  const Index n = 100000;
  const HyperParams params = sample_hyperparams(reference_model(), n, 2024);

  // E[r] = 2 ln 2 for the (1,2,2) law
  const double expected_mean_r =
      oracles::pareto_moment_closed_form(1.0, 2.0, 2.0, 1);
  CHECK(expected_mean_r == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  const double mean_r = params.means.mean();
  const double sd_r = std::sqrt(
      (params.means.array() - mean_r).square().sum() / (n - 1.0));
  CHECK(std::abs(mean_r - expected_mean_r) < 3.0 * sd_r / std::sqrt(double(n)));

  // E[1/v] = E[1/h] E[1/r^2] by independence
  const double expected_inv_v =
      oracles::pareto_moment_closed_form(1.0, 2.0, 2.0, -1) *
      oracles::pareto_moment_closed_form(1.0, 2.0, 2.0, -2);
  CHECK(expected_inv_v == doctest::Approx(7.0 / 16.0).epsilon(1e-14));
  const Eigen::ArrayXd inv_v = params.variances.array().inverse();
  const double mean_inv_v = inv_v.mean();
  const double sd_inv_v =
      std::sqrt((inv_v - mean_inv_v).square().sum() / (n - 1.0));
  CHECK(std::abs(mean_inv_v - expected_inv_v) <
        3.0 * sd_inv_v / std::sqrt(double(n)));
}

TEST_CASE("population moments agree with hand-derived closed forms") {
  const MomentSet m = population_moments(reference_model());
  auto er = [](int k) {
    return oracles::pareto_moment_closed_form(1.0, 2.0, 2.0, k);
  };
  CHECK(m.m_v1 == doctest::Approx(er(-1) * er(-2)).epsilon(1e-9));
  CHECK(m.m_v1r == doctest::Approx(er(-1) * er(-1)).epsilon(1e-9));
  CHECK(m.m_v1r2 == doctest::Approx(er(-1)).epsilon(1e-9));
  CHECK(m.m_v2 == doctest::Approx(er(-2) * er(-4)).epsilon(1e-9));
  CHECK(m.m_v2r == doctest::Approx(er(-2) * er(-3)).epsilon(1e-9));
  CHECK(m.m_v2r2 == doctest::Approx(er(-2) * er(-2)).epsilon(1e-9));
  CHECK(m.m_v1 == doctest::Approx(0.4375).epsilon(1e-9));
  CHECK(m.v1 > 0.0);

  // direct-coupling variant: v drawn as-is
  HyperModel direct = reference_model();
  direct.coupling = HyperModel::Coupling::Direct;
  const MomentSet d = population_moments(direct);
  CHECK(d.m_v1 == doctest::Approx(er(-1)).epsilon(1e-9));
  CHECK(d.m_v1r == doctest::Approx(er(-1) * er(1)).epsilon(1e-9));
  CHECK(d.r1 == doctest::Approx(er(1)).epsilon(1e-9));
}

TEST_CASE("point-mass population moments collapse") {
  HyperModel model;
  model.mean_dist = {1.5, 1.5, 2.0};
  model.scale_dist = {4.0, 4.0, 2.0};  // v = s^2 directly
  model.coupling = HyperModel::Coupling::Direct;
  const MomentSet m = population_moments(model);
  CHECK(m.r1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(m.r2 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(m.v1 == 0.0);
  CHECK(m.v2 == 0.0);
  CHECK(m.m_v1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.degenerate_v1());
}

TEST_CASE("empirical moments: single asset and hand arithmetic") {
  HyperParams one;
  one.means.resize(1);
  one.variances.resize(1);
  one.means << 2.0;
  one.variances << 4.0;
  const MomentSet m1 = empirical_moments(one);
  CHECK(m1.m_v1 == doctest::Approx(0.25));
  CHECK(m1.r1 == doctest::Approx(2.0));
  CHECK(m1.v1 == 0.0);

  HyperParams two;
  two.means.resize(2);
  two.variances.resize(2);
  two.means << 1.0, 3.0;
  two.variances << 1.0, 1.0;
  const MomentSet m2 = empirical_moments(two);
  CHECK(m2.r1 == doctest::Approx(2.0));
  CHECK(m2.v1 == doctest::Approx(1.0));
}

TEST_CASE("empirical moments of a large sample approach the population") {
  const Index n = 100000;
  const HyperParams params = sample_hyperparams(reference_model(), n, 99);
  const MomentSet emp = empirical_moments(params);
  const MomentSet pop = population_moments(reference_model());

  // three standard errors of each raw moment, estimated from the sample
  const Eigen::ArrayXd inv_v = params.variances.array().inverse();
  auto check_close = [&](const Eigen::ArrayXd& values, double expected,
                         double got) {
    const double mean = values.mean();
    const double sd = std::sqrt((values - mean).square().sum() / (n - 1.0));
    CHECK(std::abs(got - expected) < 3.0 * sd / std::sqrt(double(n)));
  };
  check_close(inv_v, pop.m_v1, emp.m_v1);
  check_close(inv_v * params.means.array(), pop.m_v1r, emp.m_v1r);
  check_close(inv_v.square(), pop.m_v2, emp.m_v2);
  check_close(inv_v.square() * params.means.array().square(), pop.m_v2r2,
              emp.m_v2r2);
}

TEST_CASE("replicated point mass: empirical equals population exactly") {
  HyperModel model;
  model.mean_dist = {2.0, 2.0, 2.0};
  model.scale_dist = {1.0, 1.0, 2.0};  // v = 1 * r^2 = 4, dyadic values
  const HyperParams params = sample_hyperparams(model, 32, 5);
  const MomentSet emp = empirical_moments(params);
  const MomentSet pop = population_moments(model);
  CHECK(emp.m_v1 == pop.m_v1);
  CHECK(emp.m_v1r == pop.m_v1r);
  CHECK(emp.m_v1r2 == pop.m_v1r2);
  CHECK(emp.m_v2 == pop.m_v2);
  CHECK(emp.r1 == pop.r1);
  CHECK(emp.v1 == pop.v1);
}

TEST_CASE("sampled CDF matches the analytic CDF (Kolmogorov-Smirnov)") {
  const int n = 1000000;
  Rng rng(314159);
  std::vector<double> samples(n);
  for (double& value : samples)
    value = sample_bounded_pareto(kUnitPareto, rng.uniform01());
  std::sort(samples.begin(), samples.end());
  const double ks = oracles::ks_statistic(
      samples, [](double x) { return kUnitPareto.cdf(x); });
  CHECK(ks < 0.01);
  CHECK(samples.front() >= 1.0);
  CHECK(samples.back() <= 2.0);
}

TEST_CASE("moment scale and shift properties") {
  Rng rng(77);
  HyperParams params;
  params.means.resize(24);
  params.variances.resize(24);
  for (Index i = 0; i < 24; ++i) {
    params.means[i] = rng.uniform(-1.0, 3.0);
    params.variances[i] = rng.uniform(0.3, 5.0);
  }
  const MomentSet base = empirical_moments(params);

  HyperParams scaled = params;
  const double c = 3.7;
  scaled.variances *= c;
  const MomentSet ms = empirical_moments(scaled);
  CHECK(ms.m_v1 == doctest::Approx(base.m_v1 / c).epsilon(1e-13));
  CHECK(ms.r1 == doctest::Approx(base.r1).epsilon(1e-13));
  CHECK(ms.v1 == doctest::Approx(base.v1).epsilon(1e-12));

  HyperParams shifted = params;
  const double delta = 0.75;
  shifted.means.array() += delta;
  const MomentSet sh = empirical_moments(shifted);
  CHECK(sh.r1 == doctest::Approx(base.r1 + delta).epsilon(1e-13));
  CHECK(sh.r2 == doctest::Approx(base.r2 + delta).epsilon(1e-13));
  CHECK(sh.v1 == doctest::Approx(base.v1).epsilon(1e-11));
  CHECK(sh.v2 == doctest::Approx(base.v2).epsilon(1e-11));
}

TEST_CASE("invalid hyperparameters are rejected") {
  HyperParams bad;
  bad.means.resize(2);
  bad.variances.resize(2);
  bad.means << 1.0, 2.0;
  bad.variances << 1.0, 0.0;
  CHECK_THROWS_AS(empirical_moments(bad), std::domain_error);
  CHECK_THROWS_AS(sample_hyperparams(reference_model(), 0, 1),
                  std::invalid_argument);
}
