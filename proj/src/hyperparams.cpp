#include "minrisk/hyperparams.hpp"

#include <cmath>
#include <stdexcept>

#include "minrisk/quadrature.hpp"
#include "minrisk/rng.hpp"

namespace minrisk {

namespace {

constexpr double kMomentTol = 1e-10;

// E[x^k] under a BoundedPareto law, both the normalization and the weighted
// integral evaluated by quadrature. Single source of truth for population
// moments; closed forms live only in the tests.
double pareto_moment(const BoundedPareto& d, int k) {
  if (d.is_point_mass()) return std::pow(d.lower, k);
  const double c = d.power;
  const double norm = integrate(
      [c](double x) { return std::pow(x, -c); }, d.lower, d.upper, kMomentTol,
      kMomentTol);
  const double raw = integrate(
      [c, k](double x) { return std::pow(x, k - c); }, d.lower, d.upper,
      kMomentTol, kMomentTol);
  return raw / norm;
}

}  // namespace

void BoundedPareto::validate() const {
  if (!(lower > 0.0) || !(upper >= lower) || !(power > 0.0) ||
      !std::isfinite(lower) || !std::isfinite(upper) || !std::isfinite(power))
    throw std::invalid_argument(
        "BoundedPareto: requires 0 < lower <= upper and power > 0");
}

double BoundedPareto::density(double x) const {
  validate();
  if (x < lower || x > upper || is_point_mass()) return 0.0;
  if (power == 1.0) return 1.0 / (x * std::log(upper / lower));
  const double c = power;
  return (1.0 - c) / (std::pow(upper, 1.0 - c) - std::pow(lower, 1.0 - c)) *
         std::pow(x, -c);
}

double BoundedPareto::cdf(double x) const {
  validate();
  if (x <= lower) return is_point_mass() && x >= lower ? 1.0 : 0.0;
  if (x >= upper) return 1.0;
  if (power == 1.0) return std::log(x / lower) / std::log(upper / lower);
  const double c = power;
  return (std::pow(x, 1.0 - c) - std::pow(lower, 1.0 - c)) /
         (std::pow(upper, 1.0 - c) - std::pow(lower, 1.0 - c));
}

double BoundedPareto::inverse_cdf(double u) const {
  validate();
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::invalid_argument("BoundedPareto: uniform draw outside [0, 1]");
  if (is_point_mass()) return lower;
  if (power == 1.0) return lower * std::pow(upper / lower, u);
  const double e = 1.0 - power;
  return std::pow(u * std::pow(upper, e) + (1.0 - u) * std::pow(lower, e),
                  1.0 / e);
}

double sample_bounded_pareto(const BoundedPareto& dist, double uniform_draw) {
  return dist.inverse_cdf(uniform_draw);
}

void HyperModel::validate() const {
  mean_dist.validate();
  scale_dist.validate();
}

void HyperParams::validate() const {
  if (means.size() != variances.size())
    throw std::invalid_argument("HyperParams: means/variances length mismatch");
  if (means.size() == 0)
    throw std::invalid_argument("HyperParams: empty");
  if (!(variances.minCoeff() > 0.0))
    throw std::domain_error("HyperParams: all variances must be > 0");
}

MomentSet MomentSet::from_raw(double m_v1, double m_v1r, double m_v1r2,
                              double m_v2, double m_v2r, double m_v2r2) {
  if (!(m_v1 > 0.0) || !(m_v2 > 0.0))
    throw std::domain_error("MomentSet: <v^-1> and <v^-2> must be positive");
  MomentSet m;
  m.m_v1 = m_v1;
  m.m_v1r = m_v1r;
  m.m_v1r2 = m_v1r2;
  m.m_v2 = m_v2;
  m.m_v2r = m_v2r;
  m.m_v2r2 = m_v2r2;
  m.r1 = m_v1r / m_v1;
  m.r2 = m_v2r / m_v2;
  m.v1 = m_v1r2 / m_v1 - m.r1 * m.r1;
  m.v2 = m_v2r2 / m_v2 - m.r2 * m.r2;
  // The weighted variances are nonnegative in exact arithmetic; absorb the
  // rounding of the two subtractions, reject anything larger.
  const double slack1 = 16.0 * 1e-16 * (m_v1r2 / m_v1 + m.r1 * m.r1);
  const double slack2 = 16.0 * 1e-16 * (m_v2r2 / m_v2 + m.r2 * m.r2);
  if (m.v1 < -slack1 || m.v2 < -slack2)
    throw std::domain_error("MomentSet: negative weighted variance");
  if (m.v1 < 0.0) m.v1 = 0.0;
  if (m.v2 < 0.0) m.v2 = 0.0;
  return m;
}

double MomentSet::c_of(double R) const {
  const double d = R - r1;
  const double cross = v1 + d * (r2 - r1);
  return v2 * d * d + cross * cross;
}

bool MomentSet::degenerate_v1() const {
  return std::abs(v1) < 1e-14 * (r1 * r1 + 1.0);
}

HyperParams sample_hyperparams(const HyperModel& model, Index n_assets,
                               std::uint64_t rng_seed) {
  model.validate();
  if (n_assets < 1)
    throw std::invalid_argument("sample_hyperparams: n_assets must be >= 1");

  Rng rng(rng_seed);
  HyperParams params;
  params.means.resize(n_assets);
  params.variances.resize(n_assets);
  for (Index i = 0; i < n_assets; ++i) {
    const double r = model.mean_dist.inverse_cdf(rng.uniform01());
    const double s = model.scale_dist.inverse_cdf(rng.uniform01());
    params.means[i] = r;
    params.variances[i] =
        model.coupling == HyperModel::Coupling::ScaledSquare ? s * r * r : s;
  }
  params.validate();
  return params;
}

MomentSet population_moments(const HyperModel& model) {
  model.validate();
  const BoundedPareto& fr = model.mean_dist;
  const BoundedPareto& fs = model.scale_dist;

  if (model.coupling == HyperModel::Coupling::ScaledSquare) {
    // v = h r^2, r and h independent: every weighted moment factorizes as
    // E[h^-a] * E[r^b].
    const double h1 = pareto_moment(fs, -1);
    const double h2 = pareto_moment(fs, -2);
    return MomentSet::from_raw(h1 * pareto_moment(fr, -2),   // <v^-1>
                               h1 * pareto_moment(fr, -1),   // <v^-1 r>
                               h1,                           // <v^-1 r^2>
                               h2 * pareto_moment(fr, -4),   // <v^-2>
                               h2 * pareto_moment(fr, -3),   // <v^-2 r>
                               h2 * pareto_moment(fr, -2));  // <v^-2 r^2>
  }

  const double w1 = pareto_moment(fs, -1);
  const double w2 = pareto_moment(fs, -2);
  const double er = pareto_moment(fr, 1);
  const double er2 = pareto_moment(fr, 2);
  return MomentSet::from_raw(w1, w1 * er, w1 * er2, w2, w2 * er, w2 * er2);
}

MomentSet empirical_moments(const HyperParams& params) {
  params.validate();
  const Vector inv_v = params.variances.cwiseInverse();
  const Vector inv_v_r = inv_v.cwiseProduct(params.means);
  const Vector inv_v2 = inv_v.cwiseProduct(inv_v);
  const Vector inv_v2_r = inv_v2.cwiseProduct(params.means);
  const double n = static_cast<double>(params.size());
  return MomentSet::from_raw(inv_v.sum() / n,
                             inv_v_r.sum() / n,
                             inv_v_r.dot(params.means) / n,
                             inv_v2.sum() / n,
                             inv_v2_r.sum() / n,
                             inv_v2_r.dot(params.means) / n);
}

}  // namespace minrisk
