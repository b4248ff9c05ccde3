#include "minrisk/harness.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "minrisk/rng.hpp"

namespace minrisk {

namespace {

struct TrialOutcome {
  bool ok = false;
  std::string error;
  QuadraticForms forms;
  std::vector<std::optional<TrialResult>> by_r;
};

TrialOutcome compute_trial(const ExperimentConfig& config, int trial_index) {
  TrialOutcome outcome;
  try {
    const HyperParams params = trial_hyperparams(config, trial_index);
    const MarketSample sample = generate_market(
        params, config.n_periods, config.noise,
        derive_seed(config.seed, static_cast<std::uint64_t>(trial_index), 1));
    const TrialSolver solver(sample, params);
    outcome.forms = solver.forms();
    outcome.by_r.resize(config.r_grid.size());
    for (std::size_t i = 0; i < config.r_grid.size(); ++i) {
      try {
        outcome.by_r[i] = evaluate_trial(solver, config.r_grid[i]);
      } catch (const std::exception&) {
        outcome.by_r[i] = std::nullopt;
      }
    }
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_assets < 1) throw std::invalid_argument("config: n_assets must be >= 1");
  if (n_periods <= n_assets)
    throw std::invalid_argument("config: n_periods must exceed n_assets");
  if (n_trials < 1) throw std::invalid_argument("config: n_trials must be >= 1");
  if (r_grid.empty()) throw std::invalid_argument("config: r_grid is empty");
  if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
  if (const auto* hyper = std::get_if<HyperModel>(&model)) {
    hyper->validate();
  } else {
    const auto& explicit_params = std::get<ExplicitHyperParams>(model);
    if (explicit_params.means.size() != n_assets ||
        explicit_params.variances.size() != n_assets)
      throw std::invalid_argument(
          "config: explicit hyperparameter lists must have n_assets entries");
    HyperParams{explicit_params.means, explicit_params.variances}.validate();
  }
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.se = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  return s;
}

MomentSet prediction_moments(const ModelSpec& model) {
  if (const auto* hyper = std::get_if<HyperModel>(&model))
    return population_moments(*hyper);
  const auto& explicit_params = std::get<ExplicitHyperParams>(model);
  return empirical_moments(
      HyperParams{explicit_params.means, explicit_params.variances});
}

HyperParams trial_hyperparams(const ExperimentConfig& config, int trial_index) {
  if (const auto* hyper = std::get_if<HyperModel>(&config.model))
    return sample_hyperparams(
        *hyper, config.n_assets,
        derive_seed(config.seed, static_cast<std::uint64_t>(trial_index), 0));
  const auto& explicit_params = std::get<ExplicitHyperParams>(config.model);
  return HyperParams{explicit_params.means, explicit_params.variances};
}

TrialResult run_trial(const ExperimentConfig& config, int trial_index,
                      double R) {
  config.validate();
  const HyperParams params = trial_hyperparams(config, trial_index);
  const MarketSample sample = generate_market(
      params, config.n_periods, config.noise,
      derive_seed(config.seed, static_cast<std::uint64_t>(trial_index), 1));
  const TrialSolver solver(sample, params);
  return evaluate_trial(solver, R);
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentSummary summary;
  summary.config = config;
  summary.moments = prediction_moments(config.model);

  const int n_trials = config.n_trials;
  std::vector<TrialOutcome> outcomes(n_trials);

  int n_workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  if (n_workers > n_trials) n_workers = n_trials;

  if (n_workers == 1) {
    for (int m = 0; m < n_trials; ++m) outcomes[m] = compute_trial(config, m);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int m = next.fetch_add(1); m < n_trials; m = next.fetch_add(1))
        outcomes[m] = compute_trial(config, m);
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Sequential reduce in trial order: results are byte-identical no matter
  // how many workers ran the trials.
  std::vector<double> ee, re, rr;
  for (int m = 0; m < n_trials; ++m) {
    const TrialOutcome& outcome = outcomes[m];
    if (!outcome.ok) {
      ++summary.n_failed_trials;
      if (summary.failure_messages.size() < 8)
        summary.failure_messages.push_back("trial " + std::to_string(m) +
                                           ": " + outcome.error);
      continue;
    }
    ee.push_back(outcome.forms.ee);
    re.push_back(outcome.forms.re);
    rr.push_back(outcome.forms.rr);
  }

  const double alpha = config.alpha();
  summary.probes.ee = summarize(ee);
  summary.probes.re = summarize(re);
  summary.probes.rr = summarize(rr);
  summary.probes.ee_limit = summary.moments.m_v1 / (alpha - 1.0);
  summary.probes.re_limit = summary.moments.m_v1r / (alpha - 1.0);
  summary.probes.rr_limit = summary.moments.m_v1r2 / (alpha - 1.0);

  summary.rows.reserve(config.r_grid.size());
  for (std::size_t i = 0; i < config.r_grid.size(); ++i) {
    RRowStats row;
    row.r = config.r_grid[i];
    std::vector<double> eps, qw, sharpe, eps_or, exp_eps_or, eps_prime;
    std::vector<double> kappa_ratios, kappa_prime_ratios;
    for (int m = 0; m < n_trials; ++m) {
      if (!outcomes[m].ok || !outcomes[m].by_r[i]) continue;
      const TrialResult& t = *outcomes[m].by_r[i];
      eps.push_back(t.epsilon);
      qw.push_back(t.q_w);
      sharpe.push_back(t.sharpe);
      eps_or.push_back(t.epsilon_or);
      exp_eps_or.push_back(t.expected_epsilon_or);
      eps_prime.push_back(t.epsilon_prime);
      kappa_ratios.push_back(t.epsilon_or / t.epsilon);
      kappa_prime_ratios.push_back(t.epsilon_prime / t.epsilon);
      if (t.epsilon_or < t.epsilon) ++row.n_or_violations;
    }
    row.n_ok = static_cast<int>(eps.size());
    row.epsilon = summarize(eps);
    row.q_w = summarize(qw);
    row.sharpe = summarize(sharpe);
    row.epsilon_or = summarize(eps_or);
    row.expected_epsilon_or = summarize(exp_eps_or);
    row.epsilon_prime = summarize(eps_prime);
    if (row.n_ok > 0) {
      row.kappa_hat = row.epsilon_or.mean / row.epsilon.mean;
      row.kappa_prime_hat = row.epsilon_prime.mean / row.epsilon.mean;
      row.kappa_hat_ratio_mean = summarize(kappa_ratios).mean;
      row.kappa_prime_hat_ratio_mean = summarize(kappa_prime_ratios).mean;
    } else {
      row.kappa_hat = std::numeric_limits<double>::quiet_NaN();
      row.kappa_prime_hat = row.kappa_hat;
      row.kappa_hat_ratio_mean = row.kappa_hat;
      row.kappa_prime_hat_ratio_mean = row.kappa_hat;
    }
    try {
      row.prediction = replica::predict(summary.moments, alpha, row.r);
    } catch (const std::exception&) {
      // Infeasible point for the closed forms (degenerate v1 with R != r1):
      // keep the row but mark the prediction as absent.
      row.prediction = replica::ReplicaPrediction{};
      row.prediction.alpha = alpha;
      row.prediction.r = row.r;
      row.prediction.epsilon = std::numeric_limits<double>::quiet_NaN();
      row.prediction.q_w = std::numeric_limits<double>::quiet_NaN();
      row.prediction.sharpe = std::numeric_limits<double>::quiet_NaN();
      row.prediction.q_s = std::numeric_limits<double>::quiet_NaN();
      row.prediction.epsilon_prime = std::numeric_limits<double>::quiet_NaN();
      row.prediction.epsilon_or = std::numeric_limits<double>::quiet_NaN();
      row.prediction.q_w_or = std::numeric_limits<double>::quiet_NaN();
      row.prediction.kappa = alpha / (alpha - 1.0);
      row.prediction.kappa_prime = row.prediction.kappa * row.prediction.kappa;
    }
    summary.rows.push_back(row);
  }
  return summary;
}

}  // namespace minrisk
