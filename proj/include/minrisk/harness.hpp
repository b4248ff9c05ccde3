#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minrisk/hyperparams.hpp"
#include "minrisk/market.hpp"
#include "minrisk/optimizer.hpp"
#include "minrisk/replica.hpp"

namespace minrisk {

/// A user-supplied (r, v) list used verbatim for every trial instead of a
/// generating distribution.
struct ExplicitHyperParams {
  Vector means;
  Vector variances;
};

using ModelSpec = std::variant<HyperModel, ExplicitHyperParams>;

/// Full description of one experiment run.
struct ExperimentConfig {
  Index n_assets = 1000;
  Index n_periods = 2000;
  int n_trials = 100;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  NoiseSpec noise;
  ModelSpec model = HyperModel{};
  std::vector<double> r_grid;

  double alpha() const {
    return static_cast<double>(n_periods) / static_cast<double>(n_assets);
  }
  void validate() const;
};

/// Cross-trial mean and standard error (unbiased sample std / sqrt(n));
/// the standard error is NaN when fewer than two trials contribute.
struct Summary {
  int n = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

Summary summarize(const std::vector<double>& values);

/// Aggregated empirical statistics at one return coefficient, with the
/// matching predictions carried side by side (never mixed).
struct RRowStats {
  double r = 0;
  int n_ok = 0;
  Summary epsilon, q_w, sharpe, epsilon_or, expected_epsilon_or, epsilon_prime;
  replica::ReplicaPrediction prediction;
  double kappa_hat = 0;        // mean(epsilon_or) / mean(epsilon), primary
  double kappa_prime_hat = 0;  // mean(epsilon_prime) / mean(epsilon)
  double kappa_hat_ratio_mean = 0;        // mean of per-trial ratios
  double kappa_prime_hat_ratio_mean = 0;  // mean of per-trial ratios
  int n_or_violations = 0;  // trials with epsilon_or < epsilon (expected: 0)
  bool valid() const { return n_ok > 0; }
};

/// Trial-averaged J^-1 quadratic forms next to their large-system limits.
struct ProbeStats {
  Summary ee, re, rr;
  double ee_limit = 0, re_limit = 0, rr_limit = 0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  MomentSet moments;  // the moments the predictions were evaluated with
  std::vector<RRowStats> rows;
  ProbeStats probes;
  int n_failed_trials = 0;
  std::vector<std::string> failure_messages;  // first few, for the manifest
};

/// Moments feeding the predictions: population moments of the generating
/// model, or plug-in moments of an explicit (r, v) list.
MomentSet prediction_moments(const ModelSpec& model);

/// Hyperparameters for one trial: redrawn per trial for distribution models
/// (sub-stream 0 of the trial seed), the fixed list for explicit models.
HyperParams trial_hyperparams(const ExperimentConfig& config, int trial_index);

/// Run a single (trial, R) cell: sample hyperparameters, generate the
/// market (sub-stream 1), solve, measure. Deterministic per
/// (seed, trial_index, R).
TrialResult run_trial(const ExperimentConfig& config, int trial_index,
                      double R);

/// Run the full M-trial experiment over the R grid. Trials are scheduled
/// across workers; per-trial seeds come from the documented splitting rule
/// and aggregation is a sequential reduce over trial index, so parallel and
/// serial runs produce identical summaries.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace minrisk
