#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "minrisk/harness.hpp"

namespace minrisk {

/// One double as text with 17 significant digits (shortest round-trippable
/// form is not used; the schema pins %.17g). NaN renders as the empty
/// string in CSV cells, representing an absent value.
std::string format_17g(double value);

/// predictions.csv: header R,epsilon,q_w,sharpe,epsilon_or,q_w_or and one
/// row per grid point. UTF-8, LF line endings.
std::string predictions_csv(const MomentSet& moments, double alpha,
                            const std::vector<double>& r_grid);

/// scalars.csv: name,value rows for the R-independent prediction block
/// (r1, v1, r_star, the three Sharpe values, kappa, kappa', epsilon0, ...).
std::string scalars_csv(const MomentSet& moments, double alpha);

/// dual_bounds.csv: epsilon,r_max,r_min rows for the supplied risk budgets.
std::string dual_bounds_csv(const MomentSet& moments, double alpha,
                            const std::vector<double>& epsilons);

/// summary.csv: one row per return coefficient with empirical mean/SE and
/// prediction columns for epsilon, q_w, sharpe, epsilon_or, epsilon_prime,
/// plus the opportunity-loss ratio estimates.
std::string summary_csv(const ExperimentSummary& summary);

/// summary.json: everything in the summary, including the quadratic-form
/// probes, both opportunity-loss estimators, and a config echo.
std::string summary_json(const ExperimentSummary& summary);

/// Three-panel SVG (epsilon, q_w, sharpe versus R): prediction curves on a
/// fine grid with the empirical means overlaid as points with +/-1 SE bars.
std::string summary_svg(const ExperimentSummary& summary);

/// FNV-1a 64-bit content hash, hex encoded; used in the run manifest.
std::string fnv1a64_hex(std::string_view content);

/// Collects every file a command writes and emits manifest.json with the
/// resolved config echo, seeds, timings, and a size+checksum inventory.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_echo_json,
              std::uint64_t seed);

  /// Write content to dir/name and record it in the inventory.
  void write_file(const std::string& dir, const std::string& name,
                  std::string_view content);

  void add_warning(std::string message);
  void set_wall_ms(double ms) { wall_ms_ = ms; }

  /// Serialize and write manifest.json into dir (not self-listed).
  void write(const std::string& dir) const;

 private:
  std::string command_;
  std::string config_echo_json_;
  std::uint64_t seed_;
  double wall_ms_ = 0;
  std::vector<std::string> warnings_;
  struct Entry {
    std::string path;
    std::uint64_t bytes;
    std::string checksum;
  };
  std::vector<Entry> entries_;
};

}  // namespace minrisk
