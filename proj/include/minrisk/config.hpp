#pragma once

#include <string>

#include "minrisk/harness.hpp"

namespace minrisk {

/// Parse the declarative JSON experiment config. Accepts either "n_periods"
/// or "alpha" (n_periods = round(alpha * n_assets)), an r_grid given as an
/// explicit array or as {"min", "max", "count"}, and the three model kinds
/// "scaled_square", "direct" and "explicit". Missing fields keep the
/// defaults of ExperimentConfig. Throws std::invalid_argument on malformed
/// input.
ExperimentConfig parse_config_json(const std::string& text);

/// Serialize the resolved config (explicit n_periods and r_grid list) as
/// JSON; round-trips through parse_config_json.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace minrisk
