#include "minrisk/config.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace minrisk {

namespace {

using nlohmann::json;

BoundedPareto parse_pareto(const json& node) {
  BoundedPareto dist;
  dist.lower = node.at("lower").get<double>();
  dist.upper = node.at("upper").get<double>();
  dist.power = node.at("power").get<double>();
  dist.validate();
  return dist;
}

json pareto_to_json(const BoundedPareto& dist) {
  return json{{"lower", dist.lower}, {"upper", dist.upper}, {"power", dist.power}};
}

NoiseSpec::Kind parse_noise(const std::string& name) {
  if (name == "gaussian") return NoiseSpec::Kind::Gaussian;
  if (name == "uniform") return NoiseSpec::Kind::Uniform;
  if (name == "rademacher") return NoiseSpec::Kind::Rademacher;
  throw std::invalid_argument("config: unknown noise kind '" + name + "'");
}

std::string noise_name(NoiseSpec::Kind kind) {
  switch (kind) {
    case NoiseSpec::Kind::Gaussian: return "gaussian";
    case NoiseSpec::Kind::Uniform: return "uniform";
    case NoiseSpec::Kind::Rademacher: return "rademacher";
  }
  return "gaussian";
}

ModelSpec parse_model(const json& node, Index n_assets) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "scaled_square" || kind == "direct") {
    HyperModel model;
    model.mean_dist = parse_pareto(node.at("mean"));
    model.scale_dist = parse_pareto(node.at("scale"));
    model.coupling = kind == "scaled_square" ? HyperModel::Coupling::ScaledSquare
                                             : HyperModel::Coupling::Direct;
    return model;
  }
  if (kind == "explicit") {
    const auto& means = node.at("means");
    const auto& variances = node.at("variances");
    if (!means.is_array() || !variances.is_array() ||
        means.size() != variances.size())
      throw std::invalid_argument(
          "config: explicit model needs equal-length means/variances arrays");
    ExplicitHyperParams params;
    params.means.resize(static_cast<Index>(means.size()));
    params.variances.resize(static_cast<Index>(variances.size()));
    for (std::size_t i = 0; i < means.size(); ++i) {
      params.means[static_cast<Index>(i)] = means[i].get<double>();
      params.variances[static_cast<Index>(i)] = variances[i].get<double>();
    }
    (void)n_assets;  // checked by ExperimentConfig::validate
    return params;
  }
  throw std::invalid_argument("config: unknown model kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                e.what());
  }
  if (!root.is_object())
    throw std::invalid_argument("config: top level must be an object");

  ExperimentConfig config;
  try {
    if (root.contains("n_assets"))
      config.n_assets = root["n_assets"].get<Index>();
    if (root.contains("n_periods")) {
      config.n_periods = root["n_periods"].get<Index>();
    } else if (root.contains("alpha")) {
      config.n_periods = static_cast<Index>(
          std::llround(root["alpha"].get<double>() *
                       static_cast<double>(config.n_assets)));
    }
    if (root.contains("n_trials")) config.n_trials = root["n_trials"].get<int>();
    if (root.contains("seed"))
      config.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("workers")) config.workers = root["workers"].get<int>();
    if (root.contains("noise"))
      config.noise.kind = parse_noise(root["noise"].get<std::string>());
    if (root.contains("model"))
      config.model = parse_model(root["model"], config.n_assets);

    if (root.contains("r_grid")) {
      const json& grid = root["r_grid"];
      config.r_grid.clear();
      if (grid.is_array()) {
        for (const auto& value : grid) config.r_grid.push_back(value.get<double>());
      } else if (grid.is_object()) {
        const double lo = grid.at("min").get<double>();
        const double hi = grid.at("max").get<double>();
        const int count = grid.at("count").get<int>();
        if (count < 1 || hi < lo)
          throw std::invalid_argument("config: bad r_grid range");
        for (int i = 0; i < count; ++i)
          config.r_grid.push_back(
              count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
      } else {
        throw std::invalid_argument("config: r_grid must be array or object");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return config;
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  root["n_assets"] = config.n_assets;
  root["n_periods"] = config.n_periods;
  root["n_trials"] = config.n_trials;
  root["seed"] = config.seed;
  root["workers"] = config.workers;
  root["noise"] = noise_name(config.noise.kind);
  if (const auto* model = std::get_if<HyperModel>(&config.model)) {
    root["model"] = {
        {"kind", model->coupling == HyperModel::Coupling::ScaledSquare
                     ? "scaled_square"
                     : "direct"},
        {"mean", pareto_to_json(model->mean_dist)},
        {"scale", pareto_to_json(model->scale_dist)}};
  } else {
    const auto& params = std::get<ExplicitHyperParams>(config.model);
    json means = json::array(), variances = json::array();
    for (Index i = 0; i < params.means.size(); ++i) {
      means.push_back(params.means[i]);
      variances.push_back(params.variances[i]);
    }
    root["model"] = {
        {"kind", "explicit"}, {"means", means}, {"variances", variances}};
  }
  root["r_grid"] = config.r_grid;
  return root.dump(2);
}

}  // namespace minrisk
