#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minrisk/config.hpp"
#include "minrisk/report.hpp"
#include "minrisk/rng.hpp"

using namespace minrisk;

TEST_CASE("config JSON round-trips through the serializer") {
  const std::string text = R"({
    "n_assets": 200, "alpha": 2.0, "n_trials": 20, "seed": 7,
    "noise": "uniform",
    "model": {"kind": "scaled_square",
              "mean": {"lower": 1, "upper": 2, "power": 2},
              "scale": {"lower": 1, "upper": 2, "power": 2}},
    "r_grid": {"min": 1.0, "max": 2.0, "count": 21}
  })";
  const ExperimentConfig config = parse_config_json(text);
  CHECK(config.n_assets == 200);
  CHECK(config.n_periods == 400);
  CHECK(config.n_trials == 20);
  CHECK(config.noise.kind == NoiseSpec::Kind::Uniform);
  CHECK(config.r_grid.size() == 21);
  CHECK(config.r_grid.front() == doctest::Approx(1.0));
  CHECK(config.r_grid.back() == doctest::Approx(2.0));

  const ExperimentConfig back = parse_config_json(config_to_json(config));
  CHECK(back.n_periods == config.n_periods);
  CHECK(back.seed == config.seed);
  CHECK(back.r_grid == config.r_grid);
  CHECK(std::holds_alternative<HyperModel>(back.model));
}

TEST_CASE("explicit and direct model kinds parse") {
  const ExperimentConfig explicit_config = parse_config_json(R"({
    "n_assets": 2, "n_periods": 8, "n_trials": 1,
    "model": {"kind": "explicit", "means": [1.0, 2.0], "variances": [1.0, 1.0]},
    "r_grid": [1.5]
  })");
  explicit_config.validate();
  CHECK(std::holds_alternative<ExplicitHyperParams>(explicit_config.model));

  const ExperimentConfig direct = parse_config_json(R"({
    "model": {"kind": "direct",
              "mean": {"lower": 1, "upper": 2, "power": 2},
              "scale": {"lower": 0.5, "upper": 1.5, "power": 3}},
    "r_grid": [1.0]
  })");
  const auto& model = std::get<HyperModel>(direct.model);
  CHECK(model.coupling == HyperModel::Coupling::Direct);
  CHECK(model.scale_dist.power == 3.0);
}

TEST_CASE("malformed configs raise config errors") {
  CHECK_THROWS_AS(parse_config_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_json("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_json(R"({"noise": "cauchy"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"kind": "nope"}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config_json(R"({"r_grid": {"min": 2, "max": 1, "count": 5}})"),
      std::invalid_argument);
}

TEST_CASE("format_17g round-trips doubles and hides NaN") {
  Rng rng(404);
  for (int i = 0; i < 1000; ++i) {
    const double value =
        (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    const std::string text = format_17g(value);
    CHECK(std::strtod(text.c_str(), nullptr) == value);
  }
  CHECK(format_17g(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("CSV schemas are stable") {
  HyperModel model;
  const MomentSet moments = population_moments(model);
  const std::string pred = predictions_csv(moments, 2.0, {1.0, 1.5, 2.0});
  CHECK(pred.rfind("R,epsilon,q_w,sharpe,epsilon_or,q_w_or\n", 0) == 0);
  CHECK(pred.find("\r") == std::string::npos);

  std::istringstream lines(pred);
  std::string line;
  int n_lines = 0;
  while (std::getline(lines, line)) ++n_lines;
  CHECK(n_lines == 4);

  const std::string scalars = scalars_csv(moments, 2.0);
  CHECK(scalars.rfind("name,value\n", 0) == 0);
  CHECK(scalars.find("kappa,2\n") != std::string::npos);
  CHECK(scalars.find("R_star,") != std::string::npos);

  const std::string dual = dual_bounds_csv(moments, 2.0, {1.2, 1.5});
  CHECK(dual.rfind("epsilon,r_max,r_min\n", 0) == 0);
}

TEST_CASE("scalar block satisfies the Sharpe-square identity as printed") {
  HyperModel model;
  const MomentSet moments = population_moments(model);
  const std::string csv = scalars_csv(moments, 2.0);
  auto value_of = [&csv](const std::string& name) {
    const auto at = csv.find("\n" + name + ",");
    REQUIRE(at != std::string::npos);
    return std::strtod(csv.c_str() + at + name.size() + 2, nullptr);
  };
  const double s_star = value_of("S_R_star");
  const double s_r1 = value_of("S_R1");
  const double s_inf = value_of("S_inf");
  const double residual =
      std::abs(s_star * s_star - s_r1 * s_r1 - s_inf * s_inf);
  CHECK(residual <= 1e-12 * s_star * s_star);
}

TEST_CASE("uniform-variance prediction table has its vertex at (m, 0.5)") {
  // two-point means with m = 1.2, unit variance, alpha = 2: the epsilon
  // column is a parabola with minimum (alpha-1)/2 = 0.5 at R = m
  HyperParams params;
  params.means.resize(2);
  params.variances.resize(2);
  params.means << 0.9, 1.5;
  params.variances << 1.0, 1.0;
  const MomentSet moments = empirical_moments(params);
  const std::string csv =
      predictions_csv(moments, 2.0, {1.0, 1.1, 1.2, 1.3, 1.4});
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> eps;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    eps.push_back(std::strtod(line.substr(comma + 1).c_str(), nullptr));
  }
  REQUIRE(eps.size() == 5);
  CHECK(eps[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eps[0] > eps[1]);
  CHECK(eps[1] > eps[2]);
  CHECK(eps[2] < eps[3]);
  CHECK(eps[3] < eps[4]);
}

TEST_CASE("dual-bound table inverts the prediction curve") {
  HyperModel model;
  const MomentSet moments = population_moments(model);
  const double r = 1.8;
  const double eps = replica::min_risk(moments, 2.0, r);
  const std::string csv = dual_bounds_csv(moments, 2.0, {eps});
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  const auto first_comma = row.find(',');
  const auto second_comma = row.find(',', first_comma + 1);
  const double r_max =
      std::strtod(row.substr(first_comma + 1, second_comma - first_comma - 1)
                      .c_str(),
                  nullptr);
  CHECK(r_max == doctest::Approx(r).epsilon(1e-10));
}

TEST_CASE("manifest lists every emitted file with size and checksum") {
  // reference FNV-1a 64 vectors
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");

  const std::string dir =
      (std::filesystem::temp_directory_path() / "minrisk_manifest_test")
          .string();
  std::filesystem::remove_all(dir);
  RunManifest manifest("predict", "{\"seed\": 3}", 3);
  manifest.write_file(dir, "a.csv", "hello\n");
  manifest.write_file(dir, "b.csv", "world\n");
  manifest.add_warning("sample warning");
  manifest.write(dir);

  std::ifstream in(dir + "/manifest.json");
  REQUIRE(in.good());
  nlohmann::json parsed = nlohmann::json::parse(in);
  CHECK(parsed["outputs"].size() == 2);
  CHECK(parsed["outputs"][0]["path"] == "a.csv");
  CHECK(parsed["outputs"][0]["bytes"] == 6);
  CHECK(parsed["outputs"][0]["fnv1a64"] == fnv1a64_hex("hello\n"));
  CHECK(parsed["warnings"].size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("summary SVG renders three panels with data") {
  ExperimentConfig config;
  config.n_assets = 30;
  config.n_periods = 75;
  config.n_trials = 4;
  config.seed = 12;
  config.workers = 1;
  config.r_grid = {1.0, 1.5, 2.0};
  const ExperimentSummary summary = run_experiment(config);
  const std::string svg = summary_svg(summary);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("nan") == std::string::npos);
  int n_circles = 0;
  for (std::size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1))
    ++n_circles;
  CHECK(n_circles == 9);  // 3 panels x 3 grid points
}
