#include "iscsc/errors.hpp"
#include "iscsc/sim/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace iscsc;
using namespace iscsc::sim;

namespace {

std::string expect_config_error(const std::string& text) {
  try {
    parse_config(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for: " << text;
  return {};
}

std::string with(const std::string& section_json) {
  return R"({"schema_version": 1, )" + section_json +
         R"(, "vehicles": [{"role": "intended", "theta_deg": 15, "distance_m": 8, "velocity_mps": 5}]})";
}

}  // namespace

TEST(Config, UnitConversions) {
  EXPECT_NEAR(dbm_to_watts(20.0), 0.1, 1e-15);
  EXPECT_NEAR(dbm_to_watts(-30.0), 1e-6, 1e-21);
  const ScenarioConfig c = default_config();
  EXPECT_NEAR(c.power_budget_w(), 0.1, 1e-15);
  EXPECT_NEAR(c.comm_noise_w(), 1e-6, 1e-21);
  EXPECT_NEAR(c.vehicles[1].initial_state().theta, deg_to_rad(15.0), 1e-15);
}

TEST(Config, DefaultScenario) {
  const ScenarioConfig c = default_config();
  EXPECT_NO_THROW(c.validate());
  ASSERT_EQ(c.vehicles.size(), 2u);
  EXPECT_EQ(c.intended_count(), 1u);
  EXPECT_EQ(c.eaves_count(), 1u);
  EXPECT_EQ(c.ordering(), (std::vector<std::size_t>{1, 0}));
  const opt::OptimizerSettings o = c.optimizer_settings();
  EXPECT_DOUBLE_EQ(o.kappa1, 0.5);
  EXPECT_DOUBLE_EQ(o.rho_lb, 0.65);
  EXPECT_DOUBLE_EQ(o.epsilon1, 0.01);
  EXPECT_DOUBLE_EQ(o.delta_lambda, 0.1);
  EXPECT_DOUBLE_EQ(o.convergence_eps, 1e-3);
  EXPECT_EQ(o.max_iterations, 100);
  EXPECT_DOUBLE_EQ(c.delta_t_s, 0.02);
  EXPECT_DOUBLE_EQ(c.coverage_m, 100.0);
  EXPECT_EQ(c.vehicles[0].initial_covariance(), c.vehicles[0].process_noise().q1());
}

TEST(Config, RoundTrip) {
  ScenarioConfig c = default_config();
  c.seed = 123456789012345ULL;
  c.filter = FilterKind::Pf;
  c.vehicles[0].m0 = std::vector<double>{1e-4, 1e-3, 1e-2, 1e-1};
  c.mc_samples = 5000;
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  const auto path = std::filesystem::temp_directory_path() / "iscsc_cfg_roundtrip.json";
  save_config(c, path);
  EXPECT_EQ(load_config(path), c);
  std::filesystem::remove(path);
}

TEST(Config, PartialFileKeepsDefaults) {
  const ScenarioConfig c = parse_config(with(R"("geometry": {"antennas": 4})"));
  EXPECT_EQ(c.antennas, 4);
  EXPECT_DOUBLE_EQ(c.element_spacing, 0.5);
  EXPECT_EQ(c.vehicles.size(), 1u);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(expect_config_error(with(R"("geometry": {"antennas": 0})")).find("geometry.antennas"), std::string::npos);
  EXPECT_NE(expect_config_error(with(R"("geometry": {"antenas": 4})")).find("geometry.antenas"), std::string::npos);
  EXPECT_NE(expect_config_error(with(R"("semantic": {"rho_lb": 1.5})")).find("semantic.rho_lb"), std::string::npos);
  EXPECT_NE(expect_config_error(with(R"("tracking": {"filter": "ukf"})")).find("tracking.filter"), std::string::npos);
  EXPECT_NE(expect_config_error(with(R"("optimizer": {"epsilon1": "small"})")).find("optimizer.epsilon1"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"vehicles": []})").find("schema_version"), std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1, "vehicles": []})").find("vehicles"), std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 2, "vehicles": [{"role": "intended"}]})").find("schema_version"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1, "vehicles": [{"role": "unintended"}]})").find("vehicles"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1, "vehicles": [{"role": "intended", "q1": [1, 2]}]})")
                .find("vehicles[0].q1"),
            std::string::npos);
  EXPECT_NE(expect_config_error("{not json").find("JSON"), std::string::npos);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(load_config("/nonexistent/dir/cfg.json"), IoError);
}

TEST(Config, FilterNames) {
  for (FilterKind f : {FilterKind::Ekf, FilterKind::Pf, FilterKind::None}) EXPECT_EQ(parse_filter(to_string(f)), f);
  EXPECT_THROW(parse_filter("kalman"), ConfigError);
}
