#pragma once

#include "iscsc/array_channel.hpp"
#include "iscsc/kinematics.hpp"
#include "iscsc/opt/settings.hpp"
#include "iscsc/tracking.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace iscsc::sim {

inline constexpr int kSchemaVersion = 1;

enum class FilterKind { Ekf, Pf, None };

std::string to_string(FilterKind f);
FilterKind parse_filter(const std::string& s);

/// One vehicle as written in the config file (degrees, metres, m/s).
struct VehicleConfig {
  bool intended = true;
  double theta_deg = 0.0;
  double distance_m = 10.0;
  double velocity_mps = 0.0;
  double beta_re = 1.0;
  double beta_im = 0.0;
  std::vector<double> q1{0.02 * 0.02, 0.2 * 0.2, 0.5 * 0.5, 0.1 * 0.1};
  std::vector<double> q2{1.0, 6e-7, 2e4};
  std::optional<std::vector<double>> m0;  // diagonal; defaults to q1

  VehicleState initial_state() const;
  ProcessNoise process_noise() const;
  Mat4 initial_covariance() const;
  bool operator==(const VehicleConfig&) const = default;
};

/// Scenario file contents in user units. Conversions to SI happen in the
/// accessor methods, so save/load round-trips exactly.
struct ScenarioConfig {
  int schema_version = kSchemaVersion;

  // geometry
  int antennas = 8;
  double element_spacing = 0.5;  // wavelengths

  // powers (dBm)
  double power_budget_dbm = 20.0;
  double comm_noise_dbm = -30.0;
  double radar_noise_dbm = -30.0;

  // optimizer
  bool optimizer_enabled = true;
  double kappa1 = 0.5;
  double kappa2 = 0.5;
  double epsilon1 = 0.01;
  double epsilon2 = 0.01;
  double delta_lambda = 0.1;
  double delta_varrho = 0.1;
  double convergence_eps = 1e-3;
  int max_iterations = 100;
  double lambda0 = 0.1;
  int randomization_candidates = 100;
  double bisection_tol = 1e-4;

  // semantic / computing
  bool semantic_enabled = true;
  double iota = 1.0;
  double rho_lb = 0.65;
  double computing_coeff_w = 0.01;  // F

  // sensing / channel
  int sensing_samples = 64;  // T
  double omega_scale = 0.01;
  bool perfect_csi = false;

  // timing
  double delta_t_s = 0.02;
  int slots = 100;
  double coverage_m = 100.0;

  // tracking
  FilterKind filter = FilterKind::Ekf;
  int particles = 1000;
  bool snr_link = true;

  // Monte-Carlo outage check per feasible slot (0 disables)
  int mc_samples = 0;

  std::uint64_t seed = 1;
  std::vector<VehicleConfig> vehicles;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  ArrayGeometry geometry() const { return {antennas, element_spacing}; }
  double power_budget_w() const { return dbm_to_watts(power_budget_dbm); }
  double comm_noise_w() const { return dbm_to_watts(comm_noise_dbm); }
  double radar_noise_w() const { return dbm_to_watts(radar_noise_dbm); }
  opt::OptimizerSettings optimizer_settings() const;
  MeasurementModel measurement_model(std::size_t vehicle) const;
  std::size_t intended_count() const;
  std::size_t eaves_count() const;
  /// Vehicle indices with intended vehicles first, in file order otherwise.
  std::vector<std::size_t> ordering() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Two-vehicle default scenario (one intended, one unintended).
ScenarioConfig default_config();

ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

}  // namespace iscsc::sim
