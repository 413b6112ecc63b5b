#include "iscsc/sim/config.hpp"

#include "iscsc/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace iscsc::sim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

// Reads an optional member, rejecting wrong types with the dotted field name.
class Reader {
 public:
  Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) fail(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    const std::string name = path(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(name, "expected true/false");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) fail(name, "expected a non-negative integer");
      out = v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(name, "expected an integer");
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(name, "expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(name, "expected a string");
      out = v.get<std::string>();
    } else {
      if (!v.is_array()) fail(name, "expected an array of numbers");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_number()) fail(name, "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }

  // Declares a key that the caller parses by hand.
  void mark(const char* key) { seen_.insert(key); }

  Reader section(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Reader(j_.contains(key) ? j_.at(key) : empty, path(key));
  }

  void reject_unknown() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(path(k.c_str()), "unknown field");
  }

  std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) fail(field, what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string to_string(FilterKind f) {
  switch (f) {
    case FilterKind::Ekf: return "ekf";
    case FilterKind::Pf: return "pf";
    case FilterKind::None: return "none";
  }
  return "ekf";
}

FilterKind parse_filter(const std::string& s) {
  if (s == "ekf") return FilterKind::Ekf;
  if (s == "pf") return FilterKind::Pf;
  if (s == "none") return FilterKind::None;
  throw ConfigError("config field 'tracking.filter': expected ekf, pf or none, got '" + s + "'");
}

VehicleState VehicleConfig::initial_state() const {
  return {deg_to_rad(theta_deg), distance_m, velocity_mps, cplx(beta_re, beta_im)};
}

ProcessNoise VehicleConfig::process_noise() const {
  ProcessNoise n;
  for (int i = 0; i < 4; ++i) n.variances(i) = q1.at(i);
  return n;
}

Mat4 VehicleConfig::initial_covariance() const {
  const std::vector<double>& d = m0 ? *m0 : q1;
  Vec4 v;
  for (int i = 0; i < 4; ++i) v(i) = d.at(i);
  return v.asDiagonal();
}

opt::OptimizerSettings ScenarioConfig::optimizer_settings() const {
  opt::OptimizerSettings s;
  s.power_budget = power_budget_w();
  s.sigma_c2 = comm_noise_w();
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  s.epsilon1 = epsilon1;
  s.epsilon2 = epsilon2;
  s.delta_lambda = delta_lambda;
  s.delta_varrho = delta_varrho;
  s.convergence_eps = convergence_eps;
  s.max_iterations = max_iterations;
  s.computing_coeff = computing_coeff_w;
  s.iota = iota;
  s.rho_lb = rho_lb;
  s.semantic = semantic_enabled;
  s.lambda0 = lambda0;
  s.bisection_tol = bisection_tol;
  s.randomization_candidates = randomization_candidates;
  s.fisher.n_samples = sensing_samples;
  s.fisher.sigma_r2 = radar_noise_w();
  return s;
}

MeasurementModel ScenarioConfig::measurement_model(std::size_t vehicle) const {
  const VehicleConfig& v = vehicles.at(vehicle);
  MeasurementModel m;
  m.q2 = Vec3(v.q2.at(0), v.q2.at(1), v.q2.at(2));
  m.snr_link = snr_link;
  m.sigma_r2 = radar_noise_w();
  return m;
}

std::size_t ScenarioConfig::intended_count() const {
  std::size_t k = 0;
  for (const auto& v : vehicles) k += v.intended ? 1 : 0;
  return k;
}

std::size_t ScenarioConfig::eaves_count() const { return vehicles.size() - intended_count(); }

std::vector<std::size_t> ScenarioConfig::ordering() const {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    if (vehicles[i].intended) order.push_back(i);
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    if (!vehicles[i].intended) order.push_back(i);
  return order;
}

void ScenarioConfig::validate() const {
  require(schema_version == kSchemaVersion, "schema_version",
          "unsupported version " + std::to_string(schema_version));
  require(antennas >= 1, "geometry.antennas", "must be >= 1");
  require(finite(element_spacing) && element_spacing > 0.0, "geometry.element_spacing", "must be > 0");
  require(finite(power_budget_dbm), "power.budget_dbm", "must be finite");
  require(finite(comm_noise_dbm), "power.comm_noise_dbm", "must be finite");
  require(finite(radar_noise_dbm), "power.radar_noise_dbm", "must be finite");
  require(finite(kappa1) && kappa1 >= 0.0, "optimizer.kappa1", "must be >= 0");
  require(finite(kappa2) && kappa2 >= 0.0, "optimizer.kappa2", "must be >= 0");
  require(epsilon1 > 0.0 && epsilon1 < 1.0, "optimizer.epsilon1", "must lie in (0, 1)");
  require(epsilon2 > 0.0 && epsilon2 < 1.0, "optimizer.epsilon2", "must lie in (0, 1)");
  require(finite(delta_lambda) && delta_lambda > 0.0, "optimizer.delta_lambda", "must be > 0");
  require(finite(delta_varrho) && delta_varrho > 0.0, "optimizer.delta_varrho", "must be > 0");
  require(finite(convergence_eps) && convergence_eps > 0.0, "optimizer.convergence_eps", "must be > 0");
  require(max_iterations >= 1, "optimizer.max_iterations", "must be >= 1");
  require(finite(lambda0) && lambda0 > 0.0, "optimizer.lambda0", "must be > 0");
  require(randomization_candidates >= 1, "optimizer.randomization_candidates", "must be >= 1");
  require(finite(bisection_tol) && bisection_tol > 0.0, "optimizer.bisection_tol", "must be > 0");
  require(finite(iota) && iota > 0.0, "semantic.iota", "must be > 0");
  require(rho_lb > 0.0 && rho_lb <= 1.0, "semantic.rho_lb", "must lie in (0, 1]");
  require(finite(computing_coeff_w) && computing_coeff_w >= 0.0, "semantic.computing_coeff_w", "must be >= 0");
  require(sensing_samples >= 1, "sensing.samples", "must be >= 1");
  require(finite(omega_scale) && omega_scale >= 0.0, "channel.omega_scale", "must be >= 0");
  require(finite(delta_t_s) && delta_t_s > 0.0, "timing.delta_t_s", "must be > 0");
  require(slots >= 0, "timing.slots", "must be >= 0");
  require(finite(coverage_m) && coverage_m > 0.0, "timing.coverage_m", "must be > 0");
  require(particles >= 1, "tracking.particles", "must be >= 1");
  require(mc_samples == 0 || mc_samples >= 1000, "monte_carlo.samples", "must be 0 or >= 1000");
  require(!vehicles.empty(), "vehicles", "at least one vehicle is required");
  require(intended_count() >= 1, "vehicles", "at least one intended vehicle is required");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const VehicleConfig& v = vehicles[i];
    const std::string p = "vehicles[" + std::to_string(i) + "].";
    require(finite(v.theta_deg), p + "theta_deg", "must be finite");
    require(finite(v.distance_m) && v.distance_m > 0.0, p + "distance_m", "must be > 0");
    require(finite(v.velocity_mps), p + "velocity_mps", "must be finite");
    require(finite(v.beta_re) && finite(v.beta_im) && std::hypot(v.beta_re, v.beta_im) > 0.0,
            p + "beta", "must be finite and non-zero");
    require(v.q1.size() == 4, p + "q1", "expected 4 variances");
    for (double x : v.q1) require(finite(x) && x >= 0.0, p + "q1", "variances must be >= 0");
    require(v.q2.size() == 3, p + "q2", "expected 3 variances");
    for (double x : v.q2) require(finite(x) && x > 0.0, p + "q2", "variances must be > 0");
    if (v.m0) {
      require(v.m0->size() == 4, p + "m0", "expected 4 variances");
      for (double x : *v.m0) require(finite(x) && x >= 0.0, p + "m0", "variances must be >= 0");
    }
  }
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  VehicleConfig eaves;
  eaves.intended = false;
  eaves.theta_deg = 5.0;
  eaves.distance_m = 55.0;
  eaves.velocity_mps = 20.0;
  eaves.q1 = {0.02 * 0.02, 0.2 * 0.2, 0.5 * 0.5, 0.1 * 0.1};
  VehicleConfig intended;
  intended.intended = true;
  intended.theta_deg = 15.0;
  intended.distance_m = 8.0;
  intended.velocity_mps = 5.0;
  intended.q1 = {0.02 * 0.02, 0.1 * 0.1, 0.1 * 0.1, 0.1 * 0.1};
  c.vehicles = {eaves, intended};
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig c;
  c.vehicles.clear();
  Reader r(root, "");
  r.get("schema_version", c.schema_version);
  if (!root.contains("schema_version")) fail("schema_version", "missing");
  r.get("seed", c.seed);
  {
    Reader s = r.section("geometry");
    s.get("antennas", c.antennas);
    s.get("element_spacing", c.element_spacing);
    s.reject_unknown();
  }
  {
    Reader s = r.section("power");
    s.get("budget_dbm", c.power_budget_dbm);
    s.get("comm_noise_dbm", c.comm_noise_dbm);
    s.get("radar_noise_dbm", c.radar_noise_dbm);
    s.reject_unknown();
  }
  {
    Reader s = r.section("optimizer");
    s.get("enabled", c.optimizer_enabled);
    s.get("kappa1", c.kappa1);
    s.get("kappa2", c.kappa2);
    s.get("epsilon1", c.epsilon1);
    s.get("epsilon2", c.epsilon2);
    s.get("delta_lambda", c.delta_lambda);
    s.get("delta_varrho", c.delta_varrho);
    s.get("convergence_eps", c.convergence_eps);
    s.get("max_iterations", c.max_iterations);
    s.get("lambda0", c.lambda0);
    s.get("randomization_candidates", c.randomization_candidates);
    s.get("bisection_tol", c.bisection_tol);
    s.reject_unknown();
  }
  {
    Reader s = r.section("semantic");
    s.get("enabled", c.semantic_enabled);
    s.get("iota", c.iota);
    s.get("rho_lb", c.rho_lb);
    s.get("computing_coeff_w", c.computing_coeff_w);
    s.reject_unknown();
  }
  {
    Reader s = r.section("sensing");
    s.get("samples", c.sensing_samples);
    s.reject_unknown();
  }
  {
    Reader s = r.section("channel");
    s.get("omega_scale", c.omega_scale);
    s.get("perfect_csi", c.perfect_csi);
    s.reject_unknown();
  }
  {
    Reader s = r.section("timing");
    s.get("delta_t_s", c.delta_t_s);
    s.get("slots", c.slots);
    s.get("coverage_m", c.coverage_m);
    s.reject_unknown();
  }
  {
    Reader s = r.section("tracking");
    std::string filter = to_string(c.filter);
    s.get("filter", filter);
    c.filter = parse_filter(filter);
    s.get("particles", c.particles);
    s.get("snr_link", c.snr_link);
    s.reject_unknown();
  }
  {
    Reader s = r.section("monte_carlo");
    s.get("samples", c.mc_samples);
    s.reject_unknown();
  }
  r.mark("vehicles");
  r.reject_unknown();

  if (!root.contains("vehicles") || !root["vehicles"].is_array()) fail("vehicles", "expected an array");
  for (std::size_t i = 0; i < root["vehicles"].size(); ++i) {
    const std::string p = "vehicles[" + std::to_string(i) + "]";
    Reader v(root["vehicles"][i], p);
    VehicleConfig vc;
    std::string role = "intended";
    v.get("role", role);
    if (role != "intended" && role != "unintended") fail(p + ".role", "expected intended or unintended");
    vc.intended = role == "intended";
    v.get("theta_deg", vc.theta_deg);
    v.get("distance_m", vc.distance_m);
    v.get("velocity_mps", vc.velocity_mps);
    v.get("beta_re", vc.beta_re);
    v.get("beta_im", vc.beta_im);
    v.get("q1", vc.q1);
    v.get("q2", vc.q2);
    std::vector<double> m0;
    v.get("m0", m0);
    if (root["vehicles"][i].contains("m0")) vc.m0 = m0;
    v.reject_unknown();
    c.vehicles.push_back(vc);
  }
  c.validate();
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["geometry"] = {{"antennas", c.antennas}, {"element_spacing", c.element_spacing}};
  j["power"] = {{"budget_dbm", c.power_budget_dbm},
                {"comm_noise_dbm", c.comm_noise_dbm},
                {"radar_noise_dbm", c.radar_noise_dbm}};
  j["optimizer"] = {{"enabled", c.optimizer_enabled},
                    {"kappa1", c.kappa1},
                    {"kappa2", c.kappa2},
                    {"epsilon1", c.epsilon1},
                    {"epsilon2", c.epsilon2},
                    {"delta_lambda", c.delta_lambda},
                    {"delta_varrho", c.delta_varrho},
                    {"convergence_eps", c.convergence_eps},
                    {"max_iterations", c.max_iterations},
                    {"lambda0", c.lambda0},
                    {"randomization_candidates", c.randomization_candidates},
                    {"bisection_tol", c.bisection_tol}};
  j["semantic"] = {{"enabled", c.semantic_enabled},
                   {"iota", c.iota},
                   {"rho_lb", c.rho_lb},
                   {"computing_coeff_w", c.computing_coeff_w}};
  j["sensing"] = {{"samples", c.sensing_samples}};
  j["channel"] = {{"omega_scale", c.omega_scale}, {"perfect_csi", c.perfect_csi}};
  j["timing"] = {{"delta_t_s", c.delta_t_s}, {"slots", c.slots}, {"coverage_m", c.coverage_m}};
  j["tracking"] = {{"filter", to_string(c.filter)}, {"particles", c.particles}, {"snr_link", c.snr_link}};
  j["monte_carlo"] = {{"samples", c.mc_samples}};
  j["vehicles"] = json::array();
  for (const auto& v : c.vehicles) {
    json jv = {{"role", v.intended ? "intended" : "unintended"},
               {"theta_deg", v.theta_deg},
               {"distance_m", v.distance_m},
               {"velocity_mps", v.velocity_mps},
               {"beta_re", v.beta_re},
               {"beta_im", v.beta_im},
               {"q1", v.q1},
               {"q2", v.q2}};
    if (v.m0) jv["m0"] = *v.m0;
    j["vehicles"].push_back(jv);
  }
  return j.dump(2) + "\n";
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << serialize_config(cfg);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace iscsc::sim
