#include "iscsc/errors.hpp"
#include "iscsc/opt/outage.hpp"
#include "iscsc/rng.hpp"
#include "iscsc/sim/config.hpp"
#include "iscsc/sim/harness.hpp"
#include "iscsc/sim/output.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum Exit { kOk = 0, kConfig = 1, kInfeasible = 2, kIo = 3, kInternal = 4 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> filter;
  bool no_semantic = false;
  bool perfect_csi = false;
  std::optional<int> mc_samples;
};

iscsc::sim::ScenarioConfig load(const std::string& path, const Overrides& o) {
  iscsc::sim::ScenarioConfig cfg = path.empty() ? iscsc::sim::default_config() : iscsc::sim::load_config(path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.filter) cfg.filter = iscsc::sim::parse_filter(*o.filter);
  if (o.no_semantic) cfg.semantic_enabled = false;
  if (o.perfect_csi) cfg.perfect_csi = true;
  if (o.mc_samples) cfg.mc_samples = *o.mc_samples;
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config, const std::string& out, const Overrides& o) {
  const auto cfg = load(config, o);
  const auto run = iscsc::sim::run_simulation(cfg, [](const iscsc::sim::SlotRecord& r) {
    std::fprintf(stderr, "slot %4d  feasible=%d  status=%s  ao_iter=%d\n", r.slot, r.feasible ? 1 : 0,
                 r.solver_status.c_str(), r.ao_iterations);
  });
  iscsc::sim::write_outputs(run, cfg, out);
  std::size_t feasible = 0;
  for (const auto& r : run.records) feasible += r.feasible ? 1 : 0;
  std::cout << run.records.size() << " slots (" << run.stop_reason << "), " << feasible << " feasible, written to "
            << out << "\n";
  if (cfg.optimizer_enabled && !run.records.empty() && feasible == 0) return kInfeasible;
  return kOk;
}

int cmd_validate(const std::string& config, const Overrides& o) {
  const auto cfg = load(config, o);
  std::cout << "ok: " << cfg.vehicles.size() << " vehicles (" << cfg.intended_count() << " intended), N="
            << cfg.antennas << ", slots=" << cfg.slots << "\n";
  return kOk;
}

int cmd_mc_outage(const std::string& dir, const Overrides& o) {
  namespace fs = std::filesystem;
  auto cfg = iscsc::sim::load_config(fs::path(dir) / "config.json");
  if (o.seed) cfg.seed = *o.seed;
  const int samples = o.mc_samples.value_or(10000);
  if (samples < 1000) throw iscsc::ConfigError("mc-samples: must be >= 1000");

  std::ifstream in(fs::path(dir) / "beams.json");
  if (!in) throw iscsc::IoError("cannot read " + (fs::path(dir) / "beams.json").string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw iscsc::IoError(std::string("beams.json: ") + e.what());
  }
  const auto slots = iscsc::sim::parse_beams_document(doc);

  const double sigma_c2 = cfg.comm_noise_w();
  std::ostringstream csv;
  csv << "slot,constraint,eaves,intended,violation_rate,wilson_lower,wilson_upper,wilson_se,epsilon,pass\n";
  std::size_t checked = 0, failed = 0;
  for (const auto& s : slots) {
    if (!s.feasible) continue;
    auto rng = iscsc::make_stream(cfg.seed, 0x600 + static_cast<std::uint64_t>(s.slot));
    const auto rep = iscsc::opt::validate_outage_mc(s.beams, s.intended_est, s.eaves_est, s.targets, cfg.iota,
                                                    sigma_c2, static_cast<std::size_t>(samples), rng());
    auto emit = [&](const char* kind, int l, std::size_t k, const iscsc::opt::WilsonInterval& w, double eps) {
      const bool pass = w.rate <= eps + 3.0 * w.standard_error;
      ++checked;
      failed += pass ? 0 : 1;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%d,%s,%d,%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n", s.slot, kind, l, k, w.rate,
                    w.lower, w.upper, w.standard_error, eps, pass ? 1 : 0);
      csv << buf;
    };
    for (std::size_t k = 0; k < rep.intended.size(); ++k) emit("intended", -1, k, rep.intended[k], cfg.epsilon1);
    for (std::size_t l = 0; l < rep.eaves.size(); ++l)
      for (std::size_t k = 0; k < rep.eaves[l].size(); ++k)
        emit("eaves", static_cast<int>(l), k, rep.eaves[l][k], cfg.epsilon2);
  }
  const fs::path path = fs::path(dir) / "outage.csv";
  std::ofstream out(path);
  if (!out || !(out << csv.str())) throw iscsc::IoError("cannot write " + path.string());
  std::cout << checked << " constraints checked, " << failed << " above epsilon + 3 SE, written to " << path.string()
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular integrated sensing, communication and computing simulator"};
  app.require_subcommand(1);

  std::string config, out = "out";
  Overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "RNG seed");
    sub->add_option_function<std::string>("--filter", [&](const std::string& v) { o.filter = v; },
                                          "ekf | pf | none")
        ->check(CLI::IsMember({"ekf", "pf", "none"}));
    sub->add_flag("--no-semantic", o.no_semantic, "force rho = 1");
    sub->add_flag("--perfect-csi", o.perfect_csi, "optimize on the true channel");
    sub->add_option_function<int>("--mc-samples", [&](const int& v) { o.mc_samples = v; },
                                  "Monte-Carlo CSI draws per slot");
  };

  auto* run = app.add_subcommand("run", "simulate a scenario and write artifacts");
  run->add_option("--config", config, "scenario JSON (defaults built in when omitted)");
  run->add_option("--out", out, "output directory");
  add_common(run);

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--config", config, "scenario JSON")->required();
  add_common(validate);

  auto* mc = app.add_subcommand("mc-outage", "Monte-Carlo outage check of a saved run");
  mc->add_option("--out", out, "directory of a previous run")->required();
  mc->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "RNG seed");
  mc->add_option_function<int>("--mc-samples", [&](const int& v) { o.mc_samples = v; },
                               "CSI draws per slot (default 10000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config, out, o);
    if (validate->parsed()) return cmd_validate(config, o);
    return cmd_mc_outage(out, o);
  } catch (const iscsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const iscsc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
