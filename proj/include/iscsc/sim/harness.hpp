#pragma once

#include "iscsc/opt/ao.hpp"
#include "iscsc/sim/config.hpp"

#include <functional>
#include <string>
#include <vector>

namespace iscsc::sim {

struct VehicleSlot {
  VehicleState truth;
  VehicleState pred;
  VehicleState post;
  double pcrb = 0.0;
};

/// Link metrics of one intended vehicle. Plain fields use the channel the
/// optimizer saw; *_true fields use the ground-truth channel.
struct IntendedSlot {
  double rho = 1.0;
  double sinr = 0.0;
  double rate_conventional = 0.0;
  double rate_semantic = 0.0;
  double ssr = 0.0;
  double sinr_true = 0.0;
  double rate_semantic_true = 0.0;
  double ssr_true = 0.0;
};

struct SlotRecord {
  int slot = 0;
  double time_s = 0.0;
  bool feasible = false;        // SDP optimal and randomized beams meet every restriction
  bool optimized = false;       // optimizer ran and produced beams for this slot
  int ao_iterations = 0;
  bool ao_converged = false;
  std::string solver_status = "disabled";
  bool randomization_ok = false;
  double lambda = 0.0;          // NaN when the optimizer did not run
  double varrho = 0.0;
  double power_comm_sense_w = 0.0;
  double power_compute_w = 0.0;
  double power_budget_w = 0.0;
  double mc_intended_violation = 0.0;  // NaN when not evaluated
  double mc_eaves_violation = 0.0;
  std::vector<VehicleSlot> vehicles;   // config file order
  std::vector<IntendedSlot> intended;  // k-th intended vehicle in file order
  BeamformerSet beams;                 // transmitted covariances
  std::vector<ChannelEstimate> intended_est;
  std::vector<ChannelEstimate> eaves_est;
  opt::AoDiagnostics ao;
};

struct RunResult {
  std::vector<SlotRecord> records;
  std::string stop_reason;  // "slots", "coverage" or "state"
};

/// Per-slot loop: truth evolution, filter prediction, optimization and rank-one
/// recovery, metrics, measurement with the chosen beams, filter update.
/// Deterministic for a given config (seed included).
RunResult run_simulation(const ScenarioConfig& cfg,
                         const std::function<void(const SlotRecord&)>& on_slot = {});

}  // namespace iscsc::sim
