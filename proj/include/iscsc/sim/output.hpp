#pragma once

#include "iscsc/sim/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace iscsc::sim {

/// Column names in file order. Per-vehicle columns use the config file index
/// (v0_, v1_, ...); per-intended columns use the k-th intended vehicle (k0_, ...).
std::vector<std::string> csv_header(const ScenarioConfig& cfg);

/// One CSV line (no trailing newline); reals with 9 significant digits, NaN as "nan".
std::string csv_row(const SlotRecord& rec);

std::string format_csv(const std::vector<SlotRecord>& records, const ScenarioConfig& cfg);

struct TrackingErrors {
  std::vector<double> rmse_theta;     // per vehicle, radians
  std::vector<double> rmse_distance;  // per vehicle, metres
};

/// RMSE of the filter estimate (posterior; the prediction under filter=none)
/// against ground truth, over all records.
TrackingErrors tracking_errors(const std::vector<SlotRecord>& records);

/// Flat map of named scalars: counts, RMSEs, mean rates/SSR/PCRB.
nlohmann::json summarize(const RunResult& run, const ScenarioConfig& cfg);

/// Per-slot transmitted beams, channel estimates and targets (input of mc-outage).
nlohmann::json beams_document(const std::vector<SlotRecord>& records);

/// One slot of a saved beams.json.
struct SavedSlot {
  int slot = 0;
  bool feasible = false;
  bool optimized = false;
  opt::AoState targets;  // lambda, varrho, rho (lambda/varrho NaN when absent)
  BeamformerSet beams;
  std::vector<ChannelEstimate> intended_est;
  std::vector<ChannelEstimate> eaves_est;
};

/// Inverse of beams_document. Throws IoError on malformed input.
std::vector<SavedSlot> parse_beams_document(const nlohmann::json& doc);

/// Writes config.json, slots.csv, summary.json and beams.json into `dir`
/// (created if missing). Throws IoError naming the failing path.
void write_outputs(const RunResult& run, const ScenarioConfig& cfg, const std::filesystem::path& dir);

}  // namespace iscsc::sim
