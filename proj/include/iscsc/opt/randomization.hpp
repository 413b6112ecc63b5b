#pragma once

#include "iscsc/kernels.hpp"
#include "iscsc/opt/settings.hpp"

#include <cstdint>
#include <vector>

namespace iscsc::opt {

struct RandomizationResult {
  BeamformerSet beams;             // rank-one W (w_vec filled), R unchanged
  bool feasible = false;           // best margin >= -margin_tolerance
  double best_margin = 0.0;        // min over restrictions, normalized
  std::vector<std::vector<double>> candidate_margins;  // per intended vehicle
  std::vector<bool> principal_only;  // W_k was numerically rank one
};

/// Smallest normalized BTI trace margin over every intended and eavesdropper
/// restriction at fixed beams (slacks chosen tightest). >= 0 means feasible.
double min_bti_margin(const BeamformerSet& beams, const SlotProblem& problem, const AoState& state,
                      const OptimizerSettings& cfg);

/// Margins above -feastol * P_t count as met: the conic solver only
/// resolves the restrictions to that accuracy.
double margin_tolerance(const OptimizerSettings& cfg);

/// Rank-one recovery of every W_k. A numerically rank-one W_k (second to first
/// eigenvalue ratio <= 1e-6) maps to its scaled principal eigenvector. Otherwise
/// candidates w = W^{1/2} g, g ~ CN(0, I), plus the principal eigenvector and
/// the channel-matched direction W_k h_bar_k, each rescaled to Tr(W_k), are
/// scored by min_bti_margin and the best is kept.
RandomizationResult gaussian_randomization(const BeamformerSet& relaxed,
                                           const SlotProblem& problem, const AoState& state,
                                           const OptimizerSettings& cfg, std::uint64_t seed,
                                           kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace iscsc::opt
