#pragma once

#include "iscsc/array_channel.hpp"
#include "iscsc/conic/program.hpp"
#include "iscsc/sensing_metrics.hpp"
#include "iscsc/state.hpp"

#include <vector>

namespace iscsc::opt {

/// Per-slot optimizer parameters. Powers are in watts.
struct OptimizerSettings {
  double power_budget = 0.1;      // P_t
  double sigma_c2 = 1e-6;         // communication noise power
  double kappa1 = 0.5;
  double kappa2 = 0.5;
  double epsilon1 = 0.01;         // intended-rate outage tolerance
  double epsilon2 = 0.01;         // eavesdropper-rate outage tolerance
  double delta_lambda = 0.1;
  double delta_varrho = 0.1;
  double convergence_eps = 1e-3;  // Frobenius increment on W and R
  int max_iterations = 100;
  double computing_coeff = 0.01;  // F
  double iota = 1.0;
  double rho_lb = 0.65;
  bool semantic = true;
  double lambda0 = 0.1;
  double bisection_tol = 1e-4;
  int randomization_candidates = 100;
  FisherSettings fisher;
  conic::SolverSettings solver;
};

/// Everything the optimizer sees in one slot. `sensed` and `m_pred` cover all
/// tracked vehicles, intended ones first (same order as `intended`, `eaves`).
struct SlotProblem {
  ArrayGeometry geom;
  std::vector<ChannelEstimate> intended;
  std::vector<ChannelEstimate> eaves;
  std::vector<VehicleState> sensed;
  std::vector<Mat4> m_pred;

  std::size_t intended_count() const { return intended.size(); }
  std::size_t eaves_count() const { return eaves.size(); }
  void validate() const;
};

/// Rate targets and extraction ratios carried through the alternating loop.
struct AoState {
  double lambda = 0.1;   // intended semantic-rate target
  double varrho = 0.0;   // eavesdropper semantic-rate cap
  std::vector<double> rho;
  std::vector<double> u;  // PCRB slacks of the last solve
  int iteration = 0;
  bool frozen = false;
  double feasible_lambda = 0.1;
  double feasible_varrho = 0.0;
};

}  // namespace iscsc::opt
