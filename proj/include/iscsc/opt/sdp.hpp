#pragma once

#include "iscsc/beams.hpp"
#include "iscsc/conic/model.hpp"
#include "iscsc/opt/settings.hpp"

#include <vector>

namespace iscsc::opt {

/// Block counts of an assembled program, for structural audits.
struct SdpStructure {
  int psd_variables = 0;    // W_k and R_i
  int lmi_blocks = 0;       // PCRB LMIs
  int epigraph_blocks = 0;  // [[t, 1], [1, U]]
  int bti_psd_blocks = 0;
  int soc_blocks = 0;
  int linear_rows = 0;
};

/// The per-slot conic program plus the maps from solver variables back to
/// physical quantities (watts for W/R, natural units for U and t).
struct SdpModel {
  conic::ConicProgram program;
  SdpStructure structure;
  std::vector<conic::HermExpr> w;
  std::vector<conic::HermExpr> r;
  std::vector<conic::ScalarExpr> u;
  std::vector<conic::ScalarExpr> t;
  double comm_sense_budget = 0.0;
};

struct SdpSolution {
  BeamformerSet beams;
  std::vector<double> u;
  std::vector<double> pcrb_bound;  // epigraph values t_i >= 1 / U_i
  double sensing_objective = 0.0;  // sum_i t_i
  conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
  int solver_iterations = 0;
  bool inaccurate = false;

  bool optimal() const { return status == conic::SolveStatus::Optimal; }
};

/// Budget left for communication and sensing: P_t + F sum_k ln rho_k.
double comm_sense_budget(const AoState& state, const OptimizerSettings& cfg);

/// Builds the relaxed (rank constraint dropped) problem for fixed targets and
/// extraction ratios: minimize kappa2 sum t_i subject to the BTI restrictions,
/// PCRB LMIs, epigraph blocks and the power budget. Internally W and R are
/// normalized by P_t and each constraint family is rescaled to O(1).
SdpModel assemble_sdp(const AoState& state, const SlotProblem& problem,
                      const OptimizerSettings& cfg);

/// Solves and extracts Hermitian PSD beams (eigenvalues clamped at zero,
/// then rescaled if clamping pushed the trace over budget).
SdpSolution solve_sdp_step(const SdpModel& model, const conic::ConicSolver& solver);

}  // namespace iscsc::opt
