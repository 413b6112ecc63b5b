#pragma once

#include "iscsc/errors.hpp"
#include "iscsc/opt/sdp.hpp"

#include <vector>

namespace iscsc::opt {

/// The first SDP of a slot was infeasible at its starting targets.
class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

struct RhoSearch {
  bool feasible = false;
  double rho = 1.0;
};

/// Smallest shared rho in [rho_lb, 1] with -F K ln(rho) + Tr(sum W + sum R) <= P_t,
/// located by bisection to absolute tolerance `tol`. Infeasible when even
/// rho = 1 exceeds the budget.
RhoSearch bisect_rho(const BeamformerSet& beams, std::size_t intended, double coeff_f,
                     double power_budget, double rho_lb, double tol = 1e-4);

/// Feasible step: lambda += d_lambda, varrho = max(0, varrho - d_varrho), and
/// the pre-step targets become the last feasible pair. Infeasible step: revert
/// to the last feasible pair and freeze. A frozen state never moves again.
AoState update_targets(const AoState& state, bool feasible, const OptimizerSettings& cfg);

/// lambda0 from the settings, varrho0 = eavesdropper semantic rate at the
/// isotropic full-power point, rho0 = rho_lb (1 with semantics off).
AoState initial_state(const SlotProblem& problem, const OptimizerSettings& cfg);

struct AoDiagnostics {
  std::vector<double> objective;      // kappa1 (lambda - varrho) - kappa2 sum t
  std::vector<bool> feasible;
  std::vector<double> w_increment;    // max_k ||W_k^it - W_k^{it-1}||_F
  std::vector<double> r_increment;
  std::vector<conic::SolveStatus> status;
  int iterations = 0;
  int solver_calls = 0;
  bool converged = false;
};

struct AoResult {
  SdpSolution solution;  // last feasible iterate
  AoState state;         // targets and ratios that produced it
  AoState next;          // state to warm-start the following slot
  AoDiagnostics diagnostics;
};

/// Alternates {SDP solve, rho bisection, target update} until both W and R
/// move less than convergence_eps in Frobenius norm or the iteration cap.
/// Throws NoFeasiblePoint when the first solve is infeasible.
AoResult ao_loop(const SlotProblem& problem, const AoState& start, const OptimizerSettings& cfg,
                 const conic::ConicSolver& solver);

/// Runs ao_loop from `start`; when that first solve is infeasible, backs the
/// targets off geometrically (lambda - d 2^j, varrho + d 2^j) and finally
/// tries initial_state(). Throws NoFeasiblePoint if nothing is feasible.
AoResult ao_loop_with_backoff(const SlotProblem& problem, const AoState& start,
                              const OptimizerSettings& cfg, const conic::ConicSolver& solver);

}  // namespace iscsc::opt
