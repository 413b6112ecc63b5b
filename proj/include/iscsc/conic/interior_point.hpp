#pragma once

#include "iscsc/conic/program.hpp"

namespace iscsc::conic {

/// Primal-dual interior-point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and a Mehrotra predictor-corrector. Handles
/// nonnegative, second-order and real PSD cones. Infeasibility and
/// unboundedness are detected from the embedding certificates.
class InteriorPointSolver final : public ConicSolver {
 public:
  explicit InteriorPointSolver(SolverSettings settings = {}) : settings_(settings) {}

  ConicSolution solve(const ConicProgram& program) const override;

  const SolverSettings& settings() const { return settings_; }

 private:
  SolverSettings settings_;
};

}  // namespace iscsc::conic
