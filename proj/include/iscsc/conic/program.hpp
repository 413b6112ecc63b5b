#pragma once

#include "iscsc/types.hpp"

#include <string>
#include <vector>

namespace iscsc::conic {

/// Layout of the slack vector s: `nonneg` entries, then each second-order cone
/// (t, u) with t >= ||u||, then each PSD block. PSD blocks are stored in svec
/// form: lower triangle, column-major, off-diagonal entries scaled by sqrt(2),
/// so the Euclidean inner product of two svecs equals the trace inner product.
struct ConeDims {
  int nonneg = 0;
  std::vector<int> soc;  // cone dimensions, leading t included
  std::vector<int> psd;  // matrix orders

  int rows() const;
  /// Barrier degree: nonneg + #soc + sum of PSD orders.
  int degree() const;
};

inline int svec_size(int n) { return n * (n + 1) / 2; }

Vec svec(const Mat& m);
Mat smat(const Eigen::Ref<const Vec>& v, int n);

/// Standard conic form
///   minimize c^T x  subject to  G x + s = h,  A x = b,  s in K(dims).
/// The dual is  maximize -h^T z - b^T y  s.t.  G^T z + A^T y + c = 0, z in K.
struct ConicProgram {
  Vec c;
  Mat G;
  Vec h;
  Mat A;  // may have zero rows
  Vec b;
  ConeDims dims;

  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(SolveStatus s);

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Vec x, s, y, z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool inaccurate = false;  // met the accepted, not the requested, tolerances
};

struct SolverSettings {
  double feastol = 1e-8;    // requested primal/dual feasibility
  double abstol = 1e-8;
  double reltol = 1e-8;
  double accept_tol = 1e-6; // fallback acceptance when progress stalls
  int max_iterations = 100;
};

/// Pluggable conic solver boundary. Implementations are stateless per call.
class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual ConicSolution solve(const ConicProgram& program) const = 0;
};

}  // namespace iscsc::conic
