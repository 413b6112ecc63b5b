#pragma once

#include "iscsc/array_channel.hpp"
#include "iscsc/beams.hpp"
#include "iscsc/conic/model.hpp"

#include <vector>

namespace iscsc::opt {

/// Bernstein-type restriction of Pr(e^H Q e + 2 Re{e^H r} + s >= 0) >= 1 - eps,
/// e ~ CN(0, I):
///   Tr(Q) - sqrt(2 ln(1/eps)) a + ln(eps) b + s >= 0
///   ||[vec(Q); sqrt(2) r]|| <= a,   b I + Q >= 0,   b >= 0.
struct BtiBlock {
  CMat q_mat;
  CVec r_vec;
  double s_scalar = 0.0;
  double epsilon = 0.01;
  double slack_a = 0.0;
  double slack_b = 0.0;

  /// Sets a and b to their tightest feasible values for the current (Q, r):
  /// a = ||[vec Q; sqrt2 r]||, b = max(0, -lambda_min(Q)).
  void tighten_slacks();
  /// Left side of the trace inequality at the current slacks.
  double trace_margin() const;
};

/// SINR threshold 2^{rate rho / iota} - 1 equivalent to S >= rate.
/// Throws DomainError unless rate * rho / iota > 0.
double sinr_threshold(double rate, double rho, double iota);

/// Intended-link block: chi = W_k / gamma_hat - sum_{k' != k} W_k' - sum_i R_i,
/// Q = Omega^{1/2} chi Omega^{1/2}, r = Omega^{1/2} chi h_bar, s = h_bar^H chi h_bar - sigma_c^2.
BtiBlock intended_bti(std::size_t k, const ChannelEstimate& est, const BeamformerSet& beams,
                      double gamma_hat, double sigma_c2, double epsilon);

/// Eavesdropper block: chi = sum_i R_i - W_k / Gamma_hat, s = h_bar^H chi h_bar + sigma_c^2.
BtiBlock eavesdropper_bti(std::size_t k, const ChannelEstimate& est, const BeamformerSet& beams,
                          double big_gamma_hat, double sigma_c2, double epsilon);

/// Same blocks with W and R as affine matrix expressions.
struct BtiExpr {
  conic::HermExpr q;
  conic::CVecExpr r;
  conic::ScalarExpr s;
};

BtiExpr intended_bti_expr(std::size_t k, const ChannelEstimate& est,
                          const std::vector<conic::HermExpr>& w,
                          const std::vector<conic::HermExpr>& r, double gamma_hat,
                          double sigma_c2);
BtiExpr eavesdropper_bti_expr(std::size_t k, const ChannelEstimate& est,
                              const std::vector<conic::HermExpr>& w,
                              const std::vector<conic::HermExpr>& r, double big_gamma_hat,
                              double sigma_c2);

/// Adds the restriction of `block` (scaled by `scale` > 0) to the builder,
/// creating fresh slack variables a, b. Returns {a, b}.
std::pair<conic::ScalarExpr, conic::ScalarExpr> add_bti_constraints(conic::ProblemBuilder& builder,
                                                                    const BtiExpr& block,
                                                                    double epsilon, double scale);

}  // namespace iscsc::opt
