#include "iscsc/opt/sdp.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"
#include "iscsc/opt/bti.hpp"
#include "iscsc/semantic_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace iscsc::opt {

void SlotProblem::validate() const {
  geom.validate();
  const std::size_t k = intended.size();
  const std::size_t l = eaves.size();
  if (k < 1) throw DomainError("at least one intended vehicle is required");
  if (sensed.size() != k + l || m_pred.size() != k + l)
    throw DomainError("sensed states must cover every intended and unintended vehicle");
  const Eigen::Index n = geom.num_antennas;
  auto check = [&](const ChannelEstimate& e) {
    if (e.h_bar.size() != n || e.omega.rows() != n || e.omega.cols() != n)
      throw DomainError("channel estimate dimension does not match the array");
    if (linalg::min_eigenvalue(e.omega) < -1e-10) throw DomainError("CSI error covariance is not PSD");
  };
  for (const auto& e : intended) check(e);
  for (const auto& e : eaves) check(e);
}

double comm_sense_budget(const AoState& state, const OptimizerSettings& cfg) {
  return cfg.power_budget - computing_power(state.rho, cfg.computing_coeff);
}

SdpModel assemble_sdp(const AoState& state, const SlotProblem& problem,
                      const OptimizerSettings& cfg) {
  problem.validate();
  const std::size_t K = problem.intended_count();
  const std::size_t L = problem.eaves_count();
  const int n = problem.geom.num_antennas;
  if (state.rho.size() != K) throw DomainError("one extraction ratio per intended vehicle is required");
  if (!(cfg.power_budget > 0.0)) throw DomainError("power budget must be positive");
  const double pt = cfg.power_budget;

  conic::ProblemBuilder builder;
  SdpModel model;

  // Normalized covariances W~ = W / P_t.
  std::vector<conic::HermExpr> w_n, r_n;
  for (std::size_t k = 0; k < K; ++k) w_n.push_back(builder.add_hermitian(n));
  for (std::size_t i = 0; i < K + L; ++i) r_n.push_back(builder.add_hermitian(n));
  for (const auto& x : w_n) {
    builder.add_psd(x);
    model.w.push_back(pt * x);
  }
  for (const auto& x : r_n) {
    builder.add_psd(x);
    model.r.push_back(pt * x);
  }
  model.structure.psd_variables = static_cast<int>(2 * K + L);

  conic::HermExpr rx(n);
  for (const auto& x : model.w) rx += x;
  for (const auto& x : model.r) rx += x;

  // Outage restrictions.
  auto family_scale = [&](const ChannelEstimate& e) {
    return 1.0 / (pt * (e.h_bar.squaredNorm() + e.omega.trace().real()));
  };
  for (std::size_t k = 0; k < K; ++k) {
    const double gamma_hat = sinr_threshold(state.lambda, state.rho[k], cfg.iota);
    const BtiExpr blk = intended_bti_expr(k, problem.intended[k], model.w, model.r, gamma_hat, cfg.sigma_c2);
    add_bti_constraints(builder, blk, cfg.epsilon1, family_scale(problem.intended[k]));
  }
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t k = 0; k < K; ++k) {
      const double cap = sinr_threshold(state.varrho, state.rho[k], cfg.iota);
      const BtiExpr blk = eavesdropper_bti_expr(k, problem.eaves[l], model.w, model.r, cap, cfg.sigma_c2);
      add_bti_constraints(builder, blk, cfg.epsilon2, family_scale(problem.eaves[l]));
    }
  model.structure.bti_psd_blocks = static_cast<int>(K + K * L);
  model.structure.soc_blocks = static_cast<int>(K + K * L);

  // PCRB LMIs and epigraphs, diagonally scaled by reference FIM magnitudes
  // taken at isotropic full power.
  const CMat r_ref = CMat::Identity(n, n) * (pt / n);
  std::vector<double> s_theta(K + L);
  conic::ScalarExpr objective;
  std::vector<conic::ScalarExpr> t_scaled(K + L);
  for (std::size_t i = 0; i < K + L; ++i) {
    const FisherCoefficients fc = fisher_coefficients(problem.sensed[i], problem.geom, cfg.fisher);
    const FisherBlocks ref = evaluate(fc, r_ref);
    const double prior = prior_information(problem.m_pred[i]);
    s_theta[i] = ref.j_tt + prior;
    const double s_beta = ref.j_bb(0, 0);
    if (!(s_theta[i] > 0.0) || !(s_beta > 0.0)) throw NumericalError("degenerate Fisher scaling");

    const conic::ScalarExpr u_n = builder.add_scalar();
    const conic::ScalarExpr t_n = builder.add_scalar();
    const double cross = 1.0 / std::sqrt(s_theta[i] * s_beta);
    const conic::ScalarExpr m00 = (1.0 / s_theta[i]) * (rx.trace_with(fc.tt) + conic::ScalarExpr(prior)) - u_n;
    const conic::ScalarExpr m01 = cross * rx.trace_with(fc.tb_re);
    const conic::ScalarExpr m02 = cross * rx.trace_with(fc.tb_im);
    const conic::ScalarExpr mbb = (1.0 / s_beta) * rx.trace_with(fc.bb);
    builder.add_psd(conic::SymExpr::from_entries({{m00, m01, m02}, {m01, mbb, 0.0}, {m02, 0.0, mbb}}));
    builder.add_psd(conic::SymExpr::from_entries({{t_n, 1.0}, {1.0, u_n}}));

    model.u.push_back(s_theta[i] * u_n);
    model.t.push_back((1.0 / s_theta[i]) * t_n);
    t_scaled[i] = t_n;
  }
  const double s_min = *std::min_element(s_theta.begin(), s_theta.end());
  for (std::size_t i = 0; i < K + L; ++i) objective += (cfg.kappa2 * s_min / s_theta[i]) * t_scaled[i];
  model.structure.lmi_blocks = static_cast<int>(K + L);
  model.structure.epigraph_blocks = static_cast<int>(K + L);

  // Power budget on the normalized covariances.
  model.comm_sense_budget = comm_sense_budget(state, cfg);
  conic::ScalarExpr used;
  for (const auto& x : w_n) used += x.trace();
  for (const auto& x : r_n) used += x.trace();
  builder.add_nonneg(conic::ScalarExpr(model.comm_sense_budget / pt) - used);

  builder.minimize(objective);
  model.structure.linear_rows = builder.counts().nonneg;
  model.program = builder.build();
  return model;
}

SdpSolution solve_sdp_step(const SdpModel& model, const conic::ConicSolver& solver) {
  const conic::ConicSolution raw = solver.solve(model.program);
  SdpSolution out;
  out.status = raw.status;
  out.solver_iterations = raw.iterations;
  out.inaccurate = raw.inaccurate;
  if (raw.status != conic::SolveStatus::Optimal) return out;

  const Vec& x = raw.x;
  double total = 0.0;
  for (const auto& e : model.w) {
    out.beams.w.push_back(linalg::project_psd(linalg::hermitian_part(e.value(x))));
    total += out.beams.w.back().trace().real();
  }
  for (const auto& e : model.r) {
    out.beams.r.push_back(linalg::project_psd(linalg::hermitian_part(e.value(x))));
    total += out.beams.r.back().trace().real();
  }
  if (total > model.comm_sense_budget && total > 0.0) {
    const double shrink = std::max(0.0, model.comm_sense_budget) / total;
    for (auto& m : out.beams.w) m *= shrink;
    for (auto& m : out.beams.r) m *= shrink;
  }
  for (std::size_t i = 0; i < model.u.size(); ++i) {
    out.u.push_back(model.u[i].value(x));
    out.pcrb_bound.push_back(model.t[i].value(x));
    out.sensing_objective += out.pcrb_bound.back();
  }
  return out;
}

}  // namespace iscsc::opt
