#include "iscsc/sensing_metrics.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"

namespace iscsc {

namespace {

constexpr double kMaxPriorCondition = 1e12;

double trace_re(const CMat& a, const CMat& b) { return std::real((a * b).trace()); }

}  // namespace

FisherCoefficients fisher_coefficients(const VehicleState& est, const ArrayGeometry& geom,
                                       const FisherSettings& settings) {
  if (settings.n_samples < 1) throw DomainError("n_samples must be >= 1");
  if (!(settings.sigma_r2 > 0.0)) throw DomainError("sigma_r2 must be > 0");
  const CVec a = steering_vector(est.theta, geom);
  const CVec da = steering_derivative(est.theta, geom);
  const CMat b = a * a.adjoint();
  const CMat bdot = da * a.adjoint() + a * da.adjoint();
  const double c = 2.0 * settings.n_samples / settings.sigma_r2;

  // Tr(X R Y^H) = Tr(Y^H X R)
  const CMat cross = bdot.adjoint() * b;
  FisherCoefficients fc;
  fc.tt = c * std::norm(est.beta) * (bdot.adjoint() * bdot);
  fc.bb = c * (b.adjoint() * b);
  fc.tb_re = linalg::hermitian_part(c * std::conj(est.beta) * cross);
  fc.tb_im = linalg::hermitian_part(c * kJ * std::conj(est.beta) * cross);
  fc.tt = linalg::hermitian_part(fc.tt);
  fc.bb = linalg::hermitian_part(fc.bb);
  return fc;
}

FisherBlocks evaluate(const FisherCoefficients& fc, const CMat& r_x) {
  FisherBlocks fb;
  fb.j_tt = trace_re(fc.tt, r_x);
  fb.j_tb(0) = trace_re(fc.tb_re, r_x);
  fb.j_tb(1) = trace_re(fc.tb_im, r_x);
  const double jbb = trace_re(fc.bb, r_x);
  fb.j_bb = jbb * Mat2::Identity();
  return fb;
}

FisherBlocks fim_observation(const VehicleState& est, const CMat& r_x, const ArrayGeometry& geom,
                             const FisherSettings& settings) {
  if (r_x.rows() != geom.num_antennas || r_x.cols() != geom.num_antennas) {
    throw DomainError("R_x dimension does not match the array");
  }
  if (linalg::min_eigenvalue(r_x) < -linalg::kPsdTolerance) {
    throw DomainError("R_x is not PSD");
  }
  const CVec a = steering_vector(est.theta, geom);
  const CVec da = steering_derivative(est.theta, geom);
  const CMat b = a * a.adjoint();
  const CMat bdot = da * a.adjoint() + a * da.adjoint();
  const double c = 2.0 * settings.n_samples / settings.sigma_r2;

  FisherBlocks fb;
  fb.j_tt = c * std::norm(est.beta) * std::real((bdot * r_x * bdot.adjoint()).trace());
  const cplx cross = std::conj(est.beta) * (b * r_x * bdot.adjoint()).trace();
  fb.j_tb(0) = c * std::real(cross);
  fb.j_tb(1) = c * std::real(kJ * cross);
  fb.j_bb = c * std::real((b * r_x * b.adjoint()).trace()) * Mat2::Identity();
  return fb;
}

double prior_information(const Mat4& m_pred) {
  if (!m_pred.allFinite() || linalg::condition_number(m_pred) > kMaxPriorCondition) {
    throw NumericalError("M_pred is singular or ill-conditioned");
  }
  return m_pred.inverse()(0, 0);
}

Mat3 fim_posterior(const FisherBlocks& obs, const Mat4& m_pred) {
  Mat3 j = Mat3::Zero();
  j(0, 0) = obs.j_tt + prior_information(m_pred);
  j.block<1, 2>(0, 1) = obs.j_tb;
  j.block<2, 1>(1, 0) = obs.j_tb.transpose();
  j.block<2, 2>(1, 1) = obs.j_bb;
  return j;
}

double pcrb_theta(const Mat3& j) {
  const Mat2 jbb = j.block<2, 2>(1, 1);
  const Eigen::RowVector2d jtb = j.block<1, 2>(0, 1);
  double schur = j(0, 0);
  if (jtb.squaredNorm() > 0.0) {
    Eigen::LDLT<Mat2> ldlt(jbb);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
      throw NumericalError("J_beta_beta is singular with nonzero coupling");
    }
    schur -= jtb * ldlt.solve(jtb.transpose());
  }
  if (!(schur > 0.0)) throw NumericalError("angle is not identifiable (Schur complement <= 0)");
  return 1.0 / schur;
}

PcrbReport pcrb_report(const FisherBlocks& obs, const Mat4& m_pred) {
  const Mat3 j = fim_posterior(obs, m_pred);
  return {pcrb_theta(j), j(0, 0) - obs.j_tt};
}

}  // namespace iscsc
