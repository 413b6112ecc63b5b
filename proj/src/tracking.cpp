#include "iscsc/tracking.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"
#include "iscsc/semantic_metrics.hpp"

#include <cmath>

namespace iscsc {

namespace {

constexpr double kMaxInnovationCondition = 1e12;

Mat4 symmetrize(const Mat4& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void MeasurementModel::validate() const {
  if (!(q2.array() > 0.0).all() || !q2.allFinite()) {
    throw DomainError("measurement noise variances must be finite and > 0");
  }
  if (!(sigma_r2 > 0.0)) throw DomainError("sigma_r2 must be > 0");
}

Mat3 MeasurementModel::covariance(std::optional<double> echo_snr) const {
  Vec3 d = q2;
  if (snr_link && echo_snr && *echo_snr > 0.0) d(0) /= *echo_snr;
  return d.asDiagonal();
}

TrackBelief init_belief(const TrackPrior& prior) {
  const Mat4& m = prior.m0;
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.norm())) {
    throw DomainError("M0 must be finite and symmetric");
  }
  if (linalg::min_eigenvalue(Mat(m)) < -linalg::kPsdTolerance) {
    throw DomainError("M0 must be PSD");
  }
  if (!(prior.initial.distance > 0.0)) throw DomainError("initial distance must be > 0");
  TrackBelief b;
  b.q_pred = prior.initial;
  b.q_post = prior.initial;
  b.m_pred = m;
  b.m_post = m;
  return b;
}

Vec3 observe(const VehicleState& s) { return {s.theta, s.distance, s.velocity}; }

Mat34 jacobian_g2(const VehicleState&) {
  Mat34 g = Mat34::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(2, 2) = 1.0;
  return g;
}

double echo_snr(const VehicleState& truth, const CMat& r_x, const ArrayGeometry& geom,
                double sigma_r2) {
  const CVec a = steering_vector(truth.theta, geom);
  const double gain = std::real(a.dot(r_x * a));
  return std::norm(truth.beta) * std::max(gain, 0.0) / sigma_r2;
}

Measurement simulate_measurement(const VehicleState& truth, const MeasurementModel& model,
                                 const BeamformerSet* beams, const ArrayGeometry& geom,
                                 Engine& rng) {
  Measurement z;
  if (beams != nullptr) {
    z.echo_snr = echo_snr(truth, transmit_covariance(*beams), geom, model.sigma_r2);
  }
  const Mat3 cov = model.covariance(z.echo_snr);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double e0 = n01(rng);
  const double e1 = n01(rng);
  const double e2 = n01(rng);
  z.theta_obs = truth.theta + std::sqrt(cov(0, 0)) * e0;
  z.d_obs = truth.distance + std::sqrt(cov(1, 1)) * e1;
  z.v_obs = truth.velocity + std::sqrt(cov(2, 2)) * e2;
  return z;
}

Measurement simulate_measurement(const VehicleState& truth, const MeasurementModel& model,
                                 const BeamformerSet* beams, const ArrayGeometry& geom,
                                 std::uint64_t seed) {
  Engine rng = make_stream(seed, 0);
  return simulate_measurement(truth, model, beams, geom, rng);
}

TrackBelief ekf_predict(const TrackBelief& prev, const SlotClock& clock,
                        const ProcessNoise& noise) {
  if (!prev.m_post.allFinite()) throw NumericalError("ekf_predict: non-finite M_post");
  TrackBelief out = prev;
  const Mat4 g1 = jacobian_g1(prev.q_post, clock);
  out.q_pred = evolve_state(prev.q_post, clock);
  out.m_pred = symmetrize(g1 * prev.m_post * g1.transpose() + noise.q1());
  if (!out.m_pred.allFinite()) throw NumericalError("ekf_predict: non-finite M_pred");
  return out;
}

TrackBelief ekf_update(const TrackBelief& belief, const Measurement& z,
                       const MeasurementModel& model) {
  const Mat34 g2 = jacobian_g2(belief.q_pred);
  const Mat3 q2 = model.covariance(z.echo_snr);
  const Mat3 innovation_cov = q2 + g2 * belief.m_pred * g2.transpose();
  if (linalg::condition_number(innovation_cov) > kMaxInnovationCondition) {
    throw NumericalError("ekf_update: innovation covariance is numerically singular");
  }
  const Eigen::Matrix<double, 4, 3> gain =
      belief.m_pred * g2.transpose() * innovation_cov.inverse();
  const Vec3 innovation = z.vector() - observe(belief.q_pred);

  TrackBelief out = belief;
  const Vec4 q = belief.q_pred.coords() + gain * innovation;
  out.q_post = VehicleState::from_coords(q, belief.q_pred.beta);
  out.m_post = symmetrize((Mat4::Identity() - gain * g2) * belief.m_pred);
  if (!out.m_post.allFinite()) throw NumericalError("ekf_update: non-finite M_post");
  return out;
}

}  // namespace iscsc
