#pragma once

#include "iscsc/array_channel.hpp"
#include "iscsc/beams.hpp"
#include "iscsc/kinematics.hpp"
#include "iscsc/state.hpp"

#include <cstdint>
#include <optional>

namespace iscsc {

/// Observation noise. The observation is (theta, d, v); q2 holds
/// (sigma_e^2, sigma_dhat^2, sigma_vhat^2). With snr_link the angle variance is
/// divided by the matched-filter echo SNR of the current transmit covariance.
struct MeasurementModel {
  Vec3 q2{1.0, 6e-7, 2e4};
  bool snr_link = true;
  double sigma_r2 = 1e-6;

  void validate() const;
  /// Effective Q2 for a given echo SNR (ignored unless snr_link and snr > 0).
  Mat3 covariance(std::optional<double> echo_snr) const;
};

struct Measurement {
  double theta_obs = 0.0;
  double d_obs = 1.0;
  double v_obs = 0.0;
  /// Echo SNR the observation was taken at; empty when no beams were given.
  std::optional<double> echo_snr;

  Vec3 vector() const { return {theta_obs, d_obs, v_obs}; }
};

/// Initial track: state and M0 (defaults to Q1 at the call site).
struct TrackPrior {
  VehicleState initial;
  Mat4 m0 = Mat4::Zero();
};

/// Builds the t = 0 belief. Rejects a non-symmetric or non-PSD M0.
TrackBelief init_belief(const TrackPrior& prior);

/// Observation function g2(q) = (theta, d, v).
Vec3 observe(const VehicleState& s);

/// Jacobian of g2: selects the first three coordinates.
Mat34 jacobian_g2(const VehicleState& s);

/// rho_snr = |beta|^2 a^H R_x a / sigma_r^2.
double echo_snr(const VehicleState& truth, const CMat& r_x, const ArrayGeometry& geom,
                double sigma_r2);

/// Noisy (theta, d, v) read-out of the true state.
Measurement simulate_measurement(const VehicleState& truth, const MeasurementModel& model,
                                 const BeamformerSet* beams, const ArrayGeometry& geom,
                                 std::uint64_t seed);
Measurement simulate_measurement(const VehicleState& truth, const MeasurementModel& model,
                                 const BeamformerSet* beams, const ArrayGeometry& geom,
                                 Engine& rng);

/// Steps (ii)+(iv): q_pred = g1(q_post), M_pred = G1 M_post G1^T + Q1 (symmetrized).
TrackBelief ekf_predict(const TrackBelief& prev, const SlotClock& clock, const ProcessNoise& noise);

/// Steps (v)-(vii): Kalman gain, state correction and (I - K G2) M_pred.
/// Throws NumericalError when the innovation covariance has condition > 1e12.
TrackBelief ekf_update(const TrackBelief& belief, const Measurement& z,
                       const MeasurementModel& model);

}  // namespace iscsc
