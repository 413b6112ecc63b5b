#pragma once

#include "iscsc/types.hpp"

namespace iscsc {

/// Kinematic/radiometric state of one vehicle: angle (rad), distance (m),
/// radial-geometry velocity (m/s) and complex round-trip coefficient.
struct VehicleState {
  double theta = 0.0;
  double distance = 1.0;
  double velocity = 0.0;
  cplx beta{1.0, 0.0};

  /// Real tracking coordinates (theta, d, v, |beta|).
  Vec4 coords() const { return {theta, distance, velocity, std::abs(beta)}; }

  /// Inverse of coords(); the phase of beta is taken from `phase_source`.
  static VehicleState from_coords(const Vec4& q, cplx phase_source = {1.0, 0.0});

  bool operator==(const VehicleState&) const = default;
};

inline VehicleState VehicleState::from_coords(const Vec4& q, cplx phase_source) {
  const double mag = std::abs(phase_source);
  const cplx unit = mag > 0.0 ? phase_source / mag : cplx{1.0, 0.0};
  return {q(0), q(1), q(2), q(3) * unit};
}

/// Per-vehicle EKF belief: prediction (q_{t|t-1}, M_{t|t-1}) and posterior (q_t, M_t).
struct TrackBelief {
  VehicleState q_pred;
  Mat4 m_pred = Mat4::Zero();
  VehicleState q_post;
  Mat4 m_post = Mat4::Zero();
};

}  // namespace iscsc
