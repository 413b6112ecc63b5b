#pragma once

#include "iscsc/rng.hpp"
#include "iscsc/state.hpp"

#include <cstdint>
#include <vector>

namespace iscsc {

/// Process noise Q1 = diag(sigma_theta^2, sigma_d^2, sigma_v^2, sigma_beta^2).
struct ProcessNoise {
  Vec4 variances = Vec4::Zero();

  Mat4 q1() const { return variances.asDiagonal(); }
  void validate() const;
};

struct SlotClock {
  double delta_t = 0.02;  // seconds
  int slot_index = 0;
};

/// One draw of the state noise u_t. beta noise is complex with its variance
/// split evenly between real and imaginary parts.
struct StateNoise {
  double theta = 0.0;
  double distance = 0.0;
  double velocity = 0.0;
  cplx beta{0.0, 0.0};
};

StateNoise draw_state_noise(const ProcessNoise& noise, Engine& rng);

/// Noiseless state transition g1 plus the given noise draw:
///   theta' = theta + v dT sin(theta) / d
///   d'     = d - v dT cos(theta)
///   v'     = v
///   beta'  = beta (1 + v dT cos(theta) / d)
/// Throws StateError when d <= 0 on entry or d' <= 0 on exit.
VehicleState evolve_state(const VehicleState& s, const SlotClock& clock,
                          const StateNoise& noise = {});

/// Jacobian of g1 over the real coordinates (theta, d, v, |beta|).
Mat4 jacobian_g1(const VehicleState& s, const SlotClock& clock);

/// States for slots 1..n_slots (the initial state is not included).
/// Throws TrajectoryError carrying the failing slot index.
std::vector<VehicleState> simulate_trajectory(const VehicleState& init, const SlotClock& clock,
                                              const ProcessNoise& noise, int n_slots,
                                              std::uint64_t seed);

}  // namespace iscsc
