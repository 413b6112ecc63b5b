#include "iscsc/kinematics.hpp"

#include "iscsc/errors.hpp"

#include <cmath>

namespace iscsc {

void ProcessNoise::validate() const {
  if ((variances.array() < 0.0).any() || !variances.allFinite()) {
    throw DomainError("process noise variances must be finite and >= 0");
  }
}

StateNoise draw_state_noise(const ProcessNoise& noise, Engine& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  StateNoise u;
  u.theta = std::sqrt(noise.variances(0)) * n01(rng);
  u.distance = std::sqrt(noise.variances(1)) * n01(rng);
  u.velocity = std::sqrt(noise.variances(2)) * n01(rng);
  const double half = std::sqrt(0.5 * noise.variances(3));
  const double re = half * n01(rng);
  const double im = half * n01(rng);
  u.beta = {re, im};
  return u;
}

VehicleState evolve_state(const VehicleState& s, const SlotClock& clock, const StateNoise& noise) {
  if (!(s.distance > 0.0)) throw StateError("distance must be positive before evolution");
  const double step = s.velocity * clock.delta_t / s.distance;
  VehicleState next;
  next.theta = s.theta + step * std::sin(s.theta) + noise.theta;
  next.distance = s.distance - s.velocity * clock.delta_t * std::cos(s.theta) + noise.distance;
  next.velocity = s.velocity + noise.velocity;
  next.beta = s.beta * (1.0 + step * std::cos(s.theta)) + noise.beta;
  if (!(next.distance > 0.0)) {
    throw StateError("vehicle reached the RSU projection point (d' = " +
                     std::to_string(next.distance) + ")");
  }
  return next;
}

Mat4 jacobian_g1(const VehicleState& s, const SlotClock& clock) {
  const double dt = clock.delta_t;
  const double d = s.distance;
  const double v = s.velocity;
  const double sn = std::sin(s.theta);
  const double cs = std::cos(s.theta);
  const double b = std::abs(s.beta);

  Mat4 g = Mat4::Zero();
  g(0, 0) = 1.0 + v * dt * cs / d;
  g(0, 1) = -v * dt * sn / (d * d);
  g(0, 2) = dt * sn / d;

  g(1, 0) = v * dt * sn;
  g(1, 1) = 1.0;
  g(1, 2) = -dt * cs;

  g(2, 2) = 1.0;

  g(3, 0) = -b * v * dt * sn / d;
  g(3, 1) = -b * v * dt * cs / (d * d);
  g(3, 2) = b * dt * cs / d;
  g(3, 3) = 1.0 + v * dt * cs / d;
  return g;
}

std::vector<VehicleState> simulate_trajectory(const VehicleState& init, const SlotClock& clock,
                                              const ProcessNoise& noise, int n_slots,
                                              std::uint64_t seed) {
  if (n_slots < 1) throw DomainError("n_slots must be >= 1");
  noise.validate();
  Engine rng = make_stream(seed, 0);
  std::vector<VehicleState> out;
  out.reserve(static_cast<std::size_t>(n_slots));
  VehicleState cur = init;
  SlotClock c = clock;
  for (int t = 1; t <= n_slots; ++t) {
    c.slot_index = t;
    const StateNoise u = draw_state_noise(noise, rng);
    try {
      cur = evolve_state(cur, c, u);
    } catch (const StateError& e) {
      throw TrajectoryError(t, e.what());
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace iscsc
