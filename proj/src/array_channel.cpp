#include "iscsc/array_channel.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"

namespace iscsc {

void ArrayGeometry::validate() const {
  if (num_antennas < 1) throw DomainError("num_antennas must be >= 1");
  if (!(element_spacing > 0.0)) throw DomainError("element_spacing must be > 0");
}

CVec steering_vector(double theta, const ArrayGeometry& geom) {
  const double phase = 2.0 * kPi * geom.element_spacing * std::sin(theta);
  CVec a(geom.num_antennas);
  for (int n = 0; n < geom.num_antennas; ++n) a(n) = std::polar(1.0, phase * n);
  return a;
}

CVec steering_derivative(double theta, const ArrayGeometry& geom) {
  const double k = 2.0 * kPi * geom.element_spacing;
  const double phase = k * std::sin(theta);
  const double slope = k * std::cos(theta);
  CVec da(geom.num_antennas);
  for (int n = 0; n < geom.num_antennas; ++n) {
    da(n) = kJ * (slope * n) * std::polar(1.0, phase * n);
  }
  return da;
}

CMat isotropic_omega(const ArrayGeometry& geom, double scale) {
  return scale * CMat::Identity(geom.num_antennas, geom.num_antennas);
}

ChannelEstimate predicted_channel(const TrackBelief& belief, const ArrayGeometry& geom,
                                  double omega_scale) {
  return {belief.q_pred.beta * steering_vector(belief.q_pred.theta, geom),
          isotropic_omega(geom, omega_scale)};
}

CVec true_channel(const VehicleState& state, const ArrayGeometry& geom) {
  return state.beta * steering_vector(state.theta, geom);
}

CVec sample_csi_error(const CMat& omega_sqrt, Engine& rng) {
  return omega_sqrt * complex_normal_vector(rng, omega_sqrt.cols());
}

CVec sample_csi_error(const ChannelEstimate& est, std::uint64_t seed) {
  const CMat root = linalg::psd_sqrt(est.omega);
  Engine rng = make_stream(seed, 0);
  return sample_csi_error(root, rng);
}

}  // namespace iscsc
