#pragma once

#include "iscsc/rng.hpp"
#include "iscsc/state.hpp"
#include "iscsc/types.hpp"

#include <cstdint>

namespace iscsc {

/// Uniform linear array. Spacing is in wavelengths.
struct ArrayGeometry {
  int num_antennas = 8;
  double element_spacing = 0.5;

  void validate() const;
  bool operator==(const ArrayGeometry&) const = default;
};

/// Predicted channel h_bar and CSI-error covariance Omega (h = h_bar + Omega^{1/2} e).
struct ChannelEstimate {
  CVec h_bar;
  CMat omega;
};

/// a(theta)_n = exp(j 2 pi spacing n sin(theta)), phase reference at element 0,
/// theta = 0 broadside.
CVec steering_vector(double theta, const ArrayGeometry& geom);

/// d a / d theta.
CVec steering_derivative(double theta, const ArrayGeometry& geom);

/// Isotropic CSI error covariance scale * I.
CMat isotropic_omega(const ArrayGeometry& geom, double scale);

/// h_bar = beta_hat a(theta_hat) from the belief's prediction, omega = omega_scale * I.
ChannelEstimate predicted_channel(const TrackBelief& belief, const ArrayGeometry& geom,
                                  double omega_scale = 0.01);

/// h = beta a(theta) for a ground-truth state.
CVec true_channel(const VehicleState& state, const ArrayGeometry& geom);

/// Delta h = Omega^{1/2} e with e ~ CN(0, I). Throws DomainError if Omega has
/// an eigenvalue below -1e-8.
CVec sample_csi_error(const ChannelEstimate& est, std::uint64_t seed);
CVec sample_csi_error(const CMat& omega_sqrt, Engine& rng);

}  // namespace iscsc
