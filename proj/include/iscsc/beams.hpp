#pragma once

#include "iscsc/types.hpp"

#include <optional>
#include <vector>

namespace iscsc {

/// Transmit covariances: W_k per intended vehicle, R_i per tracked vehicle.
/// After rank-one recovery `w_vec` holds the factors with W_k = w w^H.
struct BeamformerSet {
  std::vector<CMat> w;
  std::vector<CMat> r;
  std::optional<std::vector<CVec>> w_vec;

  Eigen::Index antennas() const {
    if (!w.empty()) return w.front().rows();
    if (!r.empty()) return r.front().rows();
    return 0;
  }
};

/// R_x = sum_k W_k + sum_i R_i.
CMat transmit_covariance(const BeamformerSet& beams);

/// Equal split of `total_power` over all W and R matrices, each a scaled identity.
BeamformerSet isotropic_beams(Eigen::Index antennas, std::size_t intended, std::size_t tracked,
                              double total_power);

}  // namespace iscsc
