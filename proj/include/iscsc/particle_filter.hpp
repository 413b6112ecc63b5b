#pragma once

#include "iscsc/kinematics.hpp"
#include "iscsc/tracking.hpp"

#include <cstdint>
#include <vector>

namespace iscsc {

/// Weighted particle set over VehicleState. Dead particles (propagation past
/// the RSU projection point) carry zero weight.
struct ParticleCloud {
  std::vector<VehicleState> states;
  std::vector<double> weights;

  std::size_t size() const { return states.size(); }
  VehicleState mean() const;
  Mat4 covariance() const;
};

struct PfReport {
  bool degenerate = false;         // all likelihood-weights fell below 1e-300
  double effective_sample_size = 0.0;
  VehicleState estimate;           // weighted posterior mean before resampling
};

/// Draws `count` particles from N(prior.initial, M0) over (theta, d, v, |beta|).
ParticleCloud pf_init(const TrackPrior& prior, std::size_t count, std::uint64_t seed);

/// Propagates every particle through g1 with process noise.
void pf_predict(ParticleCloud& cloud, const SlotClock& clock, const ProcessNoise& noise,
                std::uint64_t seed);

/// Reweights by the Gaussian measurement likelihood and resamples (systematic).
PfReport pf_update(ParticleCloud& cloud, const Measurement& z, const MeasurementModel& model,
                   std::uint64_t seed);

/// pf_predict followed by pf_update.
PfReport pf_step(ParticleCloud& cloud, const Measurement& z, const SlotClock& clock,
                 const ProcessNoise& noise, const MeasurementModel& model, std::uint64_t seed);

/// Systematic resampling indices for normalized weights and offset u in [0, 1).
std::vector<std::size_t> systematic_resample(const std::vector<double>& weights, double u);

}  // namespace iscsc
