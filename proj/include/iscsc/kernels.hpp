#pragma once

#include "iscsc/beams.hpp"
#include "iscsc/kinematics.hpp"
#include "iscsc/tracking.hpp"

#include <cstdint>
#include <functional>
#include <vector>

/// Data-parallel inner loops. Every kernel has a serial and an OpenMP path
/// that produce identical results: random draws come from per-chunk streams
/// keyed by (seed, chunk index), never from thread identity.
namespace iscsc::kernels {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kParticleChunk = 256;
inline constexpr std::size_t kSampleChunk = 1024;

/// Pushes each live particle through g1 with fresh process noise. A particle
/// whose distance would become non-positive is left in place with weight 0.
void propagate_particles(std::vector<VehicleState>& states, std::vector<double>& weights,
                         const SlotClock& clock, const ProcessNoise& noise, std::uint64_t seed,
                         Exec exec);

/// Gaussian log-likelihood of z under each particle's (theta, d, v).
void particle_log_likelihood(const std::vector<VehicleState>& states, const Measurement& z,
                             const Mat3& cov, std::vector<double>& out, Exec exec);

/// Monte-Carlo outage inputs. Intended link k is violated when its SINR falls
/// below intended_threshold[k]; eavesdropper l on stream k is violated when its
/// SINR exceeds eaves_threshold[k].
struct OutageProblem {
  BeamformerSet beams;
  std::vector<CVec> intended_mean;
  std::vector<CMat> intended_sqrt;  // Omega^{1/2}
  std::vector<CVec> eaves_mean;
  std::vector<CMat> eaves_sqrt;
  std::vector<double> intended_threshold;
  std::vector<double> eaves_threshold;
  double sigma_c2 = 1e-6;
};

struct OutageCounts {
  std::vector<std::size_t> intended;  // per k
  Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> eaves;  // L x K
  std::size_t samples = 0;
};

OutageCounts count_outages(const OutageProblem& problem, std::size_t n_samples, std::uint64_t seed,
                           Exec exec);

/// out[i] = fn(i) for i < count. fn must be safe to call concurrently.
std::vector<double> map_indices(std::size_t count, const std::function<double(std::size_t)>& fn,
                                Exec exec);

}  // namespace iscsc::kernels
