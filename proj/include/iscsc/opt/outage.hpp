#pragma once

#include "iscsc/kernels.hpp"
#include "iscsc/opt/settings.hpp"

#include <cstdint>
#include <vector>

namespace iscsc::opt {

/// Wilson score interval for a binomial proportion. `standard_error` is the
/// half-width divided by z.
struct WilsonInterval {
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double standard_error = 0.0;
};

WilsonInterval wilson_interval(std::size_t events, std::size_t trials, double z = 1.96);

struct OutageReport {
  std::vector<WilsonInterval> intended;           // Pr(S_k < lambda), per k
  std::vector<std::vector<WilsonInterval>> eaves; // Pr(S_{l|k} > varrho), [l][k]
  std::size_t samples = 0;
};

/// Draws h = h_bar + Omega^{1/2} e per vehicle and counts rate-target
/// violations of the given beams. Requires n_samples >= 1000.
OutageReport validate_outage_mc(const BeamformerSet& beams, const std::vector<ChannelEstimate>& intended,
                                const std::vector<ChannelEstimate>& eaves, const AoState& targets,
                                double iota, double sigma_c2, std::size_t n_samples,
                                std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace iscsc::opt
