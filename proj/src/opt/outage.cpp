#include "iscsc/opt/outage.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace iscsc::opt {

WilsonInterval wilson_interval(std::size_t events, std::size_t trials, double z) {
  if (trials == 0) throw DomainError("Wilson interval needs at least one trial");
  if (events > trials) throw DomainError("more events than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // the bound that touches 0 or 1 is exact there; avoid rounding past p
  const double lower = events == 0 ? 0.0 : std::clamp(centre - half, 0.0, p);
  const double upper = events == trials ? 1.0 : std::clamp(centre + half, p, 1.0);
  return {p, lower, upper, half / z};
}

OutageReport validate_outage_mc(const BeamformerSet& beams, const std::vector<ChannelEstimate>& intended,
                                const std::vector<ChannelEstimate>& eaves, const AoState& targets,
                                double iota, double sigma_c2, std::size_t n_samples,
                                std::uint64_t seed, kernels::Exec exec) {
  if (n_samples < 1000) throw DomainError("Monte-Carlo outage check needs at least 1000 samples");
  if (targets.rho.size() != intended.size()) throw DomainError("one extraction ratio per intended vehicle");
  kernels::OutageProblem p;
  p.beams = beams;
  p.sigma_c2 = sigma_c2;
  for (std::size_t k = 0; k < intended.size(); ++k) {
    p.intended_mean.push_back(intended[k].h_bar);
    p.intended_sqrt.push_back(linalg::psd_sqrt(intended[k].omega));
    p.intended_threshold.push_back(std::exp2(targets.lambda * targets.rho[k] / iota) - 1.0);
    p.eaves_threshold.push_back(std::exp2(targets.varrho * targets.rho[k] / iota) - 1.0);
  }
  for (const auto& e : eaves) {
    p.eaves_mean.push_back(e.h_bar);
    p.eaves_sqrt.push_back(linalg::psd_sqrt(e.omega));
  }
  const kernels::OutageCounts counts = kernels::count_outages(p, n_samples, seed, exec);

  OutageReport out;
  out.samples = n_samples;
  for (std::size_t k = 0; k < intended.size(); ++k) out.intended.push_back(wilson_interval(counts.intended[k], n_samples));
  for (std::size_t l = 0; l < eaves.size(); ++l) {
    out.eaves.emplace_back();
    for (std::size_t k = 0; k < intended.size(); ++k)
      out.eaves.back().push_back(wilson_interval(counts.eaves(l, k), n_samples));
  }
  return out;
}

}  // namespace iscsc::opt
