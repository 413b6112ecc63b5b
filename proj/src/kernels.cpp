#include "iscsc/kernels.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/rng.hpp"
#include "iscsc/semantic_metrics.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace iscsc::kernels {

namespace {

std::size_t chunk_count(std::size_t n, std::size_t chunk) { return (n + chunk - 1) / chunk; }

// Runs body(chunk) for every chunk, in parallel when requested.
template <typename Body>
void for_chunks(std::size_t chunks, Exec exec, Body&& body) {
  const auto n = static_cast<std::ptrdiff_t>(chunks);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) body(static_cast<std::size_t>(c));
  } else {
    for (std::ptrdiff_t c = 0; c < n; ++c) body(static_cast<std::size_t>(c));
  }
}

}  // namespace

void propagate_particles(std::vector<VehicleState>& states, std::vector<double>& weights,
                         const SlotClock& clock, const ProcessNoise& noise, std::uint64_t seed,
                         Exec exec) {
  if (states.size() != weights.size()) throw DomainError("particle/weight size mismatch");
  const std::size_t n = states.size();
  for_chunks(chunk_count(n, kParticleChunk), exec, [&](std::size_t c) {
    Engine rng = make_stream(seed, 0x9a000000ULL + c);
    const std::size_t end = std::min(n, (c + 1) * kParticleChunk);
    for (std::size_t i = c * kParticleChunk; i < end; ++i) {
      const StateNoise u = draw_state_noise(noise, rng);
      if (!(weights[i] > 0.0)) continue;
      try {
        states[i] = evolve_state(states[i], clock, u);
      } catch (const StateError&) {
        weights[i] = 0.0;
      }
    }
  });
}

void particle_log_likelihood(const std::vector<VehicleState>& states, const Measurement& z,
                             const Mat3& cov, std::vector<double>& out, Exec exec) {
  Eigen::LLT<Mat3> llt(cov);
  if (llt.info() != Eigen::Success) throw DomainError("measurement covariance is not positive definite");
  const Mat3 l = llt.matrixL();
  const double log_norm = -l.diagonal().array().log().sum() - 1.5 * std::log(2.0 * kPi);
  const Vec3 zv = z.vector();
  out.resize(states.size());
  const std::size_t n = states.size();
  for_chunks(chunk_count(n, kParticleChunk), exec, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kParticleChunk);
    for (std::size_t i = c * kParticleChunk; i < end; ++i) {
      const Vec3 r = zv - observe(states[i]);
      const Vec3 w = l.triangularView<Eigen::Lower>().solve(r);
      out[i] = log_norm - 0.5 * w.squaredNorm();
    }
  });
}

OutageCounts count_outages(const OutageProblem& p, std::size_t n_samples, std::uint64_t seed,
                           Exec exec) {
  const std::size_t k_count = p.intended_mean.size();
  const std::size_t l_count = p.eaves_mean.size();
  if (p.intended_sqrt.size() != k_count || p.intended_threshold.size() != k_count ||
      p.eaves_sqrt.size() != l_count || p.eaves_threshold.size() != k_count ||
      p.beams.w.size() != k_count)
    throw DomainError("outage problem: inconsistent vehicle counts");

  const std::size_t chunks = chunk_count(n_samples, kSampleChunk);
  std::vector<std::vector<std::size_t>> per_chunk(chunks, std::vector<std::size_t>(k_count + l_count * k_count, 0));
  for_chunks(chunks, exec, [&](std::size_t c) {
    Engine rng = make_stream(seed, 0x0a000000ULL + c);
    auto& tally = per_chunk[c];
    const std::size_t end = std::min(n_samples, (c + 1) * kSampleChunk);
    for (std::size_t s = c * kSampleChunk; s < end; ++s) {
      for (std::size_t k = 0; k < k_count; ++k) {
        const CVec h = p.intended_mean[k] +
                       p.intended_sqrt[k] * complex_normal_vector(rng, p.intended_mean[k].size());
        if (sinr_intended(k, h, p.beams, p.sigma_c2) < p.intended_threshold[k]) ++tally[k];
      }
      for (std::size_t l = 0; l < l_count; ++l) {
        const CVec g = p.eaves_mean[l] + p.eaves_sqrt[l] * complex_normal_vector(rng, p.eaves_mean[l].size());
        for (std::size_t k = 0; k < k_count; ++k)
          if (sinr_eavesdropper(k, g, p.beams, p.sigma_c2) > p.eaves_threshold[k])
            ++tally[k_count + l * k_count + k];
      }
    }
  });

  OutageCounts out;
  out.samples = n_samples;
  out.intended.assign(k_count, 0);
  out.eaves.setZero(l_count, k_count);
  for (const auto& tally : per_chunk) {
    for (std::size_t k = 0; k < k_count; ++k) out.intended[k] += tally[k];
    for (std::size_t l = 0; l < l_count; ++l)
      for (std::size_t k = 0; k < k_count; ++k) out.eaves(l, k) += tally[k_count + l * k_count + k];
  }
  return out;
}

std::vector<double> map_indices(std::size_t count, const std::function<double(std::size_t)>& fn,
                                Exec exec) {
  std::vector<double> out(count);
  for_chunks(count, exec, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace iscsc::kernels
