#pragma once

#include "iscsc/types.hpp"

#include <cstdint>
#include <random>

namespace iscsc {

using Engine = std::mt19937_64;

/// Independent engine for (seed, stream). Streams let parallel loops draw
/// reproducibly regardless of thread count.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Engine(seq);
}

/// Standard circularly-symmetric complex Gaussian CN(0, 1).
inline cplx complex_normal(Engine& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline CVec complex_normal_vector(Engine& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal(rng);
  return v;
}

}  // namespace iscsc
