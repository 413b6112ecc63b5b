#include "iscsc/array_channel.hpp"
#include "iscsc/kernels.hpp"
#include "iscsc/semantic_metrics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace iscsc;
using kernels::Exec;

TEST(Kernels, PropagationSerialEqualsParallel) {
  ProcessNoise q;
  q.variances << 4e-4, 0.04, 0.25, 0.01;
  const std::size_t n = 3 * kernels::kParticleChunk + 17;
  std::vector<VehicleState> a(n, VehicleState{0.1, 30.0, 10.0, {1.0, 0.0}});
  std::vector<double> wa(n, 1.0 / n);
  auto b = a;
  auto wb = wa;
  kernels::propagate_particles(a, wa, {0.02, 4}, q, 99, Exec::Serial);
  kernels::propagate_particles(b, wb, {0.02, 4}, q, 99, Exec::Parallel);
  EXPECT_EQ(a, b);
  EXPECT_EQ(wa, wb);
  EXPECT_NE(a[0], a[1]);
}

TEST(Kernels, DeadParticlesGetZeroWeight) {
  std::vector<VehicleState> s{{0.0, 0.05, 10.0, {1.0, 0.0}}, {0.0, 50.0, 10.0, {1.0, 0.0}}};
  std::vector<double> w{0.5, 0.5};
  const auto before = s[0];
  kernels::propagate_particles(s, w, {0.02, 1}, ProcessNoise{}, 1, Exec::Serial);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(s[0], before);
  EXPECT_EQ(w[1], 0.5);
}

TEST(Kernels, LogLikelihoodMatchesGaussianDensity) {
  Engine rng = make_stream(41, 0);
  const Mat sp = test::random_spd(3, rng, 0.5);
  const Mat3 cov = sp;
  std::vector<VehicleState> s;
  std::normal_distribution<double> nd;
  for (int i = 0; i < 600; ++i) s.push_back({0.1 * nd(rng), 10.0 + nd(rng), 3.0 + nd(rng), {1.0, 0.0}});
  const Measurement z{0.05, 10.5, 2.5, std::nullopt};
  std::vector<double> ser, par;
  kernels::particle_log_likelihood(s, z, cov, ser, Exec::Serial);
  kernels::particle_log_likelihood(s, z, cov, par, Exec::Parallel);
  EXPECT_EQ(ser, par);
  const Mat3 inv = cov.inverse();
  for (std::size_t i = 0; i < s.size(); i += 37) {
    const Vec3 r = z.vector() - observe(s[i]);
    const double expect = -0.5 * r.dot(inv * r) - 0.5 * std::log(cov.determinant()) - 1.5 * std::log(2.0 * kPi);
    EXPECT_NEAR(ser[i], expect, 1e-10);
  }
}

TEST(Kernels, OutageCountsSerialEqualsParallel) {
  const ArrayGeometry g{4, 0.5};
  kernels::OutageProblem p;
  const CVec a = steering_vector(0.3, g);
  const CVec e = steering_vector(0.1, g);
  p.beams.w = {0.1 * a * a.adjoint()};
  p.beams.r = {0.01 * CMat::Identity(4, 4)};
  p.intended_mean = {a};
  p.intended_sqrt = {0.3 * CMat::Identity(4, 4)};
  p.eaves_mean = {0.5 * e};
  p.eaves_sqrt = {0.3 * CMat::Identity(4, 4)};
  p.intended_threshold = {30.0};
  p.eaves_threshold = {1.0};
  p.sigma_c2 = 0.01;
  const auto s = kernels::count_outages(p, 5000, 8, Exec::Serial);
  const auto q = kernels::count_outages(p, 5000, 8, Exec::Parallel);
  EXPECT_EQ(s.intended, q.intended);
  EXPECT_EQ(s.eaves, q.eaves);
  EXPECT_EQ(s.samples, 5000u);
  EXPECT_GT(s.intended[0], 0u);
  EXPECT_LT(s.intended[0], 5000u);
}

TEST(Kernels, OutageCountsDeterministicChannel) {
  kernels::OutageProblem p;
  CVec h = CVec::Ones(2);
  p.beams.w = {CMat::Identity(2, 2)};
  p.intended_mean = {h};
  p.intended_sqrt = {CMat::Zero(2, 2)};
  p.eaves_threshold = {1.0};
  p.sigma_c2 = 1.0;
  // SINR = h^H W h / sigma = 2
  p.intended_threshold = {1.5};
  EXPECT_EQ(kernels::count_outages(p, 1000, 1, Exec::Parallel).intended[0], 0u);
  p.intended_threshold = {2.5};
  EXPECT_EQ(kernels::count_outages(p, 1000, 1, Exec::Parallel).intended[0], 1000u);
}

TEST(Kernels, MapIndicesSerialEqualsParallel) {
  auto f = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 3.0; };
  const auto a = kernels::map_indices(1000, f, Exec::Serial);
  const auto b = kernels::map_indices(1000, f, Exec::Parallel);
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a[7], f(7));
}
