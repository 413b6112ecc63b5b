#include "iscsc/array_channel.hpp"
#include "iscsc/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

using iscsc::kernels::Exec;

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_PropagateParticles(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  iscsc::ProcessNoise noise;
  noise.variances << 0.02 * 0.02, 0.1 * 0.1, 0.1 * 0.1, 0.1 * 0.1;
  iscsc::VehicleState s0;
  s0.theta = 0.26;
  s0.distance = 8.0;
  s0.velocity = 5.0;
  s0.beta = {1.0, 0.0};
  std::uint64_t seed = 1;
  for (auto _ : st) {
    std::vector<iscsc::VehicleState> states(n, s0);
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    iscsc::kernels::propagate_particles(states, weights, {0.02, 1}, noise, seed++, exec_of(st));
    benchmark::DoNotOptimize(states.data());
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations()) * st.range(0));
}
BENCHMARK(BM_PropagateParticles)->ArgsProduct({{1000, 100000}, {0, 1}});

void BM_CountOutages(benchmark::State& st) {
  const iscsc::ArrayGeometry geom{8, 0.5};
  iscsc::kernels::OutageProblem p;
  const iscsc::CVec a = iscsc::steering_vector(0.26, geom);
  const iscsc::CVec e = iscsc::steering_vector(0.09, geom);
  p.beams.w = {0.05 * a * a.adjoint()};
  p.beams.r = {0.01 * iscsc::CMat::Identity(8, 8), 0.01 * e * e.adjoint()};
  const iscsc::CMat root = 0.1 * iscsc::CMat::Identity(8, 8);
  p.intended_mean = {a};
  p.intended_sqrt = {root};
  p.eaves_mean = {0.3 * e};
  p.eaves_sqrt = {root};
  p.intended_threshold = {1.0};
  p.eaves_threshold = {1.0};
  std::uint64_t seed = 1;
  for (auto _ : st) {
    auto c = iscsc::kernels::count_outages(p, static_cast<std::size_t>(st.range(0)), seed++, exec_of(st));
    benchmark::DoNotOptimize(c.intended.data());
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations()) * st.range(0));
}
BENCHMARK(BM_CountOutages)->ArgsProduct({{10000}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
