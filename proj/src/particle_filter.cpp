#include "iscsc/particle_filter.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/kernels.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iscsc {

namespace {

constexpr double kDegenerateWeight = 1e-300;

}  // namespace

VehicleState ParticleCloud::mean() const {
  Vec4 acc = Vec4::Zero();
  cplx beta{0.0, 0.0};
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double w = weights[i];
    acc(0) += w * states[i].theta;
    acc(1) += w * states[i].distance;
    acc(2) += w * states[i].velocity;
    beta += w * states[i].beta;
    total += w;
  }
  if (!(total > 0.0)) throw NumericalError("particle cloud has no weight");
  return {acc(0) / total, acc(1) / total, acc(2) / total, beta / total};
}

Mat4 ParticleCloud::covariance() const {
  const Vec4 mu = mean().coords();
  Mat4 cov = Mat4::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Vec4 d = states[i].coords() - mu;
    cov += weights[i] * d * d.transpose();
    total += weights[i];
  }
  return cov / total;
}

ParticleCloud pf_init(const TrackPrior& prior, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw DomainError("particle count must be >= 1");
  Mat4 root = Mat4::Zero();
  {
    Eigen::SelfAdjointEigenSolver<Mat4> es(prior.m0);
    root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  ParticleCloud cloud;
  cloud.states.resize(count);
  cloud.weights.assign(count, 1.0 / static_cast<double>(count));
  Engine rng = make_stream(seed, 0);
  std::normal_distribution<double> n01(0.0, 1.0);
  const Vec4 mu = prior.initial.coords();
  for (std::size_t i = 0; i < count; ++i) {
    Vec4 g;
    for (int k = 0; k < 4; ++k) g(k) = n01(rng);
    Vec4 q = mu + root * g;
    q(1) = std::max(q(1), 1e-6);
    cloud.states[i] = VehicleState::from_coords(q, prior.initial.beta);
  }
  return cloud;
}

void pf_predict(ParticleCloud& cloud, const SlotClock& clock, const ProcessNoise& noise,
                std::uint64_t seed) {
  kernels::propagate_particles(cloud.states, cloud.weights, clock, noise, seed,
                               kernels::Exec::Parallel);
}

std::vector<std::size_t> systematic_resample(const std::vector<double>& weights, double u) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> idx(n);
  double cumulative = weights.empty() ? 0.0 : weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = (static_cast<double>(i) + u) / static_cast<double>(n);
    while (target > cumulative && j + 1 < n) {
      ++j;
      cumulative += weights[j];
    }
    idx[i] = j;
  }
  return idx;
}

PfReport pf_update(ParticleCloud& cloud, const Measurement& z, const MeasurementModel& model,
                   std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (n == 0) throw DomainError("empty particle cloud");
  const Mat3 cov = model.covariance(z.echo_snr);
  std::vector<double> loglik(n);
  kernels::particle_log_likelihood(cloud.states, z, cov, loglik, kernels::Exec::Parallel);

  PfReport report;
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.weights[i] > 0.0) {
      loglik[i] += std::log(cloud.weights[i]);
      max_log = std::max(max_log, loglik[i]);
    } else {
      loglik[i] = -std::numeric_limits<double>::infinity();
    }
  }

  if (!(max_log > std::log(kDegenerateWeight))) {
    report.degenerate = true;
    std::fill(cloud.weights.begin(), cloud.weights.end(), 1.0 / static_cast<double>(n));
  } else {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cloud.weights[i] = std::exp(loglik[i] - max_log);
      total += cloud.weights[i];
    }
    for (auto& w : cloud.weights) w /= total;
  }

  double sum_sq = 0.0;
  for (double w : cloud.weights) sum_sq += w * w;
  report.effective_sample_size = 1.0 / sum_sq;
  report.estimate = cloud.mean();

  Engine rng = make_stream(seed, 0x5e5a);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto idx = systematic_resample(cloud.weights, unif(rng));
  std::vector<VehicleState> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = cloud.states[idx[i]];
  cloud.states = std::move(next);
  std::fill(cloud.weights.begin(), cloud.weights.end(), 1.0 / static_cast<double>(n));
  return report;
}

PfReport pf_step(ParticleCloud& cloud, const Measurement& z, const SlotClock& clock,
                 const ProcessNoise& noise, const MeasurementModel& model, std::uint64_t seed) {
  pf_predict(cloud, clock, noise, seed);
  return pf_update(cloud, z, model, seed);
}

}  // namespace iscsc
