#include "iscsc/array_channel.hpp"
#include "iscsc/errors.hpp"
#include "iscsc/sensing_metrics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace iscsc;

namespace {

// B, Bdot assembled entry by entry from the closed-form steering phases.
struct BruteForce {
  CMat b, bdot;
};

BruteForce brute(double th, int n, double spacing) {
  BruteForce out{CMat(n, n), CMat(n, n)};
  const double k = 2.0 * kPi * spacing;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double phase = k * (p - q) * std::sin(th);
      out.b(p, q) = std::exp(kJ * phase);
      out.bdot(p, q) = kJ * (k * (p - q) * std::cos(th)) * std::exp(kJ * phase);
    }
  return out;
}

double brute_trace(const CMat& x, const CMat& r, const CMat& y) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index l = 0; l < r.cols(); ++l) acc += x(i, j) * r(j, l) * std::conj(y(i, l));
  return acc.real();
}

}  // namespace

TEST(FimObservation, SingleAntennaHasNoAngleInformation) {
  const FisherBlocks f = fim_observation({0.5, 10.0, 1.0, {1.0, 0.0}}, CMat::Constant(1, 1, 0.3), {1, 0.5}, {8, 1.0});
  EXPECT_DOUBLE_EQ(f.j_tt, 0.0);
  EXPECT_DOUBLE_EQ(f.j_tb.norm(), 0.0);
  EXPECT_NEAR(f.j_bb(0, 0), 2.0 * 8 * 0.3 / 1.0, 1e-14);
  EXPECT_NEAR(f.j_bb(1, 1), 2.0 * 8 * 0.3 / 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(f.j_bb(0, 1), 0.0);
}

TEST(FimObservation, ElementwiseTraceOracle) {
  const int n = 4;
  const ArrayGeometry g{n, 0.5};
  const FisherBlocks f = fim_observation({0.3, 10.0, 0.0, {1.0, 0.0}}, CMat::Identity(n, n), g, {8, 1.0});
  const BruteForce bf = brute(0.3, n, 0.5);
  const double expect = 2.0 * 8 * brute_trace(bf.bdot, CMat::Identity(n, n), bf.bdot);
  EXPECT_LT(test::rel_err(f.j_tt, expect), 1e-9);
}

TEST(FimObservation, ElementwiseOracleRandomCovariance) {
  Engine rng = make_stream(21, 0);
  const int n = 6;
  const ArrayGeometry g{n, 0.5};
  const cplx beta{0.7, -0.4};
  const double th = -0.35, t = 64, s2 = 1e-3;
  const CMat rx = test::random_psd(n, rng);
  const FisherBlocks f = fim_observation({th, 10.0, 0.0, beta}, rx, g, {64, s2});
  const BruteForce bf = brute(th, n, 0.5);
  EXPECT_LT(test::rel_err(f.j_tt, 2 * t * std::norm(beta) / s2 * brute_trace(bf.bdot, rx, bf.bdot)), 1e-9);
  cplx cross{0.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) cross += bf.b(i, j) * rx(j, l) * std::conj(bf.bdot(i, l));
  const cplx scaled = std::conj(beta) * cross * (2 * t / s2);
  EXPECT_LT(test::rel_err(f.j_tb(0), scaled.real()), 1e-9);
  EXPECT_LT(test::rel_err(f.j_tb(1), (scaled * kJ).real()), 1e-9);
  EXPECT_LT(test::rel_err(f.j_bb(0, 0), 2 * t / s2 * brute_trace(bf.b, rx, bf.b)), 1e-9);
}

TEST(FimObservation, LinearInCovariance) {
  Engine rng = make_stream(22, 0);
  const ArrayGeometry g{5, 0.5};
  const VehicleState s{0.2, 10.0, 0.0, {0.3, 0.9}};
  const CMat rx = test::random_psd(5, rng);
  const FisherBlocks a = fim_observation(s, rx, g, {16, 0.1});
  const FisherBlocks b = fim_observation(s, 3.0 * rx, g, {16, 0.1});
  EXPECT_NEAR(b.j_tt, 3.0 * a.j_tt, 1e-12 * b.j_tt);
  EXPECT_LT((b.j_tb - 3.0 * a.j_tb).norm(), 1e-12 * b.j_tb.norm() + 1e-14);
  EXPECT_LT((b.j_bb - 3.0 * a.j_bb).norm(), 1e-12 * b.j_bb.norm());
}

TEST(FimObservation, CoefficientsReproduceBlocks) {
  Engine rng = make_stream(23, 0);
  const ArrayGeometry g{6, 0.5};
  const VehicleState s{0.9, 10.0, 0.0, {0.3, 0.9}};
  const CMat rx = test::random_psd(6, rng);
  const FisherBlocks a = fim_observation(s, rx, g, {32, 0.01});
  const FisherBlocks b = evaluate(fisher_coefficients(s, g, {32, 0.01}), rx);
  EXPECT_LT(test::rel_err(b.j_tt, a.j_tt), 1e-12);
  EXPECT_LT((b.j_tb - a.j_tb).norm(), 1e-10 * a.j_tb.norm());
  EXPECT_LT((b.j_bb - a.j_bb).norm(), 1e-12 * a.j_bb.norm());
}

TEST(FimObservation, RejectsIndefiniteCovariance) {
  CMat rx = CMat::Identity(3, 3);
  rx(2, 2) = -1e-3;
  EXPECT_THROW(fim_observation({0.1, 1.0, 0.0, {1.0, 0.0}}, rx, {3, 0.5}, {8, 1.0}), DomainError);
}

TEST(FimPosterior, PriorOnlyAndIdentityPrior) {
  const FisherBlocks zero;
  Mat4 m = Mat4::Identity() * 0.25;
  EXPECT_DOUBLE_EQ(fim_posterior(zero, m)(0, 0), 4.0);
  FisherBlocks f;
  f.j_tt = 2.5;
  f.j_bb = Mat2::Identity();
  EXPECT_DOUBLE_EQ(fim_posterior(f, Mat4::Identity())(0, 0), 3.5);
}

TEST(FimPosterior, MatchesDirectAssembly) {
  Engine rng = make_stream(24, 0);
  const Mat4 m = test::random_spd(4, rng);
  FisherBlocks f;
  f.j_tt = 1.7;
  f.j_tb << 0.2, -0.3;
  f.j_bb << 2.0, 0.1, 0.1, 1.5;
  const Mat3 j = fim_posterior(f, m);
  Mat3 expect;
  expect << 1.7 + m.inverse()(0, 0), 0.2, -0.3, 0.2, 2.0, 0.1, -0.3, 0.1, 1.5;
  EXPECT_LT((j - expect).norm(), 1e-12);
}

TEST(FimPosterior, IllConditionedPriorThrows) {
  Mat4 m = Mat4::Identity();
  m(3, 3) = 1e-14;
  EXPECT_THROW(prior_information(m), NumericalError);
}

TEST(Pcrb, BlockDiagonal) {
  Mat3 j = Mat3::Identity();
  j(0, 0) = 4.0;
  EXPECT_DOUBLE_EQ(pcrb_theta(j), 0.25);
}

TEST(Pcrb, ClosedFormEqualsNumericInverse) {
  Engine rng = make_stream(25, 0);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 j = test::random_spd(3, rng, 0.3);
    EXPECT_LT(test::rel_err(pcrb_theta(j), j.inverse()(0, 0)), 1e-10);
  }
}

TEST(Pcrb, NonIdentifiableThrows) {
  Mat3 j;
  j << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0;
  EXPECT_THROW(pcrb_theta(j), NumericalError);
}

TEST(Pcrb, MonotoneInPowerAndBelowPrior) {
  Engine rng = make_stream(26, 0);
  const ArrayGeometry g{8, 0.5};
  std::uniform_real_distribution<double> th(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const VehicleState s{th(rng), 10.0, 0.0, complex_normal(rng)};
    const CMat rx = test::random_psd(8, rng, 2) * 1e-2;
    const Mat4 m = test::random_spd(4, rng, 0.1) * 1e-2;
    const FisherSettings fs{64, 1e-2};
    const double p1 = pcrb_report(fim_observation(s, rx, g, fs), m).pcrb_theta;
    const double p2 = pcrb_report(fim_observation(s, 2.0 * rx, g, fs), m).pcrb_theta;
    EXPECT_LE(p2, p1 * (1.0 + 1e-12));
    const PcrbReport r = pcrb_report(fim_observation(s, rx, g, fs), m);
    EXPECT_GT(r.pcrb_theta, 0.0);
    EXPECT_LE(r.pcrb_theta, 1.0 / r.prior_info + 1e-12);
  }
}
