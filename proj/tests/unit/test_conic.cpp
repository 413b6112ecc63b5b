#include "iscsc/conic/cones.hpp"
#include "iscsc/conic/interior_point.hpp"
#include "iscsc/conic/model.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace iscsc;
using namespace iscsc::conic;

TEST(Svec, RoundTripAndInnerProduct) {
  Engine rng = make_stream(51, 0);
  const Mat a = test::random_spd(4, rng), b = test::random_spd(4, rng);
  EXPECT_LT((smat(svec(a), 4) - a).norm(), 1e-14);
  EXPECT_NEAR(svec(a).dot(svec(b)), (a * b).trace(), 1e-10);
  EXPECT_EQ(svec(a).size(), svec_size(4));
}

TEST(Cones, StepToBoundary) {
  ConeDims d;
  d.nonneg = 2;
  d.soc = {3};
  d.psd = {2};
  const ConeLayout l(d);
  const Vec e = cone_identity(l);
  EXPECT_NEAR(min_cone_eigenvalue(l, e), 1.0, 1e-14);
  Vec dx = Vec::Zero(l.rows);
  dx(0) = -0.5;
  EXPECT_NEAR(max_step(l, e, dx), 2.0, 1e-12);
  dx.setZero();
  dx(3) = 1.0;  // SOC tail entry: t = 1 >= ||(alpha, 0)|| until alpha = 1
  EXPECT_NEAR(max_step(l, e, dx), 1.0, 1e-12);
  dx.setZero();
  dx.tail(3) = svec(Mat(Eigen::Vector2d(-0.25, 0.0).asDiagonal()));
  EXPECT_NEAR(max_step(l, e, dx), 4.0, 1e-10);
}

TEST(Cones, NtScalingMapsBothToLambda) {
  Engine rng = make_stream(52, 0);
  ConeDims d;
  d.nonneg = 3;
  d.soc = {4, 3};
  d.psd = {3};
  const ConeLayout l(d);
  auto interior = [&](int seed) {
    Engine r = make_stream(52, seed);
    std::uniform_real_distribution<double> u(0.1, 1.0), v(-0.3, 0.3);
    Vec x(l.rows);
    for (int i = 0; i < 3; ++i) x(i) = u(r);
    int o = 3;
    for (int n : d.soc) {
      x(o) = 2.0;
      for (int i = 1; i < n; ++i) x(o + i) = v(r);
      o += n;
    }
    x.tail(6) = svec(test::random_spd(3, r, 0.5));
    return x;
  };
  const Vec s = interior(1), z = interior(2);
  const NtScaling w(l, s, z);
  EXPECT_LT((w.apply(z) - w.lambda()).norm(), 1e-10);
  EXPECT_LT((w.apply_inverse_transpose(s) - w.lambda()).norm(), 1e-10);
  const Vec u = interior(3);
  EXPECT_LT((w.apply_inverse(w.apply(u)) - u).norm(), 1e-10);
  EXPECT_LT((w.apply_transpose(w.apply_inverse_transpose(u)) - u).norm(), 1e-10);
  Mat block = Mat::Identity(l.rows, 2);
  block.col(1) = u;
  for (int b = 0; b < w.block_count(); ++b)
    w.inverse_transpose_block(b, block.middleRows(w.block_offset(b), w.block_size(b)));
  EXPECT_LT((block.col(1) - w.apply_inverse_transpose(u)).norm(), 1e-10);
  (void)rng;
}

TEST(InteriorPoint, LinearProgram) {
  // min -x1 - x2  s.t. x1 + 2 x2 <= 3, 2 x1 + x2 <= 3, x >= 0  ->  x = (1, 1)
  ProblemBuilder pb;
  const ScalarExpr x1 = pb.add_scalar(), x2 = pb.add_scalar();
  pb.add_nonneg(3.0 - x1 - 2.0 * x2);
  pb.add_nonneg(3.0 - 2.0 * x1 - x2);
  pb.add_nonneg(x1);
  pb.add_nonneg(x2);
  pb.minimize(-x1 - x2);
  const ConicSolution s = InteriorPointSolver().solve(pb.build());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.x(0), 1.0, 1e-6);
  EXPECT_NEAR(s.x(1), 1.0, 1e-6);
  EXPECT_NEAR(s.primal_objective, -2.0, 1e-6);
}

TEST(InteriorPoint, EqualityConstrainedLp) {
  ProblemBuilder pb;
  const ScalarExpr x = pb.add_scalar(), y = pb.add_scalar();
  pb.add_equality(x + y - 1.0);
  pb.add_nonneg(x);
  pb.add_nonneg(y);
  pb.minimize(2.0 * x + y);
  const ConicSolution s = InteriorPointSolver().solve(pb.build());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.x(0), 0.0, 1e-6);
  EXPECT_NEAR(s.x(1), 1.0, 1e-6);
}

TEST(InteriorPoint, SecondOrderCone) {
  // min x + y  s.t. ||(x, y)|| <= 1  ->  -sqrt(2)
  ProblemBuilder pb;
  const ScalarExpr x = pb.add_scalar(), y = pb.add_scalar();
  pb.add_soc({1.0, x, y});
  pb.minimize(x + y);
  const ConicSolution s = InteriorPointSolver().solve(pb.build());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, -std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(s.x(0), -1.0 / std::sqrt(2.0), 1e-6);
}

TEST(InteriorPoint, SdpMinimumEigenvalue) {
  // max t s.t. A - t I >= 0  ->  lambda_min(A)
  Mat a(3, 3);
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  ProblemBuilder pb;
  const ScalarExpr t = pb.add_scalar();
  SymExpr e(3);
  e.constant = a;
  e.terms[t.terms.begin()->first] = -Mat::Identity(3, 3);
  pb.add_psd(e);
  pb.minimize(-t);
  const ConicSolution s = InteriorPointSolver().solve(pb.build());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.x(0), 2.0 - std::sqrt(2.0), 1e-6);
}

TEST(InteriorPoint, ComplexHermitianSdp) {
  // min Re Tr(C X) s.t. Tr X = 1, X >= 0  ->  lambda_min(C)
  Engine rng = make_stream(53, 0);
  const CMat c = test::random_psd(3, rng) - 0.5 * CMat::Identity(3, 3);
  ProblemBuilder pb;
  const HermExpr x = pb.add_hermitian(3);
  pb.add_psd(x);
  pb.add_equality(x.trace() - 1.0);
  pb.minimize(x.trace_with(c));
  const ConicSolution s = InteriorPointSolver().solve(pb.build());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  Eigen::SelfAdjointEigenSolver<CMat> es(c);
  EXPECT_NEAR(s.primal_objective, es.eigenvalues()(0), 1e-6);
  const CMat xv = x.value(s.x);
  EXPECT_NEAR(xv.trace().real(), 1.0, 1e-6);
}

TEST(InteriorPoint, DetectsInfeasibility) {
  ProblemBuilder pb;
  const ScalarExpr x = pb.add_scalar();
  pb.add_nonneg(x - 2.0);
  pb.add_nonneg(1.0 - x);
  pb.minimize(x);
  EXPECT_EQ(InteriorPointSolver().solve(pb.build()).status, SolveStatus::Infeasible);
}

TEST(InteriorPoint, DetectsUnboundedness) {
  ProblemBuilder pb;
  const ScalarExpr x = pb.add_scalar();
  pb.add_nonneg(x);
  pb.minimize(-x);
  EXPECT_EQ(InteriorPointSolver().solve(pb.build()).status, SolveStatus::Unbounded);
}

TEST(InteriorPoint, StrongDualityOnRandomLp) {
  Engine rng = make_stream(54, 0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    ProblemBuilder pb;
    std::vector<ScalarExpr> x;
    for (int i = 0; i < 5; ++i) x.push_back(pb.add_scalar());
    ScalarExpr obj;
    for (int j = 0; j < 4; ++j) {
      ScalarExpr row = 1.0;
      for (int i = 0; i < 5; ++i) row -= u(rng) * x[i];
      pb.add_nonneg(row);
    }
    for (int i = 0; i < 5; ++i) {
      pb.add_nonneg(x[i]);
      obj -= u(rng) * x[i];
    }
    pb.minimize(obj);
    const ConicSolution s = InteriorPointSolver().solve(pb.build());
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.primal_objective, s.dual_objective, 1e-6);
  }
}

TEST(ProblemBuilder, RowOrderAndCounts) {
  ProblemBuilder pb;
  const ScalarExpr a = pb.add_scalar(), b = pb.add_scalar();
  pb.add_psd(SymExpr::from_entries({{a, 0.0}, {1.0, b}}));
  pb.add_soc({a, b});
  pb.add_nonneg(a);
  pb.add_equality(a - b);
  const ConstraintCounts c = pb.counts();
  EXPECT_EQ(c.nonneg, 1);
  EXPECT_EQ(c.soc, 1);
  EXPECT_EQ(c.psd, 1);
  EXPECT_EQ(c.equality, 1);
  const ConicProgram p = pb.build();
  EXPECT_EQ(p.dims.nonneg, 1);
  EXPECT_EQ(p.dims.soc, std::vector<int>{2});
  EXPECT_EQ(p.dims.psd, std::vector<int>{2});
  EXPECT_EQ(p.G.rows(), 1 + 2 + 3);
  EXPECT_EQ(p.A.rows(), 1);
  // nonneg row: s = h - G x = a
  EXPECT_DOUBLE_EQ(-p.G(0, 0), 1.0);
}

TEST(HermExpr, AffineOperationsMatchNumeric) {
  Engine rng = make_stream(55, 0);
  ProblemBuilder pb;
  const HermExpr x = pb.add_hermitian(3);
  Vec vals(pb.num_variables());
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = nd(rng);
  const CMat xv = x.value(vals);
  EXPECT_LT((xv - xv.adjoint()).norm(), 1e-14);
  const CMat m = test::random_psd(3, rng, 2);
  const CVec v = complex_normal_vector(rng, 3);
  EXPECT_LT((x.congruence(m).value(vals) - m * xv * m.adjoint()).norm(), 1e-12);
  EXPECT_NEAR(x.trace_with(m).value(vals), (m * xv).trace().real(), 1e-12);
  EXPECT_NEAR(x.quadratic_form(v).value(vals), (v.adjoint() * xv * v)(0, 0).real(), 1e-12);
  EXPECT_LT((x.times(v).value(vals) - xv * v).norm(), 1e-12);
  const Mat emb = SymExpr::real_embedding(x).value(vals);
  EXPECT_LT((emb.topLeftCorner(3, 3) - xv.real()).norm(), 1e-14);
  EXPECT_LT((emb.bottomLeftCorner(3, 3) - xv.imag()).norm(), 1e-14);
}
