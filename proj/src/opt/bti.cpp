#include "iscsc/opt/bti.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"

#include <cmath>

namespace iscsc::opt {

namespace {

double trace_weight(double epsilon) { return std::sqrt(2.0 * std::log(1.0 / epsilon)); }

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("outage tolerance must lie in (0, 1)");
}

void check_estimate(const ChannelEstimate& est, Eigen::Index n) {
  if (est.h_bar.size() != n || est.omega.rows() != n || est.omega.cols() != n)
    throw DomainError("channel estimate does not match the beam dimension");
}

BtiBlock from_chi(const CMat& chi, const ChannelEstimate& est, double s_offset, double epsilon) {
  check_epsilon(epsilon);
  const CMat root = linalg::psd_sqrt(est.omega);
  BtiBlock b;
  b.q_mat = linalg::hermitian_part(root * chi * root);
  b.r_vec = root * chi * est.h_bar;
  b.s_scalar = est.h_bar.dot(chi * est.h_bar).real() + s_offset;
  b.epsilon = epsilon;
  b.tighten_slacks();
  return b;
}

BtiExpr expr_from_chi(const conic::HermExpr& chi, const ChannelEstimate& est, double s_offset) {
  const CMat root = linalg::psd_sqrt(est.omega);
  BtiExpr e;
  e.q = chi.congruence(root);
  const conic::CVecExpr xh = chi.times(est.h_bar);
  e.r.constant = root * xh.constant;
  for (const auto& [i, t] : xh.terms) e.r.terms[i] = root * t;
  e.s = chi.quadratic_form(est.h_bar);
  e.s.constant += s_offset;
  return e;
}

CMat sum_of_others(const BeamformerSet& beams, std::size_t k, Eigen::Index n) {
  CMat acc = CMat::Zero(n, n);
  for (std::size_t j = 0; j < beams.w.size(); ++j)
    if (j != k) acc += beams.w[j];
  for (const auto& r : beams.r) acc += r;
  return acc;
}

}  // namespace

void BtiBlock::tighten_slacks() {
  const double q2 = q_mat.squaredNorm();
  slack_a = std::sqrt(q2 + 2.0 * r_vec.squaredNorm());
  slack_b = std::max(0.0, -linalg::min_eigenvalue(q_mat));
}

double BtiBlock::trace_margin() const {
  return q_mat.trace().real() - trace_weight(epsilon) * slack_a + std::log(epsilon) * slack_b +
         s_scalar;
}

double sinr_threshold(double rate, double rho, double iota) {
  const double e = rate * rho / iota;
  if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("rate target must give a positive exponent");
  return std::exp2(e) - 1.0;
}

BtiBlock intended_bti(std::size_t k, const ChannelEstimate& est, const BeamformerSet& beams,
                      double gamma_hat, double sigma_c2, double epsilon) {
  if (k >= beams.w.size()) throw DomainError("intended index out of range");
  if (!(gamma_hat > 0.0)) throw DomainError("SINR threshold must be positive");
  const Eigen::Index n = beams.antennas();
  check_estimate(est, n);
  CMat chi = beams.w[k] / gamma_hat - sum_of_others(beams, k, n);
  return from_chi(chi, est, -sigma_c2, epsilon);
}

BtiBlock eavesdropper_bti(std::size_t k, const ChannelEstimate& est, const BeamformerSet& beams,
                          double big_gamma_hat, double sigma_c2, double epsilon) {
  if (k >= beams.w.size()) throw DomainError("intended index out of range");
  if (!(big_gamma_hat > 0.0)) throw DomainError("SINR cap must be positive");
  const Eigen::Index n = beams.antennas();
  check_estimate(est, n);
  CMat chi = -beams.w[k] / big_gamma_hat;
  for (const auto& r : beams.r) chi += r;
  return from_chi(chi, est, sigma_c2, epsilon);
}

BtiExpr intended_bti_expr(std::size_t k, const ChannelEstimate& est,
                          const std::vector<conic::HermExpr>& w,
                          const std::vector<conic::HermExpr>& r, double gamma_hat,
                          double sigma_c2) {
  if (k >= w.size()) throw DomainError("intended index out of range");
  if (!(gamma_hat > 0.0)) throw DomainError("SINR threshold must be positive");
  check_estimate(est, w[k].size());
  conic::HermExpr chi = (1.0 / gamma_hat) * w[k];
  for (std::size_t j = 0; j < w.size(); ++j)
    if (j != k) chi -= w[j];
  for (const auto& ri : r) chi -= ri;
  return expr_from_chi(chi, est, -sigma_c2);
}

BtiExpr eavesdropper_bti_expr(std::size_t k, const ChannelEstimate& est,
                              const std::vector<conic::HermExpr>& w,
                              const std::vector<conic::HermExpr>& r, double big_gamma_hat,
                              double sigma_c2) {
  if (k >= w.size()) throw DomainError("intended index out of range");
  if (!(big_gamma_hat > 0.0)) throw DomainError("SINR cap must be positive");
  check_estimate(est, w[k].size());
  conic::HermExpr chi = (-1.0 / big_gamma_hat) * w[k];
  for (const auto& ri : r) chi += ri;
  return expr_from_chi(chi, est, sigma_c2);
}

std::pair<conic::ScalarExpr, conic::ScalarExpr> add_bti_constraints(conic::ProblemBuilder& builder,
                                                                    const BtiExpr& block,
                                                                    double epsilon, double scale) {
  check_epsilon(epsilon);
  if (!(scale > 0.0)) throw DomainError("BTI scale must be positive");
  const conic::ScalarExpr a = builder.add_scalar();
  const conic::ScalarExpr b = builder.add_scalar();

  builder.add_nonneg(scale * (block.q.trace() + block.s) - trace_weight(epsilon) * a +
                     std::log(epsilon) * b);
  builder.add_nonneg(b);

  // ||[vec Q; sqrt2 r]|| over real coordinates: diagonal entries once,
  // off-diagonal real/imaginary parts weighted by sqrt2 (they appear twice).
  const Eigen::Index n = block.q.size();
  const double rt2 = std::sqrt(2.0);
  std::vector<conic::ScalarExpr> cone;
  cone.reserve(1 + n * n + 2 * n);
  cone.push_back(a);
  auto entry = [&](Eigen::Index i, Eigen::Index j, bool imag, double weight) {
    conic::ScalarExpr e;
    const cplx c0 = block.q.constant(i, j);
    e.constant = scale * weight * (imag ? c0.imag() : c0.real());
    for (const auto& [v, t] : block.q.terms) {
      const double val = imag ? t(i, j).imag() : t(i, j).real();
      if (val != 0.0) e.terms[v] = scale * weight * val;
    }
    return e;
  };
  for (Eigen::Index i = 0; i < n; ++i) cone.push_back(entry(i, i, false, 1.0));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      cone.push_back(entry(i, j, false, rt2));
      cone.push_back(entry(i, j, true, rt2));
    }
  for (Eigen::Index i = 0; i < n; ++i)
    for (bool imag : {false, true}) {
      conic::ScalarExpr e;
      const cplx c0 = block.r.constant(i);
      e.constant = scale * rt2 * (imag ? c0.imag() : c0.real());
      for (const auto& [v, t] : block.r.terms) {
        const double val = imag ? t(i).imag() : t(i).real();
        if (val != 0.0) e.terms[v] = scale * rt2 * val;
      }
      cone.push_back(e);
    }
  builder.add_soc(cone);

  builder.add_psd(conic::HermExpr::scaled(b, CMat::Identity(n, n)) + scale * block.q);
  return {a, b};
}

}  // namespace iscsc::opt
