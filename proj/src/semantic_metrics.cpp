#include "iscsc/semantic_metrics.hpp"

#include "iscsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iscsc {

namespace {

double quad(const CVec& h, const CMat& m) { return std::real(h.dot(m * h)); }

double sinr_on(std::size_t k, const CVec& h, const BeamformerSet& beams, double sigma_c2) {
  if (k >= beams.w.size()) throw DomainError("intended index out of range");
  const double signal = std::max(quad(h, beams.w[k]), 0.0);
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.w.size(); ++j) {
    if (j != k) interference += quad(h, beams.w[j]);
  }
  for (const auto& r : beams.r) interference += quad(h, r);
  return signal / (std::max(interference, 0.0) + sigma_c2);
}

}  // namespace

CMat transmit_covariance(const BeamformerSet& beams) {
  const Eigen::Index n = beams.antennas();
  CMat rx = CMat::Zero(n, n);
  for (const auto& w : beams.w) {
    if (w.rows() != n || w.cols() != n) throw DomainError("beamformer dimension mismatch");
    rx += w;
  }
  for (const auto& r : beams.r) {
    if (r.rows() != n || r.cols() != n) throw DomainError("beamformer dimension mismatch");
    rx += r;
  }
  return rx;
}

BeamformerSet isotropic_beams(Eigen::Index antennas, std::size_t intended, std::size_t tracked,
                              double total_power) {
  BeamformerSet beams;
  const double count = static_cast<double>(intended + tracked);
  const double per = count > 0 ? total_power / (count * static_cast<double>(antennas)) : 0.0;
  const CMat block = per * CMat::Identity(antennas, antennas);
  beams.w.assign(intended, block);
  beams.r.assign(tracked, block);
  return beams;
}

double sinr_intended(std::size_t k, const CVec& h, const BeamformerSet& beams, double sigma_c2) {
  return sinr_on(k, h, beams, sigma_c2);
}

double sinr_eavesdropper(std::size_t k, const CVec& h_l, const BeamformerSet& beams,
                         double sigma_c2) {
  return sinr_on(k, h_l, beams, sigma_c2);
}

double semantic_rate(double sinr, double rho, double iota) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("extraction ratio must lie in (0, 1]");
  return iota / rho * std::log2(1.0 + sinr);
}

RhoBound rho_lower_bound(const SemanticProfile& p) {
  if (!(p.bleu_floor > 0.0)) throw DomainError("BLEU floor must be > 0");
  if (p.bleu_floor > 1.0) throw DomainError("BLEU floor must be <= 1");
  if (p.gram_weights.size() != p.gram_precisions.size()) {
    throw DomainError("gram weights and precisions differ in length");
  }
  double sum = 0.0;
  for (std::size_t g = 0; g < p.gram_weights.size(); ++g) {
    if (p.gram_weights[g] < 0.0) throw DomainError("gram weights must be >= 0");
    const double pg = p.gram_precisions[g];
    if (!(pg > 0.0 && pg <= 1.0)) throw DomainError("gram precisions must lie in (0, 1]");
    sum += p.gram_weights[g] * std::log(pg);
  }
  const double denom = 1.0 - std::log(p.bleu_floor) + sum;
  if (!(denom >= 1.0)) return {1.0, true};
  return {1.0 / denom, false};
}

double secrecy_rate(std::size_t k, const RateReport& rates) {
  const double sk = rates.semantic_rate.at(k);
  if (rates.eaves_rate.rows() == 0) return std::max(0.0, sk);
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < rates.eaves_rate.rows(); ++l) {
    worst = std::min(worst, std::max(0.0, sk - rates.eaves_rate(l, static_cast<Eigen::Index>(k))));
  }
  return worst;
}

double computing_power(std::span<const double> rho, double coeff_f) {
  double p = 0.0;
  for (double r : rho) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("extraction ratio must lie in (0, 1]");
    p -= std::log(r);
  }
  return coeff_f * p;
}

double comm_sense_power(const BeamformerSet& beams) {
  double p = 0.0;
  for (const auto& w : beams.w) p += std::real(w.trace());
  for (const auto& r : beams.r) p += std::real(r.trace());
  return p;
}

RateReport rate_report(const std::vector<CVec>& intended, const std::vector<CVec>& unintended,
                       const BeamformerSet& beams, std::span<const double> rho, double iota,
                       double sigma_c2) {
  const std::size_t kk = intended.size();
  if (rho.size() != kk || beams.w.size() != kk) {
    throw DomainError("rate_report: intended vehicle count mismatch");
  }
  RateReport rep;
  rep.iota = iota;
  rep.rho.assign(rho.begin(), rho.end());
  rep.eaves_sinr = Mat::Zero(static_cast<Eigen::Index>(unintended.size()),
                             static_cast<Eigen::Index>(kk));
  rep.eaves_rate = rep.eaves_sinr;
  for (std::size_t k = 0; k < kk; ++k) {
    const double g = sinr_intended(k, intended[k], beams, sigma_c2);
    rep.sinr.push_back(g);
    rep.conventional_rate.push_back(std::log2(1.0 + g));
    rep.semantic_rate.push_back(semantic_rate(g, rho[k], iota));
    for (std::size_t l = 0; l < unintended.size(); ++l) {
      const double gl = sinr_eavesdropper(k, unintended[l], beams, sigma_c2);
      const auto li = static_cast<Eigen::Index>(l);
      const auto ki = static_cast<Eigen::Index>(k);
      rep.eaves_sinr(li, ki) = gl;
      rep.eaves_rate(li, ki) = semantic_rate(gl, rho[k], iota);
    }
  }
  for (std::size_t k = 0; k < kk; ++k) rep.ssr.push_back(secrecy_rate(k, rep));
  return rep;
}

}  // namespace iscsc
