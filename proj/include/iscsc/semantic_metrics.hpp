#pragma once

#include "iscsc/beams.hpp"
#include "iscsc/types.hpp"

#include <span>
#include <vector>

namespace iscsc {

/// Semantic-coding parameters shared by all intended vehicles. Extraction
/// ratios themselves are per vehicle and live in the optimizer state.
struct SemanticProfile {
  double iota = 1.0;        // word-to-bit ratio
  double bleu_floor = 1.0;  // Q_t in (0, 1]
  std::vector<double> gram_weights;
  std::vector<double> gram_precisions;
};

struct RhoBound {
  double value = 1.0;
  bool clamped = false;  // formula gave a value outside (0, 1]
};

/// Per-slot link metrics. eaves_sinr(l, k) is Gamma_{l|k}.
struct RateReport {
  std::vector<double> sinr;            // gamma_k
  std::vector<double> rho;             // extraction ratio per intended vehicle
  std::vector<double> semantic_rate;   // S_k
  std::vector<double> conventional_rate;
  Mat eaves_sinr;                      // L x K
  Mat eaves_rate;                      // S_{l|k}, same rho_k as the intended link
  std::vector<double> ssr;
  double iota = 1.0;
};

/// gamma_k = h^H W_k h / (h^H (sum_{k' != k} W_k' + sum_i R_i) h + sigma_c^2).
double sinr_intended(std::size_t k, const CVec& h, const BeamformerSet& beams, double sigma_c2);

/// Gamma_{l|k}: same structure evaluated on the unintended vehicle's channel.
double sinr_eavesdropper(std::size_t k, const CVec& h_l, const BeamformerSet& beams,
                         double sigma_c2);

/// S = (iota / rho) log2(1 + sinr).
double semantic_rate(double sinr, double rho, double iota);

/// 1 / (1 - ln Q + sum_g w_g ln p_g), clamped into (0, 1].
RhoBound rho_lower_bound(const SemanticProfile& profile);

/// min_l [S_k - S_{l|k}]^+ ; S_k when there are no unintended vehicles.
double secrecy_rate(std::size_t k, const RateReport& rates);

/// -F sum_k ln rho_k.
double computing_power(std::span<const double> rho, double coeff_f);

/// Tr(sum W + sum R).
double comm_sense_power(const BeamformerSet& beams);

/// Full report over the given intended and unintended channels.
RateReport rate_report(const std::vector<CVec>& intended, const std::vector<CVec>& unintended,
                       const BeamformerSet& beams, std::span<const double> rho, double iota,
                       double sigma_c2);

}  // namespace iscsc
