#include "iscsc/opt/randomization.hpp"

#include "iscsc/errors.hpp"
#include "iscsc/linalg.hpp"
#include "iscsc/opt/bti.hpp"
#include "iscsc/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace iscsc::opt {

namespace {

constexpr double kRankOneRatio = 1e-6;

double normalized(const BtiBlock& b, const ChannelEstimate& est) {
  return b.trace_margin() / (est.h_bar.squaredNorm() + est.omega.trace().real());
}

const CVec& relaxed_channel(const SlotProblem& problem, std::size_t k) {
  if (k >= problem.intended.size()) throw DomainError("randomization: more W than intended channels");
  return problem.intended[k].h_bar;
}

}  // namespace

double margin_tolerance(const OptimizerSettings& cfg) {
  return cfg.solver.feastol * cfg.power_budget;
}

double min_bti_margin(const BeamformerSet& beams, const SlotProblem& problem, const AoState& state,
                      const OptimizerSettings& cfg) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < problem.intended_count(); ++k) {
    const double g = sinr_threshold(state.lambda, state.rho[k], cfg.iota);
    m = std::min(m, normalized(intended_bti(k, problem.intended[k], beams, g, cfg.sigma_c2, cfg.epsilon1),
                               problem.intended[k]));
    for (std::size_t l = 0; l < problem.eaves_count(); ++l) {
      const double cap = sinr_threshold(state.varrho, state.rho[k], cfg.iota);
      m = std::min(m, normalized(eavesdropper_bti(k, problem.eaves[l], beams, cap, cfg.sigma_c2, cfg.epsilon2),
                                 problem.eaves[l]));
    }
  }
  return m;
}

RandomizationResult gaussian_randomization(const BeamformerSet& relaxed,
                                           const SlotProblem& problem, const AoState& state,
                                           const OptimizerSettings& cfg, std::uint64_t seed,
                                           kernels::Exec exec) {
  if (cfg.randomization_candidates < 1) throw DomainError("need at least one randomization candidate");
  RandomizationResult out;
  out.beams = relaxed;
  std::vector<CVec> factors(relaxed.w.size());

  for (std::size_t k = 0; k < relaxed.w.size(); ++k) {
    const CMat wk = linalg::hermitian_part(relaxed.w[k]);
    if (linalg::min_eigenvalue(wk) < -1e-6 * std::max(1.0, wk.norm()))
      throw DomainError("W must be PSD for randomization");
    const double power = wk.trace().real();
    Eigen::SelfAdjointEigenSolver<CMat> es(wk);
    const Eigen::Index n = wk.rows();
    const double l1 = es.eigenvalues()(n - 1);
    const double l2 = n > 1 ? es.eigenvalues()(n - 2) : 0.0;
    CVec principal = es.eigenvectors().col(n - 1);
    principal *= std::sqrt(std::max(power, 0.0));

    if (!(l1 > 0.0) || l2 <= kRankOneRatio * l1) {
      factors[k] = principal;
      out.principal_only.push_back(true);
      out.candidate_margins.emplace_back();
      out.beams.w[k] = principal * principal.adjoint();
      continue;
    }
    out.principal_only.push_back(false);

    const CMat root = linalg::psd_sqrt(wk);
    Engine rng = make_stream(seed, 0x7a000000ULL + k);
    std::vector<CVec> cands;
    cands.reserve(cfg.randomization_candidates + 2);
    for (int c = 0; c < cfg.randomization_candidates; ++c) {
      CVec w = root * complex_normal_vector(rng, n);
      const double nrm = w.norm();
      if (nrm > 0.0) w *= std::sqrt(power) / nrm;
      cands.push_back(w);
    }
    cands.push_back(principal);
    CVec matched = wk * relaxed_channel(problem, k);
    if (matched.norm() > 0.0) {
      matched *= std::sqrt(power) / matched.norm();
      cands.push_back(matched);
    }

    const BeamformerSet base = out.beams;
    const std::vector<double> margins = kernels::map_indices(
        cands.size(),
        [&](std::size_t i) {
          BeamformerSet trial = base;
          trial.w[k] = cands[i] * cands[i].adjoint();
          return min_bti_margin(trial, problem, state, cfg);
        },
        exec);
    const auto best = std::max_element(margins.begin(), margins.end()) - margins.begin();
    factors[k] = cands[best];
    out.beams.w[k] = cands[best] * cands[best].adjoint();
    out.candidate_margins.push_back(margins);
  }

  out.beams.w_vec = factors;
  out.best_margin = min_bti_margin(out.beams, problem, state, cfg);
  out.feasible = out.best_margin >= -margin_tolerance(cfg);
  return out;
}

}  // namespace iscsc::opt
