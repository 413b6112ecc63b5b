#include "iscsc/opt/ao.hpp"

#include "iscsc/semantic_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace iscsc::opt {

namespace {

double max_increment(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).norm());
  return m;
}

// A zero rate target maps to a zero SINR threshold, which the restriction
// cannot express; such targets are treated as infeasible.
bool targets_valid(const AoState& s, std::size_t eaves) {
  return s.lambda > 0.0 && (eaves == 0 || s.varrho > 0.0);
}

}  // namespace

RhoSearch bisect_rho(const BeamformerSet& beams, std::size_t intended, double coeff_f,
                     double power_budget, double rho_lb, double tol) {
  if (!(rho_lb > 0.0 && rho_lb <= 1.0)) throw DomainError("rho lower bound must lie in (0, 1]");
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
  const double used = comm_sense_power(beams);
  const double k = static_cast<double>(intended);
  auto fits = [&](double rho) { return -coeff_f * k * std::log(rho) + used <= power_budget; };

  RhoSearch out;
  if (!fits(1.0)) return out;
  out.feasible = true;
  if (fits(rho_lb)) {
    out.rho = rho_lb;
    return out;
  }
  double lo = rho_lb;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? hi : lo) = mid;
  }
  out.rho = hi;
  return out;
}

AoState update_targets(const AoState& state, bool feasible, const OptimizerSettings& cfg) {
  if (!(cfg.delta_lambda > 0.0) || !(cfg.delta_varrho > 0.0))
    throw DomainError("target steps must be positive");
  AoState next = state;
  if (state.frozen) return next;
  if (feasible) {
    next.feasible_lambda = state.lambda;
    next.feasible_varrho = state.varrho;
    next.lambda = state.lambda + cfg.delta_lambda;
    next.varrho = std::max(0.0, state.varrho - cfg.delta_varrho);
  } else {
    next.lambda = state.feasible_lambda;
    next.varrho = state.feasible_varrho;
    next.frozen = true;
  }
  return next;
}

AoState initial_state(const SlotProblem& problem, const OptimizerSettings& cfg) {
  problem.validate();
  const std::size_t K = problem.intended_count();
  const std::size_t L = problem.eaves_count();
  AoState s;
  s.lambda = cfg.lambda0;
  s.rho.assign(K, cfg.semantic ? cfg.rho_lb : 1.0);
  const BeamformerSet iso = isotropic_beams(problem.geom.num_antennas, K, K + L, cfg.power_budget);
  double varrho = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t k = 0; k < K; ++k) {
      const double g = sinr_eavesdropper(k, problem.eaves[l].h_bar, iso, cfg.sigma_c2);
      varrho = std::max(varrho, semantic_rate(g, s.rho[k], cfg.iota));
    }
  // Without eavesdroppers the cap is inert; any positive value works.
  s.varrho = L > 0 ? varrho : cfg.delta_varrho;
  s.feasible_lambda = s.lambda;
  s.feasible_varrho = s.varrho;
  return s;
}

AoResult ao_loop(const SlotProblem& problem, const AoState& start, const OptimizerSettings& cfg,
                 const conic::ConicSolver& solver) {
  AoResult result;
  AoDiagnostics& diag = result.diagnostics;
  AoState state = start;
  bool have_feasible = false;
  std::map<std::tuple<double, double, std::vector<double>>, SdpSolution> cache;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    diag.iterations = it;
    state.iteration = it;
    SdpSolution sol;
    if (targets_valid(state, problem.eaves_count())) {
      const auto key = std::make_tuple(state.lambda, state.varrho, state.rho);
      auto hit = cache.find(key);
      if (hit != cache.end()) {
        sol = hit->second;
      } else {
        const SdpModel model = assemble_sdp(state, problem, cfg);
        sol = solve_sdp_step(model, solver);
        ++diag.solver_calls;
        cache.emplace(key, sol);
      }
    } else {
      sol.status = conic::SolveStatus::Infeasible;
    }
    const bool feasible = sol.optimal();
    diag.feasible.push_back(feasible);
    diag.status.push_back(sol.status);

    if (!feasible) {
      if (!have_feasible) throw NoFeasiblePoint("first SDP of the slot is infeasible");
      diag.objective.push_back(std::nan(""));
      diag.w_increment.push_back(std::nan(""));
      diag.r_increment.push_back(std::nan(""));
      const bool was_frozen = state.frozen;
      state = update_targets(state, false, cfg);
      if (was_frozen) break;  // nothing left to change
      continue;
    }

    diag.objective.push_back(cfg.kappa1 * (state.lambda - state.varrho) -
                             cfg.kappa2 * sol.sensing_objective);
    bool converged = false;
    if (have_feasible) {
      const double dw = max_increment(sol.beams.w, result.solution.beams.w);
      const double dr = max_increment(sol.beams.r, result.solution.beams.r);
      diag.w_increment.push_back(dw);
      diag.r_increment.push_back(dr);
      converged = dw <= cfg.convergence_eps && dr <= cfg.convergence_eps;
    } else {
      diag.w_increment.push_back(std::nan(""));
      diag.r_increment.push_back(std::nan(""));
    }
    have_feasible = true;
    state.u = sol.u;
    result.solution = sol;
    result.state = state;
    if (converged) {
      diag.converged = true;
      break;
    }

    if (cfg.semantic) {
      const RhoSearch rs = bisect_rho(sol.beams, problem.intended_count(), cfg.computing_coeff,
                                      cfg.power_budget, cfg.rho_lb, cfg.bisection_tol);
      if (rs.feasible) state.rho.assign(problem.intended_count(), rs.rho);
    }
    state = update_targets(state, true, cfg);
  }

  result.next = result.state;
  result.next.frozen = false;
  result.next.iteration = 0;
  result.next.feasible_lambda = result.state.lambda;
  result.next.feasible_varrho = result.state.varrho;
  return result;
}

AoResult ao_loop_with_backoff(const SlotProblem& problem, const AoState& start,
                              const OptimizerSettings& cfg, const conic::ConicSolver& solver) {
  try {
    return ao_loop(problem, start, cfg, solver);
  } catch (const NoFeasiblePoint&) {
  }
  for (int j = 0; j < 4; ++j) {
    AoState s = start;
    const double f = std::ldexp(1.0, j);
    s.lambda = std::max(cfg.lambda0, start.lambda - cfg.delta_lambda * f);
    s.varrho = start.varrho + cfg.delta_varrho * f;
    s.frozen = false;
    s.feasible_lambda = s.lambda;
    s.feasible_varrho = s.varrho;
    try {
      return ao_loop(problem, s, cfg, solver);
    } catch (const NoFeasiblePoint&) {
    }
  }
  return ao_loop(problem, initial_state(problem, cfg), cfg, solver);
}

}  // namespace iscsc::opt
