#include "iscsc/sim/harness.hpp"

#include "iscsc/conic/interior_point.hpp"
#include "iscsc/opt/outage.hpp"
#include "iscsc/opt/randomization.hpp"
#include "iscsc/particle_filter.hpp"
#include "iscsc/semantic_metrics.hpp"
#include "iscsc/sensing_metrics.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace iscsc::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tracker of one vehicle; the variant used depends on the configured filter.
struct Track {
  TrackBelief belief;
  std::optional<ParticleCloud> cloud;
};

std::uint64_t draw_seed(Engine& rng) { return rng(); }

void predict(Track& tr, FilterKind kind, const SlotClock& clock, const ProcessNoise& noise,
             Engine& pf_rng) {
  switch (kind) {
    case FilterKind::Ekf:
      tr.belief = ekf_predict(tr.belief, clock, noise);
      break;
    case FilterKind::None: {
      // Dead reckoning: propagate the previous prediction, never correct it.
      TrackBelief b = ekf_predict(tr.belief, clock, noise);
      b.q_post = b.q_pred;
      b.m_post = b.m_pred;
      tr.belief = b;
      break;
    }
    case FilterKind::Pf: {
      pf_predict(*tr.cloud, clock, noise, draw_seed(pf_rng));
      tr.belief.q_pred = tr.cloud->mean();
      tr.belief.m_pred = tr.cloud->covariance();
      break;
    }
  }
}

void update(Track& tr, FilterKind kind, const Measurement& z, const MeasurementModel& model,
            Engine& pf_rng) {
  switch (kind) {
    case FilterKind::Ekf:
      tr.belief = ekf_update(tr.belief, z, model);
      break;
    case FilterKind::None:
      break;
    case FilterKind::Pf: {
      const PfReport rep = pf_update(*tr.cloud, z, model, draw_seed(pf_rng));
      tr.belief.q_post = rep.estimate;
      tr.belief.m_post = tr.cloud->covariance();
      break;
    }
  }
}

BeamformerSet fallback_beams(const ScenarioConfig& cfg, const opt::OptimizerSettings& os,
                             std::span<const double> rho) {
  const double budget = os.power_budget - computing_power(rho, os.computing_coeff);
  return isotropic_beams(cfg.antennas, cfg.intended_count(), cfg.vehicles.size(), std::max(0.0, budget));
}

}  // namespace

RunResult run_simulation(const ScenarioConfig& cfg,
                         const std::function<void(const SlotRecord&)>& on_slot) {
  cfg.validate();
  const ArrayGeometry geom = cfg.geometry();
  const opt::OptimizerSettings os = cfg.optimizer_settings();
  const std::vector<std::size_t> order = cfg.ordering();
  const std::size_t K = cfg.intended_count();
  const std::size_t L = cfg.eaves_count();
  const std::size_t V = cfg.vehicles.size();
  conic::InteriorPointSolver solver(os.solver);

  std::vector<VehicleState> truth(V);
  std::vector<Track> tracks(V);
  std::vector<Engine> truth_rng, meas_rng, pf_rng;
  for (std::size_t i = 0; i < V; ++i) {
    truth[i] = cfg.vehicles[i].initial_state();
    truth_rng.push_back(make_stream(cfg.seed, 0x100 + i));
    meas_rng.push_back(make_stream(cfg.seed, 0x200 + i));
    pf_rng.push_back(make_stream(cfg.seed, 0x300 + i));
    const TrackPrior prior{truth[i], cfg.vehicles[i].initial_covariance()};
    tracks[i].belief = init_belief(prior);
    if (cfg.filter == FilterKind::Pf)
      tracks[i].cloud = pf_init(prior, static_cast<std::size_t>(cfg.particles), draw_seed(pf_rng[i]));
  }
  Engine opt_rng = make_stream(cfg.seed, 0x400);
  Engine mc_rng = make_stream(cfg.seed, 0x500);

  const std::vector<double> default_rho(K, cfg.semantic_enabled ? cfg.rho_lb : 1.0);
  std::optional<opt::AoState> warm;
  RunResult run;
  run.stop_reason = "slots";

  for (int t = 1; t <= cfg.slots; ++t) {
    const SlotClock clock{cfg.delta_t_s, t};

    // (0) ground truth
    bool stop = false;
    for (std::size_t i = 0; i < V && !stop; ++i) {
      const ProcessNoise noise = cfg.vehicles[i].process_noise();
      try {
        truth[i] = evolve_state(truth[i], clock, draw_state_noise(noise, truth_rng[i]));
      } catch (const StateError&) {
        run.stop_reason = "state";
        stop = true;
      }
    }
    if (stop) break;
    for (const auto& s : truth)
      if (s.distance > cfg.coverage_m) stop = true;
    if (stop) {
      run.stop_reason = "coverage";
      break;
    }

    // (a) prediction and channel estimates
    for (std::size_t i = 0; i < V; ++i)
      predict(tracks[i], cfg.filter, clock, cfg.vehicles[i].process_noise(), pf_rng[i]);

    opt::SlotProblem problem;
    problem.geom = geom;
    for (std::size_t idx = 0; idx < V; ++idx) {
      const std::size_t i = order[idx];
      ChannelEstimate est;
      if (cfg.perfect_csi) {
        est.h_bar = true_channel(truth[i], geom);
        est.omega = CMat::Zero(cfg.antennas, cfg.antennas);
      } else {
        est = predicted_channel(tracks[i].belief, geom, cfg.omega_scale);
      }
      (idx < K ? problem.intended : problem.eaves).push_back(est);
      problem.sensed.push_back(tracks[i].belief.q_pred);
      problem.m_pred.push_back(tracks[i].belief.m_pred);
    }

    SlotRecord rec;
    rec.slot = t;
    rec.time_s = t * cfg.delta_t_s;
    rec.power_budget_w = os.power_budget;
    rec.mc_intended_violation = kNaN;
    rec.mc_eaves_violation = kNaN;
    rec.lambda = kNaN;
    rec.varrho = kNaN;
    std::vector<double> rho = default_rho;
    opt::AoState targets;
    const std::uint64_t rand_seed = draw_seed(opt_rng);
    const std::uint64_t mc_seed = draw_seed(mc_rng);

    // (b)-(c) optimization and rank-one recovery
    if (cfg.optimizer_enabled) {
      try {
        const opt::AoState start = warm ? *warm : opt::initial_state(problem, os);
        const opt::AoResult ao = opt::ao_loop_with_backoff(problem, start, os, solver);
        const opt::RandomizationResult rr =
            opt::gaussian_randomization(ao.solution.beams, problem, ao.state, os, rand_seed);
        rec.beams = rr.beams;
        rec.optimized = true;
        rec.randomization_ok = rr.feasible;
        rec.feasible = rr.feasible;
        rec.ao = ao.diagnostics;
        rec.ao_iterations = ao.diagnostics.iterations;
        rec.ao_converged = ao.diagnostics.converged;
        rec.solver_status = conic::to_string(ao.solution.status);
        rec.lambda = ao.state.lambda;
        rec.varrho = ao.state.varrho;
        rho = ao.state.rho;
        targets = ao.state;
        warm = ao.next;
      } catch (const opt::NoFeasiblePoint&) {
        rec.solver_status = "infeasible";
        warm.reset();
      } catch (const NumericalError&) {
        rec.solver_status = "numerical_failure";
        warm.reset();
      }
    }
    if (!rec.optimized) rec.beams = fallback_beams(cfg, os, rho);

    // (d) metrics on the transmitted beams
    std::vector<CVec> h_est, g_est, h_true, g_true;
    for (std::size_t idx = 0; idx < V; ++idx) {
      const std::size_t i = order[idx];
      const CVec& hb = idx < K ? problem.intended[idx].h_bar : problem.eaves[idx - K].h_bar;
      (idx < K ? h_est : g_est).push_back(hb);
      (idx < K ? h_true : g_true).push_back(true_channel(truth[i], geom));
    }
    const RateReport est_rates = rate_report(h_est, g_est, rec.beams, rho, cfg.iota, os.sigma_c2);
    const RateReport true_rates = rate_report(h_true, g_true, rec.beams, rho, cfg.iota, os.sigma_c2);
    for (std::size_t k = 0; k < K; ++k) {
      IntendedSlot s;
      s.rho = rho[k];
      s.sinr = est_rates.sinr[k];
      s.rate_conventional = est_rates.conventional_rate[k];
      s.rate_semantic = est_rates.semantic_rate[k];
      s.ssr = est_rates.ssr[k];
      s.sinr_true = true_rates.sinr[k];
      s.rate_semantic_true = true_rates.semantic_rate[k];
      s.ssr_true = true_rates.ssr[k];
      rec.intended.push_back(s);
    }
    rec.power_comm_sense_w = comm_sense_power(rec.beams);
    rec.power_compute_w = computing_power(rho, os.computing_coeff);
    const CMat r_x = transmit_covariance(rec.beams);
    rec.intended_est = problem.intended;
    rec.eaves_est = problem.eaves;

    if (cfg.mc_samples > 0 && rec.optimized) {
      const opt::OutageReport mc = opt::validate_outage_mc(
          rec.beams, problem.intended, problem.eaves, targets, cfg.iota, os.sigma_c2,
          static_cast<std::size_t>(cfg.mc_samples), mc_seed);
      double wi = 0.0, we = 0.0;
      for (const auto& w : mc.intended) wi = std::max(wi, w.rate);
      for (const auto& row : mc.eaves)
        for (const auto& w : row) we = std::max(we, w.rate);
      rec.mc_intended_violation = wi;
      rec.mc_eaves_violation = L > 0 ? we : 0.0;
    }

    // (e)-(f) measurement with the chosen beams, then correction
    rec.vehicles.resize(V);
    for (std::size_t i = 0; i < V; ++i) {
      VehicleSlot& vs = rec.vehicles[i];
      vs.truth = truth[i];
      vs.pred = tracks[i].belief.q_pred;
      try {
        vs.pcrb = pcrb_report(fim_observation(vs.pred, r_x, geom, os.fisher), tracks[i].belief.m_pred).pcrb_theta;
      } catch (const NumericalError&) {
        vs.pcrb = kNaN;
      }
      const MeasurementModel model = cfg.measurement_model(i);
      const Measurement z = simulate_measurement(truth[i], model, &rec.beams, geom, meas_rng[i]);
      update(tracks[i], cfg.filter, z, model, pf_rng[i]);
      vs.post = tracks[i].belief.q_post;
    }

    if (on_slot) on_slot(rec);
    run.records.push_back(std::move(rec));
  }
  return run;
}

}  // namespace iscsc::sim
