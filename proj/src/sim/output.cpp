#include "iscsc/sim/output.hpp"

#include "iscsc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace iscsc::sim {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

json cmat_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json cvec_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nan("");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<std::string> csv_header(const ScenarioConfig& cfg) {
  std::vector<std::string> h{"slot", "time_s", "feasible", "ao_iterations", "ao_converged",
                             "solver_status", "randomization_ok", "lambda", "varrho",
                             "power_comm_sense_w", "power_compute_w", "power_budget_w",
                             "mc_intended_violation", "mc_eaves_violation"};
  for (std::size_t i = 0; i < cfg.vehicles.size(); ++i) {
    const std::string p = "v" + std::to_string(i) + "_";
    for (const char* f : {"theta_true", "d_true", "v_true", "theta_pred", "d_pred", "v_pred",
                          "theta_post", "d_post", "v_post", "pcrb"})
      h.push_back(p + f);
  }
  for (std::size_t k = 0; k < cfg.intended_count(); ++k) {
    const std::string p = "k" + std::to_string(k) + "_";
    for (const char* f : {"rho", "sinr", "rate_conventional", "rate_semantic", "ssr", "sinr_true",
                          "rate_semantic_true", "ssr_true"})
      h.push_back(p + f);
  }
  return h;
}

std::string csv_row(const SlotRecord& r) {
  std::string line = std::to_string(r.slot) + "," + num(r.time_s) + "," + (r.feasible ? "1" : "0") + "," +
                     std::to_string(r.ao_iterations) + "," + (r.ao_converged ? "1" : "0") + "," +
                     r.solver_status + "," + (r.randomization_ok ? "1" : "0") + "," + num(r.lambda) + "," +
                     num(r.varrho) + "," + num(r.power_comm_sense_w) + "," + num(r.power_compute_w) + "," +
                     num(r.power_budget_w) + "," + num(r.mc_intended_violation) + "," +
                     num(r.mc_eaves_violation);
  for (const auto& v : r.vehicles)
    for (double x : {v.truth.theta, v.truth.distance, v.truth.velocity, v.pred.theta, v.pred.distance,
                     v.pred.velocity, v.post.theta, v.post.distance, v.post.velocity, v.pcrb})
      line += "," + num(x);
  for (const auto& k : r.intended)
    for (double x : {k.rho, k.sinr, k.rate_conventional, k.rate_semantic, k.ssr, k.sinr_true,
                     k.rate_semantic_true, k.ssr_true})
      line += "," + num(x);
  return line;
}

std::string format_csv(const std::vector<SlotRecord>& records, const ScenarioConfig& cfg) {
  std::string out;
  const auto header = csv_header(cfg);
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : records) out += csv_row(r) + "\n";
  return out;
}

TrackingErrors tracking_errors(const std::vector<SlotRecord>& records) {
  TrackingErrors e;
  if (records.empty()) return e;
  const std::size_t V = records.front().vehicles.size();
  e.rmse_theta.assign(V, 0.0);
  e.rmse_distance.assign(V, 0.0);
  for (const auto& r : records)
    for (std::size_t i = 0; i < V; ++i) {
      const double dt = r.vehicles[i].post.theta - r.vehicles[i].truth.theta;
      const double dd = r.vehicles[i].post.distance - r.vehicles[i].truth.distance;
      e.rmse_theta[i] += dt * dt;
      e.rmse_distance[i] += dd * dd;
    }
  const double n = static_cast<double>(records.size());
  for (std::size_t i = 0; i < V; ++i) {
    e.rmse_theta[i] = std::sqrt(e.rmse_theta[i] / n);
    e.rmse_distance[i] = std::sqrt(e.rmse_distance[i] / n);
  }
  return e;
}

json summarize(const RunResult& run, const ScenarioConfig& cfg) {
  json s;
  s["schema_version"] = kSchemaVersion;
  s["filter"] = to_string(cfg.filter);
  s["slots"] = run.records.size();
  s["stop_reason"] = run.stop_reason;
  std::size_t feasible = 0;
  std::vector<double> sem, conv, ssr, pcrb;
  for (const auto& r : run.records) {
    if (r.feasible) ++feasible;
    for (const auto& v : r.vehicles)
      if (std::isfinite(v.pcrb)) pcrb.push_back(v.pcrb);
    if (!r.feasible) continue;
    for (const auto& k : r.intended) {
      sem.push_back(k.rate_semantic);
      conv.push_back(k.rate_conventional);
      ssr.push_back(k.ssr);
    }
  }
  s["feasible_slots"] = feasible;
  const TrackingErrors te = tracking_errors(run.records);
  for (std::size_t i = 0; i < te.rmse_theta.size(); ++i) {
    s["rmse_theta_v" + std::to_string(i)] = number_or_null(te.rmse_theta[i]);
    s["rmse_distance_v" + std::to_string(i)] = number_or_null(te.rmse_distance[i]);
  }
  s["mean_rate_semantic"] = number_or_null(mean(sem));
  s["mean_rate_conventional"] = number_or_null(mean(conv));
  s["mean_ssr"] = number_or_null(mean(ssr));
  s["mean_pcrb"] = number_or_null(mean(pcrb));
  return s;
}

json beams_document(const std::vector<SlotRecord>& records) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["slots"] = json::array();
  for (const auto& r : records) {
    json js;
    js["slot"] = r.slot;
    js["feasible"] = r.feasible;
    js["optimized"] = r.optimized;
    js["lambda"] = number_or_null(r.lambda);
    js["varrho"] = number_or_null(r.varrho);
    js["rho"] = json::array();
    for (const auto& k : r.intended) js["rho"].push_back(k.rho);
    js["w"] = json::array();
    for (const auto& m : r.beams.w) js["w"].push_back(cmat_json(m));
    js["r"] = json::array();
    for (const auto& m : r.beams.r) js["r"].push_back(cmat_json(m));
    auto est = [](const std::vector<ChannelEstimate>& es) {
      json a = json::array();
      for (const auto& e : es) a.push_back({{"h_bar", cvec_json(e.h_bar)}, {"omega", cmat_json(e.omega)}});
      return a;
    };
    js["intended_est"] = est(r.intended_est);
    js["eaves_est"] = est(r.eaves_est);
    doc["slots"].push_back(js);
  }
  return doc;
}

namespace {

CMat cmat_from(const json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  CMat m(n, n > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const auto& e = j.at(i).at(k);
      m(i, k) = {e.at(0).get<double>(), e.at(1).get<double>()};
    }
  return m;
}

CVec cvec_from(const json& j) {
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {j.at(i).at(0).get<double>(), j.at(i).at(1).get<double>()};
  return v;
}

double number_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

std::vector<SavedSlot> parse_beams_document(const json& doc) {
  std::vector<SavedSlot> out;
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) throw IoError("beams.json: unsupported schema_version");
    for (const auto& js : doc.at("slots")) {
      SavedSlot s;
      s.slot = js.at("slot").get<int>();
      s.feasible = js.at("feasible").get<bool>();
      s.optimized = js.at("optimized").get<bool>();
      s.targets.lambda = number_from(js.at("lambda"));
      s.targets.varrho = number_from(js.at("varrho"));
      s.targets.rho = js.at("rho").get<std::vector<double>>();
      for (const auto& m : js.at("w")) s.beams.w.push_back(cmat_from(m));
      for (const auto& m : js.at("r")) s.beams.r.push_back(cmat_from(m));
      for (const auto& e : js.at("intended_est")) s.intended_est.push_back({cvec_from(e.at("h_bar")), cmat_from(e.at("omega"))});
      for (const auto& e : js.at("eaves_est")) s.eaves_est.push_back({cvec_from(e.at("h_bar")), cmat_from(e.at("omega"))});
      out.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("beams.json: ") + e.what());
  }
  return out;
}

void write_outputs(const RunResult& run, const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "config.json", serialize_config(cfg));
  write_file(dir / "slots.csv", format_csv(run.records, cfg));
  write_file(dir / "summary.json", summarize(run, cfg).dump(2) + "\n");
  write_file(dir / "beams.json", beams_document(run.records).dump() + "\n");
}

}  // namespace iscsc::sim
