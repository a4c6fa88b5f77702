#include "blowup/io/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "blowup/decomposition/track.hpp"
#include "blowup/diagnostics/pohozaev.hpp"
#include "blowup/diagnostics/theta.hpp"
#include "blowup/error.hpp"
#include "blowup/io/csv.hpp"
#include "blowup/io/outputs.hpp"
#include "blowup/io/trajectory_io.hpp"
#include "blowup/kernel/spectral.hpp"
#include "blowup/solver/integrator.hpp"
#include "blowup/tangent/profile.hpp"

#ifndef BLOWUP_LAB_VERSION
#define BLOWUP_LAB_VERSION "unknown"
#endif

namespace blowup::io {

using nlohmann::json;

std::filesystem::path output_root() {
  if (const char* env = std::getenv("BLOWUP_LAB_OUTPUT"); env && *env) return env;
  return "blowup_lab_output";
}

const char* version() { return BLOWUP_LAB_VERSION; }

namespace {

std::vector<double> log_range(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
  return out;
}

json file_inventory(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), dir).generic_string();
    if (rel == "manifest.json" || e.path().extension() == ".tmp") continue;
    files[rel] = sha256_file(e.path());
  }
  return files;
}

class Checks {
 public:
  void record(const std::string& name, bool passed, const std::string& detail) {
    j_[name] = {{"passed", passed}, {"detail", detail}};
    if (!passed) ++failed_;
  }
  const json& json_value() const { return j_; }
  int failed() const { return failed_; }

 private:
  json j_ = json::object();
  int failed_ = 0;
};

std::string fmt(double v) { return format_double(v); }

// Everything after the solver; fills the manifest as it goes so a failure
// keeps the earlier sections.
void diagnose(const Scenario& sc, solver::Trajectory& traj, const std::filesystem::path& dir, json& m, Checks& checks) {
  const Dimension dim = Dimension::of(sc.n);
  const auto& plan = sc.diagnostics;
  const Point origin(dim.n, 0.0);
  const diagnostics::CutoffSpec cutoff;
  const bool blowup = traj.termination == solver::Termination::blowup;

  m["termination"] = solver::to_string(traj.termination);
  m["steps"] = traj.sup_history.size();
  m["final_time"] = traj.end_time();
  m["final_sup"] = traj.snapshots.back().sup();
  m["budget_total"] = traj.budget.total();
  checks.record("solver_finite", !traj.flagged, traj.flagged ? traj.diagnostic : "state stayed finite");

  if (blowup) {
    try {
      traj.t_est = solver::estimate_blowup_time(traj);
      const auto& e = *traj.t_est;
      m["t_est"] = {{"T", e.T},           {"uncertainty", e.uncertainty}, {"exponent", e.exponent},
                    {"kappa_fit", e.kappa_fit}, {"decades", e.decades},       {"rms_residual", e.rms_residual}};
      const double rel = std::abs(e.exponent - dim.type1_exponent()) / dim.type1_exponent();
      checks.record("blowup_rate", rel <= 0.05, "exponent " + fmt(e.exponent) + " over " + fmt(e.decades) + " decades");
    } catch (const FitQualityError& e) {
      checks.record("blowup_rate", false, e.what());
    }
  }
  if (sc.initial.family == "constant" && sc.initial.A > 0.0 && traj.mode == solver::Mode::reaction_only)
    m["t_ode"] = std::pow(sc.initial.A, -(dim.p - 1.0)) / (dim.p - 1.0);
  m["trajectory"] = write_trajectory(traj, dir / "trajectory");

  const double T = traj.t_est ? traj.t_est->T : traj.end_time();
  const double h = traj.mode == solver::Mode::full ? (*traj.grid)[1] : 0.0;
  const double s_lo = std::max({4.0 * std::max(T - traj.end_time(), 0.0), 100.0 * h * h, 1e-300});
  const double s_hi = 0.999 * (T - traj.start_time());

  if (!plan.theta_s.empty()) {
    std::vector<diagnostics::ThetaSample> samples;
    json skipped = json::array();
    for (double s : plan.theta_s) {
      try {
        samples.push_back(diagnostics::theta(traj, origin, T, s, cutoff));
      } catch (const RangeError&) {
        skipped.push_back(s);
      }
    }
    atomic_write(dir / "theta.csv", theta_csv(samples, dim.n));
    m["theta"] = {{"t", T}, {"samples", samples.size()}, {"skipped_s", skipped}};
  }

  if (plan.monotonicity) {
    if (s_hi > s_lo * 1.5) {
      const auto report =
          diagnostics::theta_monotonicity_report(traj, origin, T, log_range(s_lo, s_hi, 16), cutoff, plan.monotonicity_tol);
      atomic_write(dir / "monotonicity.csv", theta_csv(report.samples, dim.n));
      json log = json::array();
      for (const auto& v : report.violations)
        log.push_back({{"s_lo", v.s_lo}, {"s_hi", v.s_hi}, {"theta_lo", v.theta_lo}, {"theta_hi", v.theta_hi}});
      m["monotonicity"] = {{"t", T}, {"s_min", s_lo}, {"s_max", s_hi}, {"violations", log}};
      checks.record("theta_monotone", report.monotone(), std::to_string(report.violations.size()) + " violations");
    } else {
      m["monotonicity"] = {{"skipped", "trajectory too short in s"}};
    }
  }

  if (plan.classify && blowup && traj.t_est) {
    const auto result = diagnostics::classify(traj, origin, cutoff);
    m["classification"] = to_json(result);
    if (sc.outside_classified_regime()) {
      m["classification"]["outside_classified_regime"] = true;
    } else {
      checks.record("type1_verdict", result.verdict == diagnostics::Verdict::type1,
                    "verdict " + diagnostics::to_string(result.verdict));
    }
  } else if (plan.classify) {
    m["classification"] = {{"verdict", diagnostics::to_string(blowup ? diagnostics::Verdict::indeterminate
                                                                               : diagnostics::Verdict::regular)},
                           {"note", blowup ? "no blowup time estimate" : "no blowup"}};
  }

  if (!plan.pohozaev_radii.empty() && traj.mode == solver::Mode::full) {
    const solver::TrajectorySource source(traj);
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t k : {traj.snapshots.size() / 2, traj.snapshots.size() - 1}) {
      const double t = traj.snapshots[k].time;
      std::vector<diagnostics::PohozaevBalance> balance;
      double bulk = 0.0;  // largest r |rhs|: the ball integral before the 1/r
      for (double r : plan.pohozaev_radii) {
        balance.push_back(diagnostics::pohozaev_balance(source, t, r));
        bulk = std::max(bulk, r * std::abs(balance.back().rhs));
      }
      for (std::size_t i = 0; i < balance.size(); ++i) {
        const auto& b = balance[i];
        const double r = plan.pohozaev_radii[i];
        const double scale = std::max({std::abs(b.lhs), std::abs(b.rhs), bulk / r, 1e-300});
        const double rel = b.residual() / scale;
        worst = std::max(worst, rel);
        rows.push_back({{"t", t}, {"r", r}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"relative", rel}});
      }
    }
    m["pohozaev"] = rows;
    checks.record("pohozaev_balance", worst <= plan.pohozaev_tol, "worst relative residual " + fmt(worst));
  }

  if (plan.track && blowup && traj.mode == solver::Mode::full) {
    const auto track = decomposition::track_parameters(traj, kernel::cached_ground_state(dim));
    atomic_write(dir / "track.csv", track_csv(track, dim.n));
    m["track"] = {{"valid", track.valid_count()},        {"points", track.points.size()},
                  {"c_red", track.c_red},                {"max_ratio", track.max_ratio()},
                  {"log_slope", track.log_slope},        {"max_a_over_lambda", track.max_a_over_lambda()},
                  {"violations", track.violation_log}};
    const bool ok = track.valid_count() > 0 && track.violation_log.empty() && track.max_a_over_lambda() < 0.1;
    checks.record("parameter_track", ok,
                  std::to_string(track.valid_count()) + "/" + std::to_string(track.points.size()) + " valid fits, " +
                      std::to_string(track.violation_log.size()) + " violations, max a/lambda " +
                      fmt(track.max_a_over_lambda()));
  }

  if (plan.profile && blowup && traj.t_est) {
    const auto times = tangent::log_spaced_times(traj, T, traj.start_time(), 12);
    const auto profile = tangent::self_similar_profile(traj, origin, times);
    atomic_write(dir / "profile.csv", profile_csv(profile));
    const auto d = tangent::liouville_distance(profile);
    json dev = json::array();
    for (const auto& s : profile.samples) dev.push_back({{"tau", s.tau}, {"sup_deviation", s.sup_deviation}});
    m["profile"] = {{"d_zero", d.d_zero}, {"d_kappa", d.d_kappa}, {"deviation", dev}};
    checks.record("profile_nontrivial", d.d_kappa < d.d_zero,
                  "distance to kappa " + fmt(d.d_kappa) + ", to zero " + fmt(d.d_zero));
  }
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& root) {
  const auto started = std::chrono::steady_clock::now();
  RunResult out;
  out.directory = root / sc.name;
  std::filesystem::create_directories(out.directory);
  json& m = out.manifest;
  m["status"] = "incomplete";
  m["version"] = version();
  m["scenario"] = to_json(sc);
  m["outside_classified_regime"] = sc.outside_classified_regime();
  atomic_write(out.directory / "manifest.json", m.dump(2) + "\n");

  Checks checks;
  try {
    solver::Trajectory traj = solver::run_until_blowup(initial_field(sc), sc.solver);
    diagnose(sc, traj, out.directory, m, checks);
    m["status"] = "complete";
  } catch (const std::exception& e) {
    m["status"] = "failed";
    m["error"] = e.what();
  }
  m["checks"] = checks.json_value();
  m["files"] = file_inventory(out.directory);
  out.passed = m["status"] == "complete" && checks.failed() == 0;
  m["passed"] = out.passed;
  m["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  atomic_write(out.directory / "manifest.json", m.dump(2) + "\n");
  return out;
}

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BatchRow> run_batch(const std::vector<std::filesystem::path>& paths, int parallelism,
                                const std::filesystem::path& root) {
  std::vector<BatchRow> rows(paths.size());
  std::vector<std::optional<Scenario>> scenarios(paths.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    rows[i].file = paths[i].filename().string();
    try {
      scenarios[i] = load_scenario(paths[i]);
      rows[i].name = scenarios[i]->name;
      if (!names.insert(rows[i].name).second) {
        scenarios[i].reset();
        throw ConfigError("scenario name '" + rows[i].name + "' is already used in this batch");
      }
    } catch (const std::exception& e) {
      rows[i].status = "config_error";
      rows[i].error = e.what();
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < paths.size();) {
      if (!scenarios[i]) continue;
      BatchRow& row = rows[i];
      const RunResult r = run_scenario(*scenarios[i], root);
      const json& m = r.manifest;
      row.status = m.value("status", "failed");
      row.termination = m.value("termination", "");
      if (m.contains("t_est")) row.t_est = m["t_est"].value("T", row.t_est);
      if (m.contains("classification")) row.verdict = m["classification"].value("verdict", "");
      if (m.contains("monotonicity") && m["monotonicity"].contains("violations"))
        row.monotonicity_violations = static_cast<int>(m["monotonicity"]["violations"].size());
      if (m.contains("track")) row.track_violations = static_cast<int>(m["track"]["violations"].size());
      for (const auto& [name, c] : m["checks"].items())
        if (!c["passed"].get<bool>()) ++row.checks_failed;
      row.passed = r.passed;
      row.error = m.value("error", "");
    }
  };
  const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(paths.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string summary_csv(const std::vector<BatchRow>& rows) {
  std::string out =
      "file,name,status,termination,t_est,verdict,monotonicity_violations,track_violations,checks_failed,passed,error\n";
  for (const auto& r : rows) {
    out += quote(r.file) + ',' + quote(r.name) + ',' + r.status + ',' + r.termination + ',' + format_double(r.t_est) +
           ',' + r.verdict + ',' + std::to_string(r.monotonicity_violations) + ',' +
           std::to_string(r.track_violations) + ',' + std::to_string(r.checks_failed) + ',' + (r.passed ? "1" : "0") +
           ',' + quote(r.error) + '\n';
  }
  return out;
}

json strip_timing(json manifest) {
  manifest.erase("elapsed_seconds");
  return manifest;
}

}  // namespace blowup::io
