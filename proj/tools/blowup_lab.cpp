#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "blowup/decomposition/fit.hpp"
#include "blowup/decomposition/sampler.hpp"
#include "blowup/diagnostics/theta.hpp"
#include "blowup/error.hpp"
#include "blowup/io/csv.hpp"
#include "blowup/io/outputs.hpp"
#include "blowup/io/pipeline.hpp"
#include "blowup/io/trajectory_io.hpp"
#include "blowup/kernel/spectral.hpp"
#include "blowup/numerics/spline.hpp"

namespace fs = std::filesystem;
using namespace blowup;
using nlohmann::json;

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kUsage = 2;

int cmd_run(const fs::path& scenario_path, const fs::path& root) {
  const io::Scenario sc = io::load_scenario(scenario_path);
  if (sc.outside_classified_regime())
    std::cerr << "note: n = " << sc.n << " is below 7, the classification check is not applied\n";
  const io::RunResult r = io::run_scenario(sc, root);
  const json& m = r.manifest;
  std::cout << "scenario     " << sc.name << "\n"
            << "directory    " << r.directory.string() << "\n"
            << "status       " << m["status"].get<std::string>() << "\n";
  if (m.contains("termination")) std::cout << "termination  " << m["termination"].get<std::string>() << "\n";
  if (m.contains("t_est")) std::cout << "T_est        " << io::format_double(m["t_est"]["T"].get<double>()) << "\n";
  if (m.contains("classification"))
    std::cout << "verdict      " << m["classification"]["verdict"].get<std::string>() << "\n";
  for (const auto& [name, c] : m["checks"].items())
    std::cout << (c["passed"].get<bool>() ? "  pass  " : "  FAIL  ") << name << ": "
              << c["detail"].get<std::string>() << "\n";
  if (m.contains("error")) std::cout << "error        " << m["error"].get<std::string>() << "\n";
  return r.passed ? kOk : kChecksFailed;
}

int cmd_batch(const fs::path& dir, int jobs, const fs::path& root) {
  const auto rows = io::run_batch(io::scenario_files(dir), jobs, root);
  io::atomic_write(root / "summary.csv", io::summary_csv(rows));
  int failed = 0;
  for (const auto& r : rows) failed += r.passed ? 0 : 1;
  std::cout << rows.size() << " scenarios, " << failed << " not passed; summary in " << (root / "summary.csv").string()
            << "\n";
  return failed == 0 ? kOk : kChecksFailed;
}

int cmd_spectrum(int n, double r_max, int nodes, const std::string& out) {
  const Dimension dim = Dimension::of(n);
  kernel::GroundStateOptions opts;
  opts.r_max = r_max;
  const kernel::SpectralData data = kernel::ground_state(dim, opts);
  const auto discrete = kernel::radial_operator_spectrum(dim, r_max, nodes);
  json j;
  j["n"] = n;
  j["mu0_shooting"] = data.mu0();
  j["mu0_matrix"] = kernel::matrix_negative_eigenvalue(dim, r_max, nodes);
  j["z0_at_origin"] = data.z0(0.0);
  j["discrete_lowest"] = discrete.lowest;
  j["negative_count"] = discrete.negative_count;
  if (!out.empty()) {
    io::atomic_write(out, data.to_json().dump() + "\n");
    j["table"] = out;
  }
  std::cout << j.dump(2) << "\n";
  return discrete.negative_count == 1 ? kOk : kChecksFailed;
}

int cmd_fit(const fs::path& csv, int n, double lambda, double a) {
  const Dimension dim = Dimension::of(n);
  const io::CsvTable table = io::read_csv(csv);
  const auto r = table.column("r");
  const auto u = table.column("u");
  if (r.size() < 4) throw ConfigError("snapshot needs at least four rows");
  const decomposition::RadialFieldSampler sampler(dim, numerics::CubicSpline(r, u, 0.0));
  if (!(lambda > 0.0)) lambda = std::pow(std::abs(u.front()), -1.0 / dim.alpha);
  const auto& spectral = kernel::cached_ground_state(dim);
  auto result = decomposition::fit_orthogonal_radial(sampler, lambda, a, spectral);
  if (result.converged) decomposition::certify(sampler, result, spectral);
  std::cout << io::to_json(result).dump(2) << "\n";
  return result.converged ? kOk : kChecksFailed;
}

int cmd_theta(const fs::path& dir, std::vector<double> x, const std::vector<double>& s_range, int count,
              std::optional<double> t, double tol) {
  const solver::Trajectory traj = io::read_trajectory(dir);
  const int n = traj.grid->dim().n;
  if (x.size() == 1) x.resize(n, 0.0);
  if (static_cast<int>(x.size()) != n) throw ConfigError("--x needs 1 or n coordinates");
  if (!(s_range[0] > 0.0 && s_range[1] > s_range[0])) throw ConfigError("--s-range needs 0 < lo < hi");
  const double base = t.value_or(traj.t_est ? traj.t_est->T : traj.end_time());
  std::vector<double> s;
  for (int k = 0; k < count; ++k) s.push_back(s_range[0] * std::pow(s_range[1] / s_range[0], double(k) / (count - 1)));
  const auto report = diagnostics::theta_monotonicity_report(traj, x, base, s, {}, tol);
  std::cout << io::theta_csv(report.samples, n);
  for (const auto& v : report.violations)
    std::cerr << "violation: theta(" << v.s_hi << ") = " << v.theta_hi << " < theta(" << v.s_lo << ") = " << v.theta_lo
              << "\n";
  return report.monotone() ? kOk : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the energy-critical heat equation"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output", output, "Output root (default: $BLOWUP_LAB_OUTPUT or ./blowup_lab_output)");
  app.set_version_flag("--version", io::version());

  fs::path scenario;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);

  fs::path batch_dir;
  int jobs = 1;
  auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
  batch->add_option("dir", batch_dir)->required()->check(CLI::ExistingDirectory);
  batch->add_option("-j,--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  int n = 7;
  double r_max = 40.0;
  int nodes = 2000;
  std::string table_out;
  auto* spectrum = app.add_subcommand("spectrum", "Negative eigenpair of the linearized operator");
  spectrum->add_option("--n", n, "Dimension")->required()->check(CLI::Range(3, 64));
  spectrum->add_option("--r-max", r_max, "Truncation radius");
  spectrum->add_option("--nodes", nodes, "Matrix grid nodes");
  spectrum->add_option("--out", table_out, "Write the Z0 table as JSON");

  fs::path snapshot;
  double lambda_guess = 0.0, a_guess = 0.0;
  auto* fit = app.add_subcommand("fit", "Orthogonal bubble fit of a radial profile (columns r,u)");
  fit->add_option("snapshot", snapshot)->required()->check(CLI::ExistingFile);
  fit->add_option("--n", n, "Dimension")->check(CLI::Range(3, 64));
  fit->add_option("--lambda", lambda_guess, "Initial scale (default from u(0))");
  fit->add_option("--a", a_guess, "Initial Z0 amplitude");

  fs::path traj_dir;
  std::vector<double> x{0.0};
  std::vector<double> s_range;
  int count = 16;
  std::optional<double> base_time;
  double tol = 1e-4;
  auto* theta = app.add_subcommand("theta", "Theta at a point over a range of s, with monotonicity check");
  theta->add_option("dir", traj_dir, "Trajectory directory")->required()->check(CLI::ExistingDirectory);
  theta->add_option("--x", x, "Base point (one value means (x, 0, ..., 0))")->delimiter(',');
  theta->add_option("--s-range", s_range, "s_min s_max")->required()->expected(2);
  theta->add_option("--count", count, "Log-spaced samples")->check(CLI::Range(3, 100000));
  theta->add_option("--t", base_time, "Base time (default T_est or the last snapshot)");
  theta->add_option("--tol", tol, "Monotonicity tolerance");

  CLI11_PARSE(app, argc, argv);
  const fs::path root = output.empty() ? io::output_root() : fs::path(output);
  try {
    if (*run) return cmd_run(scenario, root);
    if (*batch) return cmd_batch(batch_dir, jobs, root);
    if (*spectrum) return cmd_spectrum(n, r_max, nodes, table_out);
    if (*fit) return cmd_fit(snapshot, n, lambda_guess, a_guess);
    if (*theta) return cmd_theta(traj_dir, x, s_range, count, base_time, tol);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kChecksFailed;
  }
  return kUsage;
}
