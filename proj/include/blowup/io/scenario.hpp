#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "blowup/solver/grid.hpp"
#include "blowup/solver/integrator.hpp"

namespace blowup::io {

/// Initial data family: scaled_bubble (A W_{0,lambda}), gaussian
/// (A exp(-r^2 / (2 sigma^2))), constant (A), or custom_table (r,u CSV).
struct InitialData {
  std::string family = "scaled_bubble";
  double A = 1.0;
  double lambda = 1.0;
  double sigma = 1.0;
  std::string path;  // custom_table, relative to the scenario file
};

struct DiagnosticPlan {
  std::vector<double> theta_s;  // Theta at the origin and T_est for these s
  bool classify = true;
  bool monotonicity = true;
  double monotonicity_tol = 1e-4;
  std::vector<double> pohozaev_radii{0.5, 1.0, 5.0};  // defaults beyond R are dropped
  /// Relative to the larger side, or to the largest ball integral over the
  /// probed radii divided by r when that is bigger.
  double pohozaev_tol = 1e-2;
  bool track = false;
  bool profile = true;
};

struct Scenario {
  std::string name = "scenario";
  int n = 7;
  solver::GridSpec grid;  // grid.radius is the domain radius R
  InitialData initial;
  solver::SolverConfig solver;
  DiagnosticPlan diagnostics;
  std::uint64_t seed = 1;
  std::filesystem::path base_dir;  // directory of the scenario file

  /// n < 7 lies outside the range where the Type I/II classification is known.
  bool outside_classified_regime() const { return n < 7; }
};

/// Strict parse: unknown keys, wrong types and invariant violations throw
/// ConfigError naming the offending key.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Every field, defaults included.
nlohmann::json to_json(const Scenario& s);

/// Initial data sampled on the scenario's grid.
solver::RadialField initial_field(const Scenario& s);

}  // namespace blowup::io
