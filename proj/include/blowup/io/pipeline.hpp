#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "blowup/io/scenario.hpp"

namespace blowup::io {

/// BLOWUP_LAB_OUTPUT when set, otherwise ./blowup_lab_output.
std::filesystem::path output_root();

const char* version();

/// Outcome of one scenario. The manifest is also on disk as
/// <root>/<name>/manifest.json.
struct RunResult {
  std::filesystem::path directory;
  nlohmann::json manifest;
  bool passed = false;
};

/// Solver, blowup time, classification, Theta samples and monotonicity,
/// Pohozaev balance, optional parameter track, self-similar profile. The
/// manifest is written as "incomplete" before the solver starts and replaced
/// at the end; a module failure is recorded there and ends the run with
/// status "failed", keeping whatever was already written.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& root);

struct BatchRow {
  std::string file;
  std::string name;
  std::string status;  // complete, failed, config_error
  std::string termination;
  double t_est = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;
  int monotonicity_violations = 0;
  int track_violations = 0;
  int checks_failed = 0;
  bool passed = false;
  std::string error;
};

/// Runs every scenario on `parallelism` worker threads. Rows follow the
/// order of `paths`; a failing scenario only affects its own row.
std::vector<BatchRow> run_batch(const std::vector<std::filesystem::path>& paths, int parallelism,
                                const std::filesystem::path& root);

/// The *.json files of a directory, sorted by name.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir);

std::string summary_csv(const std::vector<BatchRow>& rows);

/// A manifest without the fields that depend on wall-clock time.
nlohmann::json strip_timing(nlohmann::json manifest);

}  // namespace blowup::io
