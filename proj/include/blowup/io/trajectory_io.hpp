#pragma once

#include <filesystem>
#include <json.hpp>

#include "blowup/solver/trajectory.hpp"

namespace blowup::io {

/// Writes grid.csv, snapshots.csv (t then one column per node), dudt.csv
/// (when every snapshot carries it), sup_history.csv, budget.csv and
/// trajectory.json, which lists each file's SHA-256. Returns that index.
nlohmann::json write_trajectory(const solver::Trajectory& traj, const std::filesystem::path& dir);

/// Reads a directory written by write_trajectory. Throws ConsistencyError
/// when a file no longer matches its recorded checksum.
solver::Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace blowup::io
