#include "blowup/io/trajectory_io.hpp"

#include "blowup/error.hpp"
#include "blowup/io/csv.hpp"

namespace blowup::io {

using nlohmann::json;

namespace {

std::vector<std::string> node_header(std::size_t nodes) {
  std::vector<std::string> h{"t"};
  for (std::size_t i = 0; i < nodes; ++i) h.push_back("u" + std::to_string(i));
  return h;
}

std::string field_table(const solver::Trajectory& traj, bool derivative) {
  CsvWriter w(node_header(traj.grid->size()));
  std::vector<double> row;
  for (const auto& f : traj.snapshots) {
    row.assign(1, f.time);
    const auto& v = derivative ? f.dudt : f.values;
    row.insert(row.end(), v.begin(), v.end());
    w.row(row);
  }
  return w.text();
}

}  // namespace

json write_trajectory(const solver::Trajectory& traj, const std::filesystem::path& dir) {
  if (!traj.grid || traj.snapshots.empty()) throw DomainError("cannot write an empty trajectory");
  std::map<std::string, std::string> files;

  CsvWriter grid({"r"});
  for (double r : traj.grid->nodes()) grid.row({r});
  files["grid.csv"] = grid.text();
  files["snapshots.csv"] = field_table(traj, false);
  const bool have_dudt = std::all_of(traj.snapshots.begin(), traj.snapshots.end(),
                                     [](const solver::RadialField& f) { return !f.dudt.empty(); });
  if (have_dudt) files["dudt.csv"] = field_table(traj, true);
  CsvWriter sup({"t", "sup", "dt"});
  for (const auto& s : traj.sup_history) sup.row({s.t, s.sup, s.dt});
  files["sup_history.csv"] = sup.text();
  CsvWriter budget({"t", "increment", "cumulative"});
  for (std::size_t i = 0; i < traj.budget.times.size(); ++i)
    budget.row({traj.budget.times[i], traj.budget.increments[i], traj.budget.cumulative[i]});
  files["budget.csv"] = budget.text();

  json index;
  index["n"] = traj.grid->dim().n;
  index["grid_policy"] = solver::to_string(traj.grid->policy());
  index["mode"] = solver::to_string(traj.mode);
  index["termination"] = solver::to_string(traj.termination);
  index["flagged"] = traj.flagged;
  index["diagnostic"] = traj.diagnostic;
  if (traj.t_est) {
    const auto& e = *traj.t_est;
    index["t_est"] = {{"T", e.T},           {"uncertainty", e.uncertainty}, {"exponent", e.exponent},
                      {"kappa_fit", e.kappa_fit}, {"decades", e.decades},       {"samples", e.samples},
                      {"rms_residual", e.rms_residual}};
  }
  for (const auto& [name, text] : files) {
    atomic_write(dir / name, text);
    index["files"][name] = sha256_hex(text);
  }
  atomic_write(dir / "trajectory.json", index.dump(2) + "\n");
  return index;
}

solver::Trajectory read_trajectory(const std::filesystem::path& dir) {
  json index;
  try {
    index = json::parse(read_file(dir / "trajectory.json"));
  } catch (const json::parse_error& e) {
    throw ConsistencyError("trajectory.json is corrupt: " + std::string(e.what()));
  }
  std::map<std::string, CsvTable> tables;
  for (const auto& [name, digest] : index.at("files").items()) {
    const std::string text = read_file(dir / name);
    if (sha256_hex(text) != digest.get<std::string>())
      throw ConsistencyError(name + " does not match its recorded checksum");
    tables[name] = parse_csv(text, (dir / name).string());
  }
  for (const char* required : {"grid.csv", "snapshots.csv", "sup_history.csv", "budget.csv"})
    if (!tables.count(required)) throw ConsistencyError(std::string("trajectory index lacks ") + required);

  const Dimension dim = Dimension::of(index.at("n").get<int>());
  auto grid = std::make_shared<const solver::RadialGrid>(
      dim, tables["grid.csv"].column("r"), solver::spacing_policy_from_string(index.at("grid_policy")));
  solver::Trajectory traj;
  traj.grid = grid;
  traj.mode = solver::mode_from_string(index.at("mode"));
  traj.termination = solver::termination_from_string(index.at("termination"));
  traj.flagged = index.value("flagged", false);
  traj.diagnostic = index.value("diagnostic", std::string());

  const auto& snaps = tables["snapshots.csv"];
  if (snaps.header.size() != grid->size() + 1) throw ConsistencyError("snapshots.csv does not match grid.csv");
  const CsvTable* dudt = tables.count("dudt.csv") ? &tables["dudt.csv"] : nullptr;
  if (dudt && dudt->rows.size() != snaps.rows.size()) throw ConsistencyError("dudt.csv does not match snapshots.csv");
  for (std::size_t k = 0; k < snaps.rows.size(); ++k) {
    const auto& row = snaps.rows[k];
    solver::RadialField f(grid, std::vector<double>(row.begin() + 1, row.end()), row[0]);
    if (dudt) f.dudt.assign(dudt->rows[k].begin() + 1, dudt->rows[k].end());
    traj.snapshots.push_back(std::move(f));
  }
  if (traj.snapshots.empty()) throw ConsistencyError("trajectory has no snapshots");
  for (const auto& r : tables["sup_history.csv"].rows) traj.sup_history.push_back({r[0], r[1], r[2]});
  for (const auto& r : tables["budget.csv"].rows) {
    traj.budget.times.push_back(r[0]);
    traj.budget.increments.push_back(r[1]);
    traj.budget.cumulative.push_back(r[2]);
  }
  if (index.contains("t_est")) {
    const auto& e = index["t_est"];
    solver::BlowupEstimate est;
    est.T = e.at("T");
    est.uncertainty = e.at("uncertainty");
    est.exponent = e.at("exponent");
    est.kappa_fit = e.at("kappa_fit");
    est.decades = e.at("decades");
    est.samples = e.at("samples");
    est.rms_residual = e.at("rms_residual");
    traj.t_est = est;
  }
  return traj;
}

}  // namespace blowup::io
