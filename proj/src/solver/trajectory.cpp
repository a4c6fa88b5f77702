#include "blowup/solver/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup::solver {

std::string to_string(Mode mode) { return mode == Mode::full ? "full" : "reaction_only"; }
std::string to_string(Scheme scheme) { return scheme == Scheme::imex ? "imex" : "explicit_rk"; }

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::blowup: return "blowup";
    case Termination::time_limit: return "time_limit";
    case Termination::step_limit: return "step_limit";
    case Termination::aborted: return "aborted";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "full") return Mode::full;
  if (name == "reaction_only") return Mode::reaction_only;
  throw ConfigError("unknown solver mode '" + name + "'");
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "imex") return Scheme::imex;
  if (name == "explicit_rk") return Scheme::explicit_rk;
  throw ConfigError("unknown time scheme '" + name + "'");
}

Termination termination_from_string(const std::string& name) {
  for (auto t : {Termination::blowup, Termination::time_limit, Termination::step_limit, Termination::aborted})
    if (to_string(t) == name) return t;
  throw ConfigError("unknown termination reason '" + name + "'");
}

void TimeDerivativeBudget::add(double t, double increment) {
  times.push_back(t);
  increments.push_back(increment);
  cumulative.push_back(total() + increment);
}

double TimeDerivativeBudget::at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0.0;
  return cumulative[static_cast<std::size_t>(it - times.begin()) - 1];
}

Trajectory Trajectory::from_snapshots(GridPtr grid, std::vector<RadialField> fields, Mode mode) {
  if (fields.empty()) throw DomainError("trajectory needs at least one snapshot");
  Trajectory traj;
  traj.grid = grid;
  traj.mode = mode;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (fields[k].grid != grid || fields[k].values.size() != grid->size())
      throw DomainError("snapshot does not live on the trajectory grid");
    if (k > 0 && !(fields[k].time > fields[k - 1].time))
      throw DomainError("snapshot times must increase strictly");
    traj.sup_history.push_back({fields[k].time, fields[k].sup(), k > 0 ? fields[k].time - fields[k - 1].time : 0.0});
  }
  traj.snapshots = std::move(fields);
  return traj;
}

bool Trajectory::covers(double t) const {
  return !snapshots.empty() && t >= start_time() && t <= end_time();
}

std::size_t Trajectory::interval(double t) const {
  if (!covers(t))
    throw RangeError("time " + std::to_string(t) + " outside trajectory [" + std::to_string(start_time()) + ", " +
                     std::to_string(end_time()) + "]");
  const auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t,
                                   [](double v, const RadialField& f) { return v < f.time; });
  const auto k = static_cast<std::size_t>(it - snapshots.begin());
  return k == 0 ? 0 : std::min(k - 1, snapshots.size() >= 2 ? snapshots.size() - 2 : 0);
}

std::vector<double> Trajectory::values_at(double t) const {
  const std::size_t k = interval(t);
  if (snapshots.size() == 1) return snapshots[0].values;
  const auto& a = snapshots[k];
  const auto& b = snapshots[k + 1];
  const double w = (t - a.time) / (b.time - a.time);
  std::vector<double> out(a.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * a.values[i] + w * b.values[i];
  return out;
}

std::vector<double> Trajectory::snapshot_dudt(std::size_t k) const {
  const auto& s = snapshots.at(k);
  if (!s.dudt.empty()) return s.dudt;
  std::vector<double> out(s.values.size(), 0.0);
  if (snapshots.size() == 1) return out;
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = k + 1 == snapshots.size() ? k : k + 1;
  const double dt = snapshots[hi].time - snapshots[lo].time;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (snapshots[hi].values[i] - snapshots[lo].values[i]) / dt;
  return out;
}

std::vector<double> Trajectory::dudt_at(double t) const {
  const std::size_t k = interval(t);
  if (snapshots.size() == 1) return snapshot_dudt(0);
  const auto a = snapshot_dudt(k);
  const auto b = snapshot_dudt(k + 1);
  const double w = (t - snapshots[k].time) / (snapshots[k + 1].time - snapshots[k].time);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

}  // namespace blowup::solver
