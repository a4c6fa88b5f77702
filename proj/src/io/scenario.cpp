#include "blowup/io/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "blowup/error.hpp"
#include "blowup/io/csv.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/numerics/spline.hpp"

namespace blowup::io {

namespace {

using nlohmann::json;

// Reads keys of one object and rejects any it did not ask for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + " must be a number");
      out = v->get<double>();
    }
  }
  template <class Int>
  void integer(const char* key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + " must be an integer");
      out = v->get<Int>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + " must be true or false");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }
  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(where(key) + " must be an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) throw ConfigError(where(key) + " must be an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  const json* object(const char* key) { return find(key); }
  bool has(const char* key) const { return j_.contains(key); }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "scenario" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown key " + where(key));
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  s.base_dir = base_dir;
  Section top(j, "");
  top.string("name", s.name);
  top.integer("n", s.n);
  double R = s.grid.radius;
  top.number("R", R);
  s.grid.radius = R;
  top.integer("seed", s.seed);

  if (const json* g = top.object("grid")) {
    Section sec(*g, "grid");
    std::string policy = solver::to_string(s.grid.policy);
    sec.string("policy", policy);
    try {
      s.grid.policy = solver::spacing_policy_from_string(policy);
    } catch (const ConfigError&) {
      throw ConfigError("grid.policy must be uniform or graded, got " + policy);
    }
    sec.integer("cells", s.grid.cells);
    sec.number("ratio", s.grid.ratio);
    sec.number("h_min", s.grid.h_min);
    sec.number("h_max", s.grid.h_max);
    sec.finish();
  }

  require(top.has("initial"), "initial is required");
  {
    Section sec(*top.object("initial"), "initial");
    sec.string("family", s.initial.family);
    sec.number("A", s.initial.A);
    sec.number("lambda", s.initial.lambda);
    sec.number("sigma", s.initial.sigma);
    sec.string("path", s.initial.path);
    sec.finish();
  }

  if (const json* v = top.object("solver")) {
    Section sec(*v, "solver");
    auto& c = s.solver;
    std::string mode = solver::to_string(c.mode);
    std::string scheme = solver::to_string(c.scheme);
    sec.string("mode", mode);
    const bool scheme_given = sec.has("scheme");
    sec.string("scheme", scheme);
    try {
      c.mode = solver::mode_from_string(mode);
      c.scheme = solver::scheme_from_string(scheme);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }
    // Reaction-only runs want the high-order scheme unless told otherwise.
    if (!scheme_given && c.mode == solver::Mode::reaction_only) c.scheme = solver::Scheme::explicit_rk;
    sec.number("rtol", c.rtol);
    sec.number("atol", c.atol);
    sec.number("c_safe", c.c_safe);
    sec.number("u_max", c.u_max);
    sec.number("t_max", c.t_max);
    sec.number("dt_initial", c.dt_initial);
    sec.integer("max_steps", c.max_steps);
    sec.number("snapshot_log_stride", c.snapshot_log_stride);
    sec.number("snapshot_time_stride", c.snapshot_time_stride);
    sec.finish();
  }

  bool radii_given = false;
  if (const json* v = top.object("diagnostics")) {
    Section sec(*v, "diagnostics");
    auto& d = s.diagnostics;
    sec.numbers("theta_s", d.theta_s);
    sec.boolean("classify", d.classify);
    sec.boolean("monotonicity", d.monotonicity);
    sec.number("monotonicity_tol", d.monotonicity_tol);
    radii_given = sec.has("pohozaev_radii");
    sec.numbers("pohozaev_radii", d.pohozaev_radii);
    sec.number("pohozaev_tol", d.pohozaev_tol);
    sec.boolean("track", d.track);
    sec.boolean("profile", d.profile);
    sec.finish();
  }
  top.finish();
  if (!radii_given) std::erase_if(s.diagnostics.pohozaev_radii, [&](double r) { return r > s.grid.radius; });

  require(s.n >= 3, "n must be at least 3, got " + std::to_string(s.n));
  require(!s.name.empty() && s.name.find('/') == std::string::npos, "name must be a non-empty file name");
  require(s.grid.radius > 0.0, "R must be positive");
  require(s.grid.cells >= 16, "grid.cells must be at least 16");
  require(s.grid.ratio >= 1.0 && s.grid.h_min > 0.0 && s.grid.h_max >= s.grid.h_min,
          "grid needs ratio >= 1 and 0 < h_min <= h_max");
  const auto& in = s.initial;
  require(in.family == "scaled_bubble" || in.family == "gaussian" || in.family == "constant" ||
              in.family == "custom_table",
          "initial.family must be scaled_bubble, gaussian, constant or custom_table, got " + in.family);
  require(std::isfinite(in.A), "initial.A must be finite");
  require(in.lambda > 0.0, "initial.lambda must be positive");
  require(in.sigma > 0.0, "initial.sigma must be positive");
  if (in.family == "custom_table") {
    require(!in.path.empty(), "initial.path is required for custom_table");
    const auto full = s.base_dir / in.path;
    require(std::filesystem::is_regular_file(full), "initial.path does not exist: " + full.string());
  }
  const auto& c = s.solver;
  require(c.rtol > 0.0 && c.atol >= 0.0, "solver tolerances must be positive");
  require(c.c_safe > 0.0 && c.u_max > 0.0 && c.t_max > 0.0 && c.dt_initial > 0.0 && c.max_steps > 0,
          "solver limits must be positive");
  require(c.snapshot_log_stride > 0.0 && c.snapshot_time_stride > 0.0, "snapshot strides must be positive");
  for (double v : s.diagnostics.theta_s) require(v > 0.0, "diagnostics.theta_s entries must be positive");
  for (double v : s.diagnostics.pohozaev_radii)
    require(v > 0.0 && v <= s.grid.radius, "diagnostics.pohozaev_radii must lie in (0, R]");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j, path.parent_path());
}

json to_json(const Scenario& s) {
  const auto& c = s.solver;
  const auto& d = s.diagnostics;
  json j;
  j["name"] = s.name;
  j["n"] = s.n;
  j["R"] = s.grid.radius;
  j["seed"] = s.seed;
  j["grid"] = {{"policy", solver::to_string(s.grid.policy)},
               {"cells", s.grid.cells},
               {"ratio", s.grid.ratio},
               {"h_min", s.grid.h_min},
               {"h_max", s.grid.h_max}};
  j["initial"] = {{"family", s.initial.family},
                  {"A", s.initial.A},
                  {"lambda", s.initial.lambda},
                  {"sigma", s.initial.sigma},
                  {"path", s.initial.path}};
  j["solver"] = {{"mode", solver::to_string(c.mode)},
                 {"scheme", solver::to_string(c.scheme)},
                 {"rtol", c.rtol},
                 {"atol", c.atol},
                 {"c_safe", c.c_safe},
                 {"u_max", c.u_max},
                 {"t_max", c.t_max},
                 {"dt_initial", c.dt_initial},
                 {"max_steps", c.max_steps},
                 {"snapshot_log_stride", c.snapshot_log_stride},
                 {"snapshot_time_stride", c.snapshot_time_stride}};
  j["diagnostics"] = {{"theta_s", d.theta_s},
                      {"classify", d.classify},
                      {"monotonicity", d.monotonicity},
                      {"monotonicity_tol", d.monotonicity_tol},
                      {"pohozaev_radii", d.pohozaev_radii},
                      {"pohozaev_tol", d.pohozaev_tol},
                      {"track", d.track},
                      {"profile", d.profile}};
  return j;
}

solver::RadialField initial_field(const Scenario& s) {
  const Dimension dim = Dimension::of(s.n);
  const solver::GridPtr grid = solver::RadialGrid::make(dim, s.grid);
  std::vector<double> v(grid->size());
  const auto& in = s.initial;
  if (in.family == "scaled_bubble") {
    const double amp = in.A * std::pow(in.lambda, -dim.alpha);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * kernel::UnitBubble::value((*grid)[i] / in.lambda, dim);
  } else if (in.family == "gaussian") {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double r = (*grid)[i];
      v[i] = in.A * std::exp(-r * r / (2.0 * in.sigma * in.sigma));
    }
  } else if (in.family == "constant") {
    std::fill(v.begin(), v.end(), in.A);
  } else {
    const CsvTable table = read_csv(s.base_dir / in.path);
    const auto r = table.column("r");
    const auto u = table.column("u");
    if (r.size() < 4) throw ConfigError("custom table needs at least four rows");
    const numerics::CubicSpline spline(r, u);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = (*grid)[i];
      v[i] = x >= spline.front() && x <= spline.back() ? spline(x) : 0.0;
    }
  }
  return solver::RadialField(grid, std::move(v), 0.0);
}

}  // namespace blowup::io
