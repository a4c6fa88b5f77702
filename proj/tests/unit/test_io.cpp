#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <unistd.h>

#include "blowup/error.hpp"
#include "blowup/io/csv.hpp"
#include "blowup/io/pipeline.hpp"
#include "blowup/io/scenario.hpp"
#include "blowup/io/trajectory_io.hpp"
#include "blowup/solver/integrator.hpp"

using namespace blowup;
using namespace blowup::io;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("blowup_io_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

const json ode_json = {{"name", "ode"},
                       {"R", 1},
                       {"initial", {{"family", "constant"}, {"A", 1}}},
                       {"grid", {{"policy", "uniform"}, {"cells", 16}}},
                       {"solver", {{"mode", "reaction_only"}, {"rtol", 1e-10}, {"u_max", 1e12}}}};

const json decay_json = {{"name", "decay"},
                         {"R", 10},
                         {"initial", {{"family", "scaled_bubble"}, {"A", 0.5}}},
                         {"grid", {{"policy", "uniform"}, {"cells", 100}}},
                         {"solver", {{"t_max", 2.0}}}};

}  // namespace

TEST_CASE("a minimal scenario takes the documented defaults") {
  const Scenario s = scenario_from_json({{"initial", {{"family", "gaussian"}}}});
  CHECK(s.name == "scenario");
  CHECK(s.n == 7);
  CHECK(s.seed == 1);
  CHECK(s.grid.policy == solver::SpacingPolicy::graded);
  CHECK(s.initial.A == 1.0);
  CHECK(s.initial.sigma == 1.0);
  CHECK(s.solver.mode == solver::Mode::full);
  CHECK(s.solver.scheme == solver::Scheme::imex);
  CHECK(s.diagnostics.classify);
  CHECK_FALSE(s.diagnostics.track);
  CHECK(s.diagnostics.monotonicity_tol == 1e-4);
  CHECK(s.diagnostics.pohozaev_radii == std::vector<double>{0.5, 1.0, 5.0});
  CHECK_FALSE(s.outside_classified_regime());

  const Scenario small = scenario_from_json(ode_json);
  CHECK(small.solver.scheme == solver::Scheme::explicit_rk);
  CHECK(small.diagnostics.pohozaev_radii == std::vector<double>{0.5, 1.0});
  const auto field = initial_field(small);
  CHECK(field.values.size() == 17);
  for (double v : field.values) CHECK(v == 1.0);
}

TEST_CASE("invalid scenarios are rejected with the offending key") {
  const auto message = [](const json& j) -> std::string {
    try {
      scenario_from_json(j);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  json j = ode_json;
  j["n"] = 2;
  CHECK(message(j).find("n must be at least 3") != std::string::npos);
  j = ode_json;
  j["solver"]["rtoll"] = 1e-3;
  CHECK(message(j).find("solver.rtoll") != std::string::npos);
  j = ode_json;
  j["grid"]["cells"] = "many";
  CHECK(message(j).find("grid.cells") != std::string::npos);
  j = ode_json;
  j["grid"]["cells"] = 16.5;
  CHECK(message(j).find("grid.cells") != std::string::npos);
  j = ode_json;
  j.erase("initial");
  CHECK(message(j).find("initial") != std::string::npos);
  j = ode_json;
  j["initial"] = {{"family", "custom_table"}, {"path", "missing.csv"}};
  CHECK(message(j).find("does not exist") != std::string::npos);
  j = ode_json;
  j["initial"]["family"] = "sine";
  CHECK(message(j).find("initial.family") != std::string::npos);
  j = ode_json;
  j["diagnostics"] = {{"pohozaev_radii", {0.5, 2.0}}};
  CHECK(message(j).find("pohozaev_radii") != std::string::npos);
  j = ode_json;
  j["solver"]["mode"] = "fast";
  CHECK_FALSE(message(j).empty());
  CHECK(message(json::array()).find("object") != std::string::npos);
}

TEST_CASE("scenarios survive a round trip through JSON") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const char* families[] = {"scaled_bubble", "gaussian", "constant"};
  for (int k = 0; k < 50; ++k) {
    json j = {{"name", "s" + std::to_string(k)},
              {"n", 3 + static_cast<int>(rng() % 8)},
              {"R", 1.0 + 20.0 * U(rng)},
              {"seed", rng() % 1000},
              {"grid",
               {{"policy", U(rng) < 0.5 ? "uniform" : "graded"},
                {"cells", 16 + static_cast<int>(rng() % 500)},
                {"ratio", 1.0 + 0.1 * U(rng)},
                {"h_min", 1e-5 * (1 + U(rng))},
                {"h_max", 0.01 + U(rng)}}},
              {"initial",
               {{"family", families[rng() % 3]}, {"A", 4 * U(rng) - 2}, {"lambda", 0.1 + U(rng)}, {"sigma", 0.1 + U(rng)}}},
              {"solver",
               {{"mode", U(rng) < 0.5 ? "full" : "reaction_only"},
                {"rtol", 1e-8 + U(rng) * 1e-4},
                {"u_max", 1e4 + 1e8 * U(rng)},
                {"max_steps", 1000 + static_cast<int>(rng() % 1000)}}},
              {"diagnostics", {{"theta_s", {U(rng) + 1e-3, 1.0}}, {"track", U(rng) < 0.5}, {"pohozaev_radii", {0.5}}}}};
    const Scenario a = scenario_from_json(j);
    const json once = to_json(a);
    const Scenario b = scenario_from_json(once);
    CHECK(to_json(b) == once);
    CHECK(b.outside_classified_regime() == (b.n < 7));
  }
}

TEST_CASE("csv round trip and atomic writes") {
  TempDir dir("csv");
  CsvWriter w({"a", "b"});
  w.row({0.1, 1.0 / 3.0}).row({-1e-300, 6.02214076e23});
  atomic_write(dir.path / "t.csv", w.text());
  const CsvTable t = read_csv(dir.path / "t.csv");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.column("b")[0] == 1.0 / 3.0);
  CHECK(t.column("a")[1] == -1e-300);
  CHECK(t.index_of("b") == 1);
  CHECK_THROWS_AS(t.column("c"), ConfigError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), ConfigError);
  CHECK_THROWS_AS(w.row({1.0}), DomainError);
  CHECK(std::stod(format_double(0.1)) == 0.1);
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++files;
  CHECK(files == 1);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_file(dir.path / "t.csv") == sha256_hex(w.text()));
}

TEST_CASE("trajectories are written, read back and checked") {
  TempDir dir("traj");
  const Scenario s = scenario_from_json(ode_json);
  auto traj = solver::run_until_blowup(initial_field(s), s.solver);
  traj.t_est = solver::estimate_blowup_time(traj);
  const json index = write_trajectory(traj, dir.path);
  CHECK(index["files"].contains("snapshots.csv"));
  const auto back = read_trajectory(dir.path);
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(back.snapshots[k].time == traj.snapshots[k].time);
    CHECK(back.snapshots[k].values == traj.snapshots[k].values);
  }
  CHECK(back.mode == traj.mode);
  CHECK(back.termination == traj.termination);
  REQUIRE(back.t_est);
  CHECK(back.t_est->T == traj.t_est->T);

  std::string text = read_file(dir.path / "snapshots.csv");
  text[text.size() / 2] = text[text.size() / 2] == '1' ? '2' : '1';
  write_text(dir.path / "snapshots.csv", text);
  CHECK_THROWS_AS(read_trajectory(dir.path), ConsistencyError);
}

TEST_CASE("run_scenario on the ODE and on dissipating data") {
  TempDir dir("run");
  const auto ode = run_scenario(scenario_from_json(ode_json), dir.path);
  const json& m = ode.manifest;
  CHECK(m["status"] == "complete");
  CHECK(m["termination"] == "blowup");
  CHECK(m["t_est"]["T"].get<double>() == doctest::Approx(m["t_ode"].get<double>()).epsilon(1e-6));
  CHECK(m["checks"]["blowup_rate"]["passed"].get<bool>());
  CHECK(m["classification"]["verdict"] == "TypeI");
  CHECK(fs::exists(ode.directory / "manifest.json"));
  CHECK(json::parse(read_file(ode.directory / "manifest.json")) == m);
  for (const auto& [name, hash] : m["files"].items()) CHECK(sha256_file(ode.directory / name) == hash.get<std::string>());

  const auto decay = run_scenario(scenario_from_json(decay_json), dir.path);
  CHECK(decay.manifest["status"] == "complete");
  CHECK(decay.manifest["termination"] == "time_limit");
  CHECK_FALSE(decay.manifest.contains("t_est"));
  CHECK(decay.manifest["classification"]["verdict"] == "Regular");
}

TEST_CASE("batches keep input order and do not depend on parallelism") {
  TempDir dir("batch");
  fs::create_directories(dir.path / "in");
  json a = ode_json, b = ode_json, c = decay_json;
  a["name"] = "alpha";
  b["name"] = "beta";
  b["initial"]["A"] = 2.0;
  write_text(dir.path / "in" / "a.json", a.dump());
  write_text(dir.path / "in" / "b.json", b.dump());
  write_text(dir.path / "in" / "c.json", c.dump());
  write_text(dir.path / "in" / "d.json", "{\"initial\": ");
  const auto files = scenario_files(dir.path / "in");
  REQUIRE(files.size() == 4);
  const auto one = run_batch(files, 1, dir.path / "one");
  const auto four = run_batch(files, 4, dir.path / "four");
  REQUIRE(one.size() == 4);
  CHECK(one[0].name == "alpha");
  CHECK(one[1].name == "beta");
  CHECK(one[2].name == "decay");
  CHECK(one[3].status == "config_error");
  CHECK(one[1].t_est == doctest::Approx(std::pow(2.0, -0.8) * 1.25).epsilon(1e-6));
  CHECK(summary_csv(one) == summary_csv(four));
  for (const char* name : {"alpha", "beta", "decay"}) {
    const auto m1 = json::parse(read_file(dir.path / "one" / name / "manifest.json"));
    const auto m4 = json::parse(read_file(dir.path / "four" / name / "manifest.json"));
    CHECK(m1.contains("elapsed_seconds"));
    CHECK_FALSE(strip_timing(m1).contains("elapsed_seconds"));
    CHECK(strip_timing(m1) == strip_timing(m4));
  }
  CHECK(run_batch({}, 4, dir.path / "none").empty());
  CHECK(summary_csv({}).find('\n') == summary_csv({}).size() - 1);

  // duplicate names only fail the later file
  write_text(dir.path / "in" / "e.json", a.dump());
  const auto dup = run_batch(scenario_files(dir.path / "in"), 2, dir.path / "dup");
  CHECK(dup[0].status == "complete");
  CHECK(dup[4].status == "config_error");
  CHECK(dup[4].error.find("already used") != std::string::npos);
}

TEST_CASE("output root follows the environment") {
  ::unsetenv("BLOWUP_LAB_OUTPUT");
  CHECK(output_root() == fs::path("blowup_lab_output"));
  ::setenv("BLOWUP_LAB_OUTPUT", "/tmp/elsewhere", 1);
  CHECK(output_root() == fs::path("/tmp/elsewhere"));
  ::unsetenv("BLOWUP_LAB_OUTPUT");
  CHECK(std::string(version()) == "0.1.0");
}
